from __future__ import annotations

import json
import subprocess
import sys

import pytest

from affinehsp.cli import main
from affinehsp.extension import quaternion_central


def run_json(capsys, *argv):
    code = main(list(argv) + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_hcp_example(capsys):
    code, doc = run_json(capsys, "hcp", "--p", "103", "--q", "102", "--b", "17", "--seed", "1")
    assert code == 0
    assert doc["schema"] == 1 and doc["recovered"] == 17 and doc["correct"]
    assert doc["config"]["params"]["flags"]["b"] == 17
    assert "seconds" not in json.dumps(doc)


def test_timing_flag_adds_seconds(capsys):
    _, doc = run_json(capsys, "hcp", "--p", "23", "--b", "3", "--seed", "1", "--timing")
    assert "seconds" in json.dumps(doc)


def test_hsp_and_shift(capsys):
    code, doc = run_json(capsys, "hsp", "--p", "7", "--q", "3", "--hidden", "conjugate:3:2", "--seed", "0")
    assert code == 0 and doc["correct"]
    code, doc = run_json(capsys, "shift", "--p", "103", "--r", "6", "--s", "40", "--seed", "2")
    assert code == 0 and doc["recovered"] == 40


def test_deterministic_across_threads(capsys):
    args = ["hcp", "--p", "103", "--runs", "4", "--seed", "5"]
    _, one = run_json(capsys, *args, "--threads", "1")
    _, four = run_json(capsys, *args, "--threads", "4")
    one["config"]["params"]["flags"].pop("threads", None)
    four["config"]["params"]["flags"].pop("threads", None)
    assert one == four


def test_dist_csv(capsys, tmp_path):
    out = tmp_path / "d.csv"
    assert main(["dist", "--p", "7", "--q", "3", "--b", "1", "--out", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r\n" in raw
    lines = raw.decode().splitlines()
    assert lines[0].startswith("# ")
    header = next(ln for ln in lines if not ln.startswith("#"))
    assert header.endswith("probability")
    rows = [ln for ln in lines if not ln.startswith("#")][1:]
    assert sum(float(r.rsplit(",", 1)[1]) for r in rows) == pytest.approx(1.0)


def test_gauss_csv(capsys):
    assert main(["gauss", "--p", "7"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [ln for ln in lines if not ln.startswith("#")]
    assert rows[0] == "s,t,re,im,abs,degenerate_value"
    assert len(rows) == 1 + 7 * 6


@pytest.mark.parametrize("argv", [
    ["hcp", "--p", "100", "--seed", "1"],
    ["hcp", "--p", "103", "--q", "5", "--seed", "1"],
    ["hcp", "--p", "103", "--q", "17", "--a", "2", "--seed", "1"],
    ["hsp", "--p", "7", "--hidden", "bogus", "--seed", "1"],
    ["info", "--p", "29", "--mode", "order", "--hidden", "normal:2", "--seed", "3"],
    ["hcp", "--p", "23", "--b", "1", "--seed", "1", "--threads", "0"],
])
def test_bad_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_solver_failure_exit_1(capsys):
    # q far below the regime where row sampling separates shifts
    code = main(["hcp", "--p", "1009", "--q", "7", "--b", "3", "--seed", "1", "--trials", "20"])
    assert code == 1


def test_extension_builtin_and_table(capsys, tmp_path):
    code, doc = run_json(capsys, "extension", "--seed", "0", "--hidden", "(i,5)")
    assert code == 0 and doc["correct"] and len(doc["hidden"]) == 12
    path = tmp_path / "g.json"
    path.write_text(quaternion_central().to_json())
    code, doc = run_json(capsys, "extension", "--table", str(path), "--seed", "1")
    assert code == 0 and doc["correct"]


def test_acceptance_subset(capsys):
    code, doc = run_json(capsys, "acceptance", "--criteria", "1", "12", "--quiet")
    assert code == 0 and doc["passed"] == doc["total"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "affinehsp", "gauss", "--p", "5", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["schema"] == 1
