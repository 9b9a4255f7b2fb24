"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel is run on identical inputs under both backends; outputs are
compared before timing so a speedup is never reported for a wrong answer.
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from affinehsp import kernels


def cases(p: int = 10007):
    rng = np.random.default_rng(0)
    g = 5  # primitive root mod 10007
    ms = rng.integers(1, p, size=4000)
    bits = rng.integers(0, 2, size=4000)
    symbols = rng.integers(0, 8, size=p)
    a_inv = rng.integers(1, p, size=2000)
    shifts = rng.integers(0, p, size=2000)
    xs = rng.integers(0, p, size=67)
    return {
        "power_table": lambda: kernels.power_table(g, p - 1, p),
        "dlog_table": lambda: kernels.dlog_table(g, p),
        "loglik_scan": lambda: kernels.loglik_scan(ms, bits, p),
        "affine_pullback": lambda: kernels.affine_pullback(symbols, a_inv, shifts, xs, p),
    }


def run(repeat: int) -> list[dict]:
    backends = kernels.available()
    rows = []
    for name, fn in cases().items():
        ref, row = None, {"kernel": name}
        for b in backends:
            kernels.use_backend(b)
            out = fn()
            if ref is None:
                ref = out
            elif not np.allclose(np.nan_to_num(out, neginf=-1e300), np.nan_to_num(ref, neginf=-1e300)):
                raise AssertionError(f"{name}: backends disagree")
            row[b] = min(timeit.repeat(fn, number=1, repeat=repeat))
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    kernels.use_backend(backends[0] if "cython" not in backends else "cython")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args()
    rows = run(args.repeat)
    for r in rows:
        py, cy = r["python"], r.get("cython")
        extra = f"  cython {cy * 1e3:9.3f} ms  x{r['speedup']:.1f}" if cy else "  (cython not built)"
        print(f"{r['kernel']:16s} python {py * 1e3:9.3f} ms{extra}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
