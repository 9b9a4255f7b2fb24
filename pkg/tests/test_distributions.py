from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from affinehsp.distributions import (MismatchedSpaces, OutcomeDistribution, l1_distance, mixture,
                                     total_variation)


def two():
    d1 = OutcomeDistribution.from_dict(("x",), {(0,): 0.5, (1,): 0.5})
    d2 = OutcomeDistribution.from_dict(("x",), {(1,): 0.25, (2,): 0.75})
    return d1, d2


def test_normalisation_enforced():
    with pytest.raises(ValueError):
        OutcomeDistribution(("x",), [(0,), (1,)], np.array([0.5, 0.6]))


def test_tv_on_union_support():
    d1, d2 = two()
    assert total_variation(d1, d2) == pytest.approx(0.75)
    assert l1_distance(d1, d2) == pytest.approx(1.5)
    assert total_variation(d1, d1) == 0.0


def test_tv_point_vs_uniform():
    n = 10
    u = OutcomeDistribution.uniform(("x",), [(i,) for i in range(n)])
    pt = OutcomeDistribution.from_dict(("x",), {(0,): 1.0})
    assert total_variation(u, pt) == pytest.approx(1 - 1 / n)


def test_tv_metric_spot_checks():
    rng = np.random.default_rng(0)
    ds = []
    for _ in range(6):
        w = rng.random(5)
        ds.append(OutcomeDistribution(("x",), [(i,) for i in range(5)], w / w.sum()))
    for a in ds:
        for b in ds:
            assert total_variation(a, b) == pytest.approx(total_variation(b, a))
            for c in ds:
                assert total_variation(a, c) <= total_variation(a, b) + total_variation(b, c) + 1e-12


def test_mismatched_fields():
    d1, _ = two()
    other = OutcomeDistribution.from_dict(("y",), {(0,): 1.0})
    with pytest.raises(MismatchedSpaces):
        total_variation(d1, other)


def test_marginal_condition_mixture():
    d = OutcomeDistribution.from_dict(("a", "b"), {(0, 0): 0.1, (0, 1): 0.3, (1, 0): 0.6})
    m = d.marginal(["a"])
    assert m.prob((0,)) == pytest.approx(0.4)
    c = d.condition("a", lambda v: v == 0)
    assert c.prob((0, 1)) == pytest.approx(0.75)
    mix = mixture([d, d], [0.5, 0.5])
    assert mix.max_abs_diff(d) < 1e-15


def test_sampling_reproducible():
    d1, _ = two()
    a = d1.sample(np.random.default_rng(3), size=50)
    b = d1.sample(np.random.default_rng(3), size=50)
    assert a == b
    assert set(a) <= {(0,), (1,)}


def test_csv_and_json_roundtrip():
    d = OutcomeDistribution.from_dict(("name", "i"), {("a,b", 0): 0.25, ("c", 1): 0.75},
                                      meta={"note": "x"})
    text = d.to_csv()
    body = [ln for ln in text.split("\r\n") if ln and not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    assert rows[0] == ["name", "i", "probability"]
    assert rows[1][0] == "a,b"
    obj = json.loads(d.to_json())
    assert sum(obj["probabilities"]) == pytest.approx(1.0)
