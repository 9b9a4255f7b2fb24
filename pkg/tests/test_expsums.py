from __future__ import annotations

import math

import numpy as np
import pytest

from affinehsp import numtheory as nt
from affinehsp.expsums import (CharacterPair, concentration_experiment, cosine_gap_sum,
                               gauss_degenerate_value, gauss_sum, gauss_sum_direct, gauss_table,
                               incomplete_gauss_sum, incomplete_gauss_sum_direct,
                               incomplete_sum_profile, regime, tv_cosine_identity)

SMALL_PRIMES = [p for p in range(3, 104) if nt.is_prime(p)]


def test_degenerate_values():
    p = 31
    assert gauss_sum(CharacterPair(p, 0, 0)) == pytest.approx(p - 1)
    assert abs(gauss_sum(CharacterPair(p, 0, 4))) < 1e-9
    assert gauss_sum(CharacterPair(p, 3, 0)) == pytest.approx(-1)
    assert gauss_degenerate_value(p, 0, 0) == p - 1
    assert gauss_degenerate_value(p, 0, 4) == 0
    assert gauss_degenerate_value(p, 3, 0) == -1
    assert gauss_degenerate_value(p, 3, 4) is None


def test_modulus_p103():
    pair = CharacterPair(103, 5, 7)
    assert abs(abs(gauss_sum(pair)) - math.sqrt(103)) < 1e-9
    assert abs(gauss_sum(pair) - gauss_sum_direct(pair)) < 1e-9


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_table_moduli(p):
    G = gauss_table(p)
    assert abs(np.abs(G[1:, 1:]) - math.sqrt(p)).max() < 1e-9
    assert abs(G[0, 0] - (p - 1)) < 1e-9
    assert np.abs(G[0, 1:]).max() < 1e-9
    assert np.abs(G[1:, 0] + 1).max() < 1e-9


def test_table_matches_scalar():
    G = gauss_table(23)
    for s, t in [(1, 1), (5, 7), (22, 21)]:
        assert abs(G[s, t] - gauss_sum(CharacterPair(23, s, t))) < 1e-9


def test_incomplete_full_group():
    p = 103
    g = nt.primitive_root(p)
    assert incomplete_gauss_sum(1, g, p) == pytest.approx(-1)


def test_incomplete_two_paths():
    p = 103
    a = pow(nt.primitive_root(p), 2, p)
    assert nt.multiplicative_order(a, p) == 51
    for t in (1, 2, 50):
        assert abs(incomplete_gauss_sum(t, a, p) - incomplete_gauss_sum_direct(t, a, p)) < 1e-9


def test_incomplete_profile_large_regime():
    prof = incomplete_sum_profile(1019, 509)
    assert prof["regime"] == "large"
    assert prof["max_abs"] <= prof["bound_shape"]
    assert regime(1019, 2) == "unbounded"
    assert incomplete_sum_profile(1019, 2)["fitted_constant"] is None


@pytest.mark.parametrize("p", [23, 103])
def test_cosine_identity(p):
    for b in range(1, p):
        for c in range(1, p):
            if c in (b, p - b):
                continue
            assert tv_cosine_identity(p, b, c)
    assert cosine_gap_sum(p, 3, p - 3) == pytest.approx(0.0, abs=1e-9)


def test_concentration_full_rank_zero_tail():
    rows = concentration_experiment(32, 32, 500, seed=0)
    assert all(r.tail == 0.0 for r in rows)


def test_concentration_reference_cases():
    (r1,) = concentration_experiment(64, 1024, 10**4, seed=1, deltas=(0.5,))
    assert r1.vacuous and r1.ok
    (r2,) = concentration_experiment(256, 1024, 10**4, seed=1, deltas=(1.0,))
    assert r2.bound == pytest.approx(4 * math.exp(-256 / 48))
    assert r2.ok


def test_concentration_chunking_invariant():
    a = concentration_experiment(8, 64, 3000, seed=5, chunk=1000)
    b = concentration_experiment(8, 64, 3000, seed=5, chunk=1000)
    assert [r.tail for r in a] == [r.tail for r in b]
