from __future__ import annotations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affinehsp import numtheory as nt

PRIMES = [3, 5, 7, 11, 13, 23, 29, 101, 103, 1009, 10007]


@pytest.mark.parametrize("p", PRIMES)
def test_primitive_root_generates(p):
    g = nt.primitive_root(p)
    assert nt.multiplicative_order(g, p) == p - 1
    assert nt.is_generator(g, p)


def test_divisors_and_factorize():
    assert nt.divisors(28) == [1, 2, 4, 7, 14, 28]
    assert nt.factorize(102) == {2: 1, 3: 1, 17: 1}


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=10**6))
@settings(max_examples=200, deadline=None)
def test_discrete_log_roundtrip(p, x):
    x = x % p or 1
    g = nt.primitive_root(p)
    e = nt.discrete_log(x, g, p)
    assert pow(g, e, p) == x
    assert e == sympy.discrete_log(p, x, g)


def test_discrete_log_outside_subgroup():
    # 3 is not a square mod 7, so it is outside <2> = {1, 2, 4}
    with pytest.raises(ValueError):
        nt.discrete_log(3, 2, 7)


@pytest.mark.parametrize("p,base", [(7, 2), (103, 5), (29, 12)])
def test_coset_labels_partition(p, base):
    labels = nt.mult_coset_labels(base, p)
    n = nt.multiplicative_order(base, p)
    assert len(labels) * n == p - 1
    seen = set()
    for k in labels:
        block = {k * int(x) % p for x in nt.subgroup_powers(base, p)}
        assert min(block) == k == nt.mult_coset_min(max(block), base, p)
        assert not seen & block
        seen |= block
    assert seen == set(range(1, p))


def test_mod_inverse():
    for x in range(1, 103):
        assert x * nt.mod_inverse(x, 103) % 103 == 1
