from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from affinehsp.groups import GroupElement, SubgroupDesc, hidden_subgroup_by_enumeration
from affinehsp.hidden_shift import (collision_probability, collision_table, draw_sample_set,
                                    isotropy_subgroup, level_sets_match_cosets,
                                    make_coset_function, make_shift_instance,
                                    sampled_symmetry_oracle, shift_spec, solve_hidden_shift,
                                    symmetry_table)


def test_coset_function_levels():
    f = make_coset_function(13, 3, seed=1)
    members = f.members()
    assert len(members) == 4
    assert len({f(x) for x in members}) == 1
    assert f(0) == 3
    assert len({f(x) for x in range(1, 13)}) == 3


def test_isotropy_is_h_a():
    f = make_coset_function(103, 6, seed=2)
    iso = set(isotropy_subgroup(f))
    spec = shift_spec(f)
    assert iso == set(SubgroupDesc.conjugate(f.stabiliser_generator, 0, spec).elements(spec))
    assert len(iso) == 17


def test_collision_depends_on_quotient():
    f = make_coset_function(29, 4, seed=0)
    rng = np.random.default_rng(0)
    elems, counts = collision_table(f)
    lookup = {tuple(e): c for e, c in zip(elems.tolist(), counts.tolist())}
    for _ in range(50):
        a = GroupElement(int(rng.integers(1, 29)), int(rng.integers(29)))
        b = GroupElement(int(rng.integers(1, 29)), int(rng.integers(29)))
        ai = pow(a[0], -1, 29)
        g = (ai * b[0] % 29, ai * (b[1] - a[1]) % 29)
        assert collision_probability(a, b, f) == Fraction(lookup[g], 29)


def test_collision_bound_exhaustive_p103():
    f = make_coset_function(103, 6, seed=1)
    elems, counts = collision_table(f)
    iso = {tuple(g) for g in isotropy_subgroup(f)}
    for e, c in zip(elems.tolist(), counts.tolist()):
        if tuple(e) in iso:
            assert c == 103
        else:
            assert Fraction(c, 103) <= Fraction(1, 2)


def test_sampled_oracle_hides_conjugate():
    inst = make_shift_instance(103, 6, 40, seed=3)
    R = draw_sample_set(103, seed=3)
    F = sampled_symmetry_oracle(inst, R)
    spec = shift_spec(inst.f)
    assert level_sets_match_cosets(inst, R)
    h = hidden_subgroup_by_enumeration(F, spec)
    assert h.same_as(SubgroupDesc.conjugate(inst.f.stabiliser_generator, 40, spec), spec)


def test_symmetry_table_matches_oracle():
    inst = make_shift_instance(29, 4, 5, seed=0)
    R = draw_sample_set(29, seed=1)
    F = sampled_symmetry_oracle(inst, R)
    alphas = np.array([[3, 4], [1, 0], [28, 17]])
    tab = symmetry_table(inst, R, alphas)
    for row, g in zip(tab, alphas):
        assert tuple(int(v) for v in row) == F(tuple(int(v) for v in g))


def test_tiny_sample_set_is_detected():
    inst = make_shift_instance(103, 6, 1, seed=0)
    R = draw_sample_set(103, seed=0, m=1)
    assert not level_sets_match_cosets(inst, R)


@pytest.mark.parametrize("p,r,s", [(103, 6, 0), (103, 6, 51), (103, 2, 52), (1009, 4, 500)])
def test_solve_hidden_shift(p, r, s):
    inst = make_shift_instance(p, r, s, seed=s)
    fs = inst.oracle()
    res = solve_hidden_shift(inst, None, seed=7, fs_oracle=fs)
    assert res.verified and res.info["s"] == s
    assert res.queries == fs.queries


def test_cost_accounting():
    inst = make_shift_instance(29, 2, 3, seed=0)
    fs = inst.oracle()
    R = draw_sample_set(29, seed=0)
    F = sampled_symmetry_oracle(inst, R, fs)
    F((2, 3))
    F.charge(2)
    assert fs.queries == 3 * R.m
