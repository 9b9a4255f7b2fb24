from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinehsp.groups import (IDENTITY, GroupElement, GroupSpec, HiddenOracle, PromiseViolation,
                              SubgroupDesc, all_subgroups, element_order, group_json,
                              hidden_subgroup_by_enumeration, inverse, left_cosets, level_sets,
                              make_subgroup_oracle, multiply, parse_group_json, power,
                              subgroup_from_elements, uncharged)

SPECS = [GroupSpec.affine(7), GroupSpec.qhedral(7, 3), GroupSpec.qhedral(13, 4),
         GroupSpec.affine(11), GroupSpec.qhedral(23, 11)]


def closure(gens, spec):
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = multiply(x, g, spec)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def test_group_axioms_a7(a7):
    elems = list(a7.elements())
    assert len(elems) == a7.order == 42
    for x, y, z in itertools.product(elems[::5], repeat=3):
        assert multiply(multiply(x, y, a7), z, a7) == multiply(x, multiply(y, z, a7), a7)
    for x in elems:
        assert multiply(x, inverse(x, a7), a7) == IDENTITY


def test_qhedral_is_closed(q3_7):
    elems = set(q3_7.elements())
    assert len(elems) == 21
    for x, y in itertools.product(elems, repeat=2):
        assert multiply(x, y, q3_7) in elems


def test_element_order_and_power(a7):
    g = GroupElement(3, 2)
    n = element_order(g, a7)
    assert power(g, n, a7) == IDENTITY
    assert all(power(g, k, a7) != IDENTITY for k in range(1, n))
    # translations have order p
    assert element_order(GroupElement(1, 4), a7) == 7


def test_bad_specs():
    with pytest.raises(ValueError):
        GroupSpec.affine(9)
    with pytest.raises(ValueError):
        GroupSpec.qhedral(7, 4)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_all_subgroups_match_closure(spec):
    subs = all_subgroups(spec)
    seen = set()
    for h in subs:
        elems = set(h.elements(spec))
        assert len(elems) == h.size(spec)
        assert closure(h.generators(spec), spec) == elems
        assert all(h.contains(g, spec) for g in elems)
        key = frozenset(elems)
        assert key not in seen
        seen.add(key)
        assert subgroup_from_elements(elems, spec).same_as(h, spec)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_level_sets_are_left_cosets(spec):
    for h in all_subgroups(spec):
        o = make_subgroup_oracle(h, spec)
        assert level_sets(o, spec.elements()) == left_cosets(h, spec)
        assert o.queries == 0


def test_conjugate_is_conjugation(a7):
    a, b = 2, 3
    h = SubgroupDesc.conjugate(a, b, a7)
    t = GroupElement(1, b)
    base = SubgroupDesc.conjugate(a, 0, a7).elements(a7)
    conj = {multiply(multiply(t, x, a7), inverse(t, a7), a7) for x in base}
    assert conj == set(h.elements(a7))


def test_normal_one_is_translations(a7):
    h = SubgroupDesc.normal(1)
    assert set(h.elements(a7)) == {GroupElement(1, y) for y in range(7)}
    assert h.contains_translations()


def test_intersect_normal(a23):
    h = SubgroupDesc.conjugate(a23.element_of_order(22), 5, a23)
    for m in (1, 2, 11, 22):
        got = set(h.intersect_normal(m, a23).elements(a23))
        want = {g for g in h.elements(a23) if pow(g[0], m, 23) == 1}
        assert got == want


def test_json_roundtrip(a23):
    h = SubgroupDesc.conjugate(a23.element_of_order(11), 4, a23)
    spec, h2 = parse_group_json(group_json(a23, h))
    assert spec == a23 and h2 == h
    assert SubgroupDesc.from_dict(SubgroupDesc.normal(2).to_dict(), a23) == SubgroupDesc.normal(2)


def test_oracle_counting_and_uncharged(a7):
    o = make_subgroup_oracle(SubgroupDesc.conjugate(2, 1, a7), a7)
    o((3, 4))
    o((3, 4))
    with uncharged():
        o((1, 1))
    o.peek((5, 5))
    assert o.classical_queries == 2
    o.charge(3)
    assert o.quantum_queries == 3 and o.queries == 5


def test_child_oracle_propagates_cost(a7):
    parent = make_subgroup_oracle(SubgroupDesc.trivial(), a7)
    child = HiddenOracle(lambda g: parent(g), a7, parent=parent, cost=4)
    child.charge(2)
    assert parent.quantum_queries == 8


def test_enumeration_rejects_non_subgroup(a7):
    o = HiddenOracle(lambda g: g[0] == 3, a7)
    with pytest.raises(ValueError):
        hidden_subgroup_by_enumeration(o, a7)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_coset_label_constant_on_coset(x, y):
    spec = GroupSpec.affine(23)
    g = GroupElement(x % 22 + 1, y % 23)
    for h in (SubgroupDesc.conjugate(spec.element_of_order(11), y % 23, spec), SubgroupDesc.normal(2)):
        lab = h.coset_label(g, spec)
        for z in h.elements(spec):
            assert h.coset_label(multiply(g, z, spec), spec) == lab
