from __future__ import annotations

import json

import numpy as np
import pytest

from affinehsp.extension import (AbelianGroup, ExtensionGroup, TableGroup, abelian_hsp_solver,
                                 cyclic_times_qhedral, level_sets_match, make_abelian_solver,
                                 make_qhedral_solver, make_table_oracle, multiset_oracle,
                                 qhedral_extension, quaternion_central, quaternion_product,
                                 random_subgroup, solve_extension_hsp)
from affinehsp.groups import HiddenOracle, PromiseViolation, SubgroupDesc, all_subgroups, uncharged


def abelian_oracle(moduli, gens):
    group = AbelianGroup(moduli)
    span = {group.identity}
    frontier = [group.identity]
    while frontier:
        frontier = [group.mul(x, g) for x in frontier for g in gens if group.mul(x, g) not in span]
        span.update(frontier)
    sub = sorted(span)

    def fn(h):
        h = group.normalize(h)
        return min(group.mul(h, s) for s in sub)

    return HiddenOracle(fn, None, None), span


def span_of(moduli, gens):
    return abelian_oracle(moduli, gens)[1]


def test_abelian_trivial_z15():
    o, L = abelian_oracle((15,), [])
    gens, chars = abelian_hsp_solver(o, (15,), seed=1, detail=True)
    assert gens == []
    assert len(chars) >= 1


def test_abelian_simon():
    o, L = abelian_oracle((2, 2, 2), [(1, 0, 1)])
    gens = abelian_hsp_solver(o, (2, 2, 2), seed=4)
    assert span_of((2, 2, 2), gens) == L


def test_abelian_z12():
    o, L = abelian_oracle((12,), [(4,)])
    gens, chars = abelian_hsp_solver(o, (12,), seed=0, detail=True)
    assert {c[0] for c in chars} <= {0, 3, 6, 9}
    assert span_of((12,), gens) == L


@pytest.mark.parametrize("seed", range(10))
def test_abelian_random(seed):
    rng = np.random.default_rng(seed)
    moduli = (6, 10, 4)
    gens = [tuple(int(rng.integers(m)) for m in moduli) for _ in range(rng.integers(0, 3))]
    o, L = abelian_oracle(moduli, gens)
    assert span_of(moduli, abelian_hsp_solver(o, moduli, seed=seed)) == L


def test_q8_group_and_validation():
    ext = quaternion_product(15)
    assert ext.group.order == 120 and ext.k_order == 8
    with pytest.raises(ValueError):
        # a non-normal "kernel": a conjugate order-3 subgroup of Z_3 x| Z_7
        e, spec = qhedral_extension(7, 3)
        L = [e.group.index[f"({x},{y})"] for x, y in
             SubgroupDesc.conjugate(2, 1, spec).elements(spec)]
        ExtensionGroup(e.group, tuple(L), AbelianGroup((7,)), {(i,): i for i in range(7)})


def test_bad_table():
    with pytest.raises(ValueError):
        TableGroup(["e", "x"], np.array([[0, 1], [1, 1]]))


def test_hidden_kernel_gives_empty_t():
    ext = quaternion_product(15)
    o = make_table_oracle(ext, ext.kernel)
    tri = solve_extension_hsp(o, ext, make_abelian_solver(0))
    assert tri.T == []
    assert tri.generated(ext) == frozenset(ext.kernel)


def test_quaternion_example():
    ext = quaternion_product(15)
    L = ext.group.generated([ext.group.index["(i,5)"]])
    o = make_table_oracle(ext, L)
    tri = solve_extension_hsp(o, ext, make_abelian_solver(1))
    got = tri.generated(ext)
    assert got == L and level_sets_match(o, ext, got)
    assert o.queries <= ext.k_order * (1 + len(tri.T) + tri.queries["fprime_queries"])


def test_multiset_oracle_levels_and_cost():
    ext = quaternion_product(15)
    L = ext.group.generated([ext.group.index["(i,5)"]])
    o = make_table_oracle(ext, L)
    f2 = multiset_oracle(o, ext)
    f2((3,))
    assert o.queries == ext.k_order
    # level sets of f' are the cosets of L_H = <5>
    with uncharged():
        vals = {h: f2(h) for h in ext.quotient.elements()}
    for h, v in vals.items():
        for h2, v2 in vals.items():
            assert (v == v2) == ((h[0] - h2[0]) % 5 == 0)


def test_multiset_trivial_is_injective():
    ext = quaternion_product(15)
    f2 = multiset_oracle(make_table_oracle(ext, [ext.group.identity]), ext)
    with uncharged():
        vals = [f2(h) for h in ext.quotient.elements()]
    assert len(set(vals)) == 15


@pytest.mark.parametrize("seed", range(8))
def test_random_subgroups_q8xz15(seed):
    ext = quaternion_product(15)
    L = random_subgroup(ext, np.random.default_rng(seed))
    o = make_table_oracle(ext, L)
    tri = solve_extension_hsp(o, ext, make_abelian_solver(seed))
    assert tri.generated(ext) == L


def test_non_split_q8():
    ext = quaternion_central()
    for L in {ext.group.generated([x]) for x in range(8)}:
        o = make_table_oracle(ext, L)
        tri = solve_extension_hsp(o, ext, make_abelian_solver(0))
        assert tri.generated(ext) == L


def test_qhedral_as_extension_matches_reconstruction():
    from affinehsp.groups import make_subgroup_oracle
    from affinehsp.reconstruction import solve_hsp_qhedral

    ext, spec = qhedral_extension(7, 3)
    for h in all_subgroups(spec):
        L = frozenset(ext.group.index[f"({x},{y})"] for x, y in h.elements(spec))
        tri = solve_extension_hsp(make_table_oracle(ext, L), ext, make_abelian_solver(2))
        res = solve_hsp_qhedral(make_subgroup_oracle(h, spec), spec, seed=2)
        got = {tuple(int(v) for v in ext.group.labels[x].strip("()").split(","))
               for x in tri.generated(ext)}
        assert got == set(res.subgroup.elements(spec)) == set(h.elements(spec))


def test_qhedral_quotient_solver():
    ext, spec = cyclic_times_qhedral(2, 7, 3)
    L = ext.group.generated([ext.group.index["(1,2,3)"]])
    tri = solve_extension_hsp(make_table_oracle(ext, L), ext, make_qhedral_solver(0))
    assert tri.generated(ext) == L


def test_json_roundtrip_and_inferred_quotient():
    ext = quaternion_central()
    again = ExtensionGroup.from_json(ext.to_json())
    assert again.kernel == ext.kernel
    d = json.loads(ext.to_json())
    del d["quotient"]
    assert ExtensionGroup.from_dict(d).quotient.moduli == (2, 2)


def test_lift_missing_raises():
    # L = K projects to the trivial subgroup; a quotient solver claiming (1,) has no lift
    ext = quaternion_product(3)
    o = make_table_oracle(ext, ext.kernel)
    with pytest.raises(PromiseViolation):
        solve_extension_hsp(o, ext, lambda oracle, group: [(1,)])
