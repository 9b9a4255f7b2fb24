from __future__ import annotations

import json

import pytest

from affinehsp.groups import (GroupElement, GroupSpec, HiddenOracle, PromiseViolation, SubgroupDesc,
                              all_subgroups, make_subgroup_oracle)
from affinehsp.reconstruction import (determine_subgroup_order, extend_qhedral_oracle,
                                      info_reconstruct_subgroup, ml_reconstruct_conjugate,
                                      power_filter_oracle, reconstruct_normal_core,
                                      solve_hcp_affine, solve_hsp_qhedral, verify_subgroup)
from affinehsp.sampling import trial_rng


@pytest.mark.parametrize("b", [0, 1, 11, 12, 22])
def test_hcp_maximal_p23(b, a23):
    h = SubgroupDesc.conjugate(a23.gamma, b, a23)
    o = make_subgroup_oracle(h, a23)
    res = solve_hcp_affine(o, a23.gamma, a23, seed=b)
    assert res.verified and res.subgroup.same_as(h, a23)
    assert res.queries == o.queries > 0


def test_hcp_result_json(a23):
    h = SubgroupDesc.conjugate(a23.gamma, 5, a23)
    res = solve_hcp_affine(make_subgroup_oracle(h, a23), a23.gamma, a23, seed=1)
    d = json.loads(res.to_json(spec=a23))
    assert d["b"] == 5 and d["verified"]


def test_hcp_large_p():
    spec = GroupSpec.affine(1009)
    a = spec.element_of_order(504)
    h = SubgroupDesc.conjugate(a, 777, spec)
    res = solve_hcp_affine(make_subgroup_oracle(h, spec), a, spec, seed=4)
    assert res.verified and res.info["b"] == 777


def test_verify_rejects_wrong_candidates(a23):
    h = SubgroupDesc.conjugate(a23.element_of_order(11), 3, a23)
    o = make_subgroup_oracle(h, a23)
    rng = trial_rng(0, 1, 0)
    assert verify_subgroup(o, h, a23, rng)
    for wrong in (SubgroupDesc.conjugate(a23.element_of_order(11), 4, a23),
                  SubgroupDesc.trivial(), SubgroupDesc.normal(1),
                  SubgroupDesc.conjugate(a23.gamma, 3, a23)):
        assert not verify_subgroup(o, wrong, a23, rng)


def test_normal_core(a23):
    for h in all_subgroups(a23):
        core = reconstruct_normal_core(make_subgroup_oracle(h, a23), a23, seed=2)
        want = h.canonical(a23) if h.contains_translations() else SubgroupDesc.trivial()
        assert core.same_as(want, a23), h


@pytest.mark.parametrize("p,q", [(7, 3), (23, 11), (29, 7)])
def test_qhedral_lift_hides_same_subgroup(p, q):
    from affinehsp.groups import hidden_subgroup_by_enumeration
    spec = GroupSpec.qhedral(p, q)
    for h in all_subgroups(spec):
        lifted = extend_qhedral_oracle(HiddenOracle(make_subgroup_oracle(h, spec), spec), spec)
        got = hidden_subgroup_by_enumeration(lifted, spec.ambient())
        assert set(got.elements(spec.ambient())) == set(h.elements(spec))


@pytest.mark.parametrize("p,q", [(7, 3), (13, 4), (13, 6), (23, 11), (29, 14)])
def test_solve_hsp_every_subgroup(p, q):
    spec = GroupSpec.qhedral(p, q)
    for i, h in enumerate(all_subgroups(spec)):
        res = solve_hsp_qhedral(make_subgroup_oracle(h, spec), spec, seed=100 + i)
        assert res.verified and res.subgroup.same_as(h, spec), h


def test_solve_hsp_affine_group(a7):
    for i, h in enumerate(all_subgroups(a7)):
        res = solve_hsp_qhedral(make_subgroup_oracle(h, a7), a7, seed=i)
        assert res.verified and res.subgroup.same_as(h, a7)


def test_power_filter(a23):
    h = SubgroupDesc.conjugate(a23.gamma, 6, a23)
    f = power_filter_oracle(make_subgroup_oracle(h, a23), 11, a23)
    assert f.truth.size(a23) == 11


@pytest.mark.parametrize("b", [0, 3, 14])
def test_ml_reconstruction(b):
    spec = GroupSpec.affine(29)
    a = spec.element_of_order(7)
    h = SubgroupDesc.conjugate(a, b, spec)
    res = ml_reconstruct_conjugate(make_subgroup_oracle(h, spec), a, spec, 60, seed=b)
    assert res.verified and res.info["b"] == b
    # the law is even in b, so -b is a co-maximiser that verification discards
    if b:
        assert {b, (-b) % 29} <= set(res.info["argmax"])


@pytest.mark.parametrize("n", [1, 2, 4, 7, 14, 28])
def test_order_finding_p29(n):
    spec = GroupSpec.affine(29)
    h = SubgroupDesc.trivial() if n == 1 else SubgroupDesc.conjugate(spec.element_of_order(n), 9, spec)
    assert determine_subgroup_order(make_subgroup_oracle(h, spec), spec, seed=n) == n
    res = info_reconstruct_subgroup(make_subgroup_oracle(h, spec), spec, seed=n)
    assert res.verified and res.subgroup.same_as(h, spec)


def test_info_reconstruct_qhedral():
    spec = GroupSpec.qhedral(31, 10)
    for h in (SubgroupDesc.conjugate(spec.element_of_order(5), 8, spec), SubgroupDesc.normal(2)):
        res = info_reconstruct_subgroup(make_subgroup_oracle(h, spec), spec, seed=3)
        assert res.verified and res.subgroup.same_as(h, spec)


def test_sampler_rejects_non_subgroup_oracle(a7):
    o = HiddenOracle(lambda g: g[1] == 0, a7)
    with pytest.raises(PromiseViolation):
        solve_hcp_affine(o, 3, a7, seed=0)
