from __future__ import annotations

import itertools

import numpy as np
import pytest

from affinehsp.groups import GroupElement, GroupSpec, SubgroupDesc, all_subgroups, multiply
from affinehsp.reps import (Irrep, block_permutation, coset_transform, irrep_by_name, irreps,
                            is_unitary, observe_rep_distribution, plancherel_total, projector,
                            projector_rank)

SPECS = [GroupSpec.affine(7), GroupSpec.qhedral(7, 3), GroupSpec.qhedral(13, 4), GroupSpec.affine(11)]


def character(rep, spec):
    return np.array([np.trace(rep.matrix(g)) for g in spec.elements()])


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_homomorphism_and_unitarity(spec):
    elems = list(spec.elements())
    rng = np.random.default_rng(1)
    for rep in irreps(spec):
        for _ in range(20):
            x = elems[rng.integers(len(elems))]
            y = elems[rng.integers(len(elems))]
            np.testing.assert_allclose(rep.matrix(multiply(x, y, spec)),
                                       rep.matrix(x) @ rep.matrix(y), atol=1e-12)
            assert is_unitary(rep.matrix(x))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_character_orthogonality(spec):
    reps = irreps(spec)
    chars = [character(r, spec) for r in reps]
    gram = np.array([[np.vdot(a, b) for b in chars] for a in chars]) / spec.order
    np.testing.assert_allclose(gram, np.eye(len(reps)), atol=1e-9)
    assert plancherel_total(reps) == spec.order


def test_irrep_names_roundtrip(q3_7):
    for rep in irreps(q3_7):
        assert irrep_by_name(rep.name, q3_7) == rep


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_projector_closed_equals_sum(spec):
    for h in all_subgroups(spec):
        for rep in irreps(spec):
            a = projector(h, rep, spec, method="closed")
            b = projector(h, rep, spec, method="sum")
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-12)
            m = b.matrix
            np.testing.assert_allclose(m @ m, m, atol=1e-10)
            np.testing.assert_allclose(m, m.conj().T, atol=1e-12)
            assert round(b.trace()) == a.rank == projector_rank(h, rep, spec)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_weak_probabilities_match_transform_norms(spec):
    for h in all_subgroups(spec):
        dist = observe_rep_distribution(h, spec)
        c = h.coset_representatives(spec)[-1]
        for rep in irreps(spec):
            f = coset_transform(h, c, rep, spec)
            g = coset_transform(h, c, rep, spec, method="direct")
            np.testing.assert_allclose(f, g, atol=1e-12)
            assert dist.prob((rep.name,)) == pytest.approx(float(np.sum(np.abs(f) ** 2)), abs=1e-12)


def test_sigma_kernel(a7):
    for t in range(6):
        rep = Irrep("sigma", t, a7)
        ker = rep.kernel()
        for g in ker.elements(a7):
            assert rep.matrix(g)[0, 0] == pytest.approx(1)


def test_rho_restricts_to_rho_k_blocks():
    p, q = 13, 4
    amb = GroupSpec.affine(p)
    sub = GroupSpec.qhedral(p, q)
    perm = block_permutation(amb, q)
    rho = Irrep("rho", 0, amb)
    blocks = [Irrep("rho_k", k, sub) for k in sorted({rep.index for rep in irreps(sub) if rep.kind == "rho_k"})]
    for g in sub.elements():
        m = rho.matrix(g)[np.ix_(perm, perm)]
        for i, rep in enumerate(blocks):
            sl = slice(i * q, (i + 1) * q)
            np.testing.assert_allclose(m[sl, sl], rep.matrix(g), atol=1e-12)
        off = m.copy()
        for i in range(len(blocks)):
            off[i * q:(i + 1) * q, i * q:(i + 1) * q] = 0
        assert np.abs(off).max() < 1e-12


def test_projector_rank_rules(a23):
    for h in all_subgroups(a23):
        n = h.mult_order(a23)
        rho = Irrep("rho", 0, a23)
        want = 0 if h.contains_translations() else 22 // n
        assert projector_rank(h, rho, a23) == want
        for t in range(22):
            assert projector_rank(h, Irrep("sigma", t, a23), a23) == (1 if t % n == 0 else 0)
