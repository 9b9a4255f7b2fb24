from __future__ import annotations

import math

import numpy as np
import pytest

from affinehsp import numtheory as nt
from affinehsp.groups import GroupSpec, SubgroupDesc, all_subgroups, make_subgroup_oracle
from affinehsp.reps import Irrep, observe_rep_distribution
from affinehsp.sampling import (AbelianSubgroup, CosetState, FourierSampler, MeasurementBasis,
                                abelian_sample_distribution, best_frequency, candidate_shifts,
                                coset_averaged_distribution, coset_interval_fraction,
                                general_closed_form, guess_shift, haar_unitary,
                                hcp_trial_success_probability, info_measurement_distribution,
                                maximal_closed_form, min_interval_fraction, povm_kraus,
                                random_basis_distribution, row_fourier_distribution,
                                row_fourier_pipeline, strong_sample_distribution, trial_rng)


def test_haar_unitary_is_unitary():
    u = haar_unitary(30, np.random.default_rng(0))
    np.testing.assert_allclose(u @ u.conj().T, np.eye(30), atol=1e-12)


def test_random_basis_is_seeded(a7):
    rho = Irrep("rho", 0, a7)
    u1 = MeasurementBasis.random(5).unitary(rho)
    u2 = MeasurementBasis.random(5).unitary(rho)
    u3 = MeasurementBasis.random(6).unitary(rho)
    assert np.array_equal(u1, u2) and not np.allclose(u1, u3)


def test_coset_state_fourier_matches_transform(a7):
    h = SubgroupDesc.conjugate(2, 3, a7)
    c = (3, 5)
    st = CosetState(a7, h, c)
    assert np.linalg.norm(st.vector()) == pytest.approx(1.0)
    d = strong_sample_distribution(h, c, MeasurementBasis.adapted(), a7)
    assert d.marginal(["irrep"]).prob(("rho",)) == pytest.approx(6 / 7)


@pytest.mark.parametrize("basis", [MeasurementBasis.adapted(), MeasurementBasis.random(3)],
                         ids=["adapted", "random"])
def test_strong_marginal_is_weak(a7, basis):
    for h in all_subgroups(a7):
        d = coset_averaged_distribution(h, basis, a7).marginal(["irrep"])
        w = observe_rep_distribution(h, a7)
        assert d.total_variation(w) < 1e-12


@pytest.mark.parametrize("p", [7, 23])
def test_row_fourier_closed_form_vs_pipeline(p):
    spec = GroupSpec.affine(p)
    for n in nt.divisors(p - 1):
        if n == 1:
            continue
        a = spec.element_of_order(n)
        for b in range(p):
            h = SubgroupDesc.conjugate(a, b, spec)
            ref = row_fourier_pipeline(h, spec)
            assert row_fourier_distribution(h, spec).max_abs_diff(ref) < 1e-12
            np.testing.assert_allclose(general_closed_form(b, a, p), ref.probs, atol=1e-12)
            joint = row_fourier_distribution(h, spec, joint=True)
            assert joint.max_abs_diff(row_fourier_pipeline(h, spec, joint=True)) < 1e-12
            if n == p - 1:
                np.testing.assert_allclose(maximal_closed_form(b, p), ref.probs, atol=1e-12)


def test_tie_frequency_has_two_shifts():
    p = 23
    l = (p - 1) // 2
    assert candidate_shifts(l, p) == [(p - 1) // 2, (p + 1) // 2]
    assert guess_shift(l, p) == (p - 1) // 2
    # every b is reachable by some frequency
    reach = set()
    for l in range(p - 1):
        reach.update(candidate_shifts(l, p))
    assert reach == set(range(p))


def test_best_frequency_maximises():
    p = 103
    for b in range(p):
        probs = maximal_closed_form(b, p)
        assert probs[best_frequency(b, p)] == pytest.approx(probs.max())


def test_trial_success_for_every_shift():
    spec = GroupSpec.affine(23)
    for b in range(23):
        h = SubgroupDesc.conjugate(spec.gamma, b, spec)
        assert hcp_trial_success_probability(h, spec) > 0.3


def test_interval_fraction():
    p = 103
    a = GroupSpec.affine(p).element_of_order(17)
    f = min_interval_fraction(a, p)
    assert 0 < f <= 1
    assert coset_interval_fraction(a, 1, p) >= f


def test_kraus_completeness():
    for q in (2, 3, 6):
        ops = povm_kraus(q)
        total = sum(k.conj().T @ k for k in ops)
        np.testing.assert_allclose(total, np.eye(q), atol=1e-12)


@pytest.mark.parametrize("p,q", [(7, 2), (7, 3), (7, 6), (13, 4), (13, 12), (23, 11)])
def test_info_three_ways(p, q):
    spec = GroupSpec.affine(p)
    a = spec.element_of_order(q)
    for b in range(p):
        h = SubgroupDesc.conjugate(a, b, spec)
        f = info_measurement_distribution(h, spec, a)
        r = info_measurement_distribution(h, spec, a, method="rows")
        s = info_measurement_distribution(h, spec, a, method="statevector")
        assert f.max_abs_diff(r) < 1e-12
        assert f.max_abs_diff(s) < 1e-12


def test_info_even_in_b():
    spec = GroupSpec.affine(23)
    a = spec.element_of_order(11)
    d1 = info_measurement_distribution(SubgroupDesc.conjugate(a, 4, spec), spec, a)
    d2 = info_measurement_distribution(SubgroupDesc.conjugate(a, 19, spec), spec, a)
    assert d1.total_variation(d2) < 1e-12


def test_random_basis_distribution_sums_to_one():
    spec = GroupSpec.affine(23)
    d = random_basis_distribution(SubgroupDesc.conjugate(spec.element_of_order(11), 3, spec), 1, spec)
    assert float(np.sum(d.probs)) == pytest.approx(1.0)


def test_abelian_simon_and_cyclic():
    # Z_2^3 hiding {0, y}: characters orthogonal to y
    y = (1, 0, 1)
    d = abelian_sample_distribution(AbelianSubgroup((2, 2, 2), ((0, 0, 0), y)))
    for chi in d.support():
        assert sum(c * v for c, v in zip(chi, y)) % 2 == 0
    assert len(d.support()) == 4
    d12 = abelian_sample_distribution(AbelianSubgroup((12,), ((0,), (4,), (8,))))
    assert {c for (c,) in d12.support()} == {0, 3, 6, 9}


def test_forgetful_values():
    p = 23
    spec = GroupSpec.affine(p)
    n = p - 1
    d = abelian_sample_distribution(SubgroupDesc.conjugate(spec.gamma, 5, spec), spec)
    assert d.prob((0, 0)) == pytest.approx(1 / p)
    assert d.prob((0, 3)) == pytest.approx(1 / (p * n * n))
    assert d.prob((4, 0)) == pytest.approx(0.0, abs=1e-15)
    assert d.prob((4, 3)) == pytest.approx(1 / (n * n))


def test_sampler_charges_and_matches_law():
    spec = GroupSpec.affine(23)
    h = SubgroupDesc.conjugate(spec.gamma, 7, spec)
    o = make_subgroup_oracle(h, spec)
    s = FourierSampler(o, spec)
    counts = {}
    N = 4000
    for i in range(N):
        name, k, l = s.row_fourier(trial_rng(1, 0, i))
        if name == "rho":
            counts[l] = counts.get(l, 0) + 1
    assert o.quantum_queries == N
    law = row_fourier_distribution(h, spec)
    tot = sum(counts.values())
    assert tot / N == pytest.approx(22 / 23, abs=0.02)
    emp = np.array([counts.get(l, 0) / tot for l in range(22)])
    assert 0.5 * np.abs(emp - law.probs).sum() < 0.06


def test_sampler_enumerates_without_truth():
    from affinehsp.groups import HiddenOracle

    spec = GroupSpec.affine(7)
    h = SubgroupDesc.conjugate(2, 3, spec)
    inner = make_subgroup_oracle(h, spec)
    o = HiddenOracle(inner, spec)  # no truth attached
    s = FourierSampler(o, spec)
    assert s.hidden().same_as(h, spec)
    assert o.classical_queries == 0
