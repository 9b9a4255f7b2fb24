"""Subgroup reconstruction from simulated Fourier samples.

All solvers talk to a :class:`~affinehsp.groups.HiddenOracle` and a
:class:`~affinehsp.sampling.FourierSampler` attached to it; none of them
reads the oracle's ground truth.
"""

from __future__ import annotations

import json
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import kernels
from . import numtheory as nt
from .groups import (IDENTITY, GroupElement, GroupSpec, HiddenOracle, PromiseViolation,
                     SubgroupDesc)
from .sampling import FourierSampler, candidate_shifts, info_coefficient, trial_rng

# PRNG stream ids, so independent uses of one seed never share draws
STREAM_HCP, STREAM_VERIFY, STREAM_INFO, STREAM_WEAK, STREAM_ORDER = range(5)


@dataclass
class ReconstructionResult:
    subgroup: SubgroupDesc | None
    verified: bool
    trials: int
    queries: int
    transcript: list = field(default_factory=list)
    scores: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def to_dict(self, spec: GroupSpec | None = None) -> dict[str, Any]:
        d = {
            "result": None if self.subgroup is None else self.subgroup.to_dict(),
            "verified": self.verified,
            "trials": self.trials,
            "queries": self.queries,
            "transcript": self.transcript,
            "scores": {str(k): v for k, v in self.scores.items()},
        }
        d.update(self.info)
        if spec is not None and self.subgroup is not None:
            d["description"] = self.subgroup.describe(spec)
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True, default=_jsonable)


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, SubgroupDesc):
        return v.to_dict()
    raise TypeError(type(v))


# -- verification -------------------------------------------------------------------

def verify_subgroup(oracle: HiddenOracle, h: SubgroupDesc, spec: GroupSpec,
                    rng: np.random.Generator, cosets: int = 32, pairs: int = 32) -> bool:
    """Check a candidate hidden subgroup against the oracle.

    Three tests, all must pass:

    * every generator of the candidate maps to f(identity) (so candidate <= H);
    * f is constant on 2*log2(p) random pairs inside each of
      min(|G|/|H|, ``cosets``) random candidate cosets;
    * f differs on ``pairs`` random pairs from distinct candidate cosets.
    """
    p = spec.p
    f1 = oracle(IDENTITY)
    for g in h.generators(spec):
        if oracle(g) != f1:
            return False
    per_coset = 2 * math.ceil(math.log2(p))
    ncos = min(spec.order // h.size(spec), cosets)
    for _ in range(ncos):
        c = spec.random_element(rng)
        for _ in range(per_coset):
            x = _mul_spec(c, h.random_element(spec, rng), spec)
            y = _mul_spec(c, h.random_element(spec, rng), spec)
            if oracle(x) != oracle(y):
                return False
    if spec.order // h.size(spec) > 1:
        for _ in range(pairs):
            while True:
                x, y = spec.random_element(rng), spec.random_element(rng)
                if h.coset_label(x, spec) != h.coset_label(y, spec):
                    break
            if oracle(x) == oracle(y):
                return False
    return True


def _mul_spec(x, y, spec):
    return GroupElement(x[0] * y[0] % spec.p, (x[1] + x[0] * y[1]) % spec.p)


def _in_hidden(oracle: HiddenOracle, g) -> bool:
    return oracle(g) == oracle(IDENTITY)


# -- hidden conjugates in A_p --------- by row Fourier sampling ----------------------

def solve_hcp_affine(oracle: HiddenOracle, a: int, spec: GroupSpec, seed: int,
                     max_trials: int = 200, min_votes: int = 2,
                     sampler: FourierSampler | None = None) -> ReconstructionResult:
    """Find b with H = H_a^b.

    Each trial samples the row-Fourier measurement and votes for the shift(s)
    b nearest to the observed frequency l. Once the leading candidate has
    ``min_votes`` votes it is verified against the oracle; rejected
    candidates are excluded from further leadership.
    """
    if spec.kind != "affine":
        raise ValueError("solve_hcp_affine works in A_p")
    sampler = sampler or FourierSampler(oracle, spec)
    q0 = oracle.queries
    votes: Counter = Counter()
    rejected: set[int] = set()
    transcript = []
    for i in range(max_trials):
        rng = trial_rng(seed, STREAM_HCP, i)
        name, k, l = sampler.row_fourier(rng)
        if name == "sigma":
            transcript.append({"irrep": "sigma"})
            continue
        guesses = candidate_shifts(l, spec.p)
        for b in guesses:
            votes[b] += 1
        transcript.append({"irrep": name, "k": k, "ell": l, "guess": guesses})
        live = [(v, -c) for c, v in votes.items() if c not in rejected]
        if not live:
            continue
        v, neg = max(live)
        leader = -neg
        if v >= min_votes:
            cand = SubgroupDesc.conjugate(a, leader, spec)
            if verify_subgroup(oracle, cand, spec, trial_rng(seed, STREAM_VERIFY, i)):
                return ReconstructionResult(cand, True, i + 1, oracle.queries - q0,
                                            transcript, dict(votes), {"b": leader})
            rejected.add(leader)
    best = None
    if votes:
        best = min(votes, key=lambda c: (-votes[c], c))
    return ReconstructionResult(
        None if best is None else SubgroupDesc.conjugate(a, best, spec), False, max_trials,
        oracle.queries - q0, transcript, dict(votes), {"b": best})


# -- normal core by weak sampling ------------------------------------------------------

def _weak_core(oracle: HiddenOracle, spec: GroupSpec, seed: int, samples: int | None = None,
               sampler: FourierSampler | None = None) -> tuple[SubgroupDesc, list]:
    sampler = sampler or FourierSampler(oracle, spec)
    if samples is None:
        samples = 2 * math.ceil(math.log2(spec.order)) + 8
    g = 0
    observed = []
    for i in range(samples):
        name = sampler.weak(trial_rng(seed, STREAM_WEAK, i))
        observed.append(name)
        if not name.startswith("sigma_"):
            return SubgroupDesc.trivial(), observed
        g = math.gcd(g, int(name.split("_")[1]))
    # only one-dimensional irreps seen: H contains the translations
    return SubgroupDesc.normal(math.gcd(g, spec.q)).canonical(spec), observed


def reconstruct_normal_core(oracle: HiddenOracle, spec: GroupSpec, seed: int = 0,
                            samples: int | None = None) -> SubgroupDesc:
    """Intersection of the kernels of every irrep seen under weak sampling.

    ker sigma_t = N_gcd(t, q) and the high-dimensional irreps are faithful, so
    the intersection is N_g with g = gcd(q, observed t), or trivial as soon
    as a high-dimensional irrep shows up.
    """
    return _weak_core(oracle, spec, seed, samples)[0]


# -- q-hedral groups via A_p ------------------------------------------------------------

def extend_qhedral_oracle(f: HiddenOracle, spec: GroupSpec) -> HiddenOracle:
    """Lift an oracle on Z_q x| Z_p to A_p, hiding the same subgroup.

    Every (x, y) in A_p factors uniquely as (tau, 0)(x/tau, y/tau) with
    tau = gamma**(log x mod r), r = (p-1)/q, and (x/tau, y/tau) in N_q.
    f'(x, y) = (f(x/tau, y/tau), x**q): the first part identifies the coset
    inside N_q, the second the coset of N_q.
    """
    if spec.kind == "affine":
        raise ValueError("the oracle already lives on A_p")
    p, q, r = spec.p, spec.q, spec.index
    amb = spec.ambient()

    def fn(g):
        x, y = amb.check(g)
        tau = pow(spec.gamma, spec.log(x) % r, p)
        ti = pow(tau, -1, p)
        return (f(GroupElement(x * ti % p, y * ti % p)), pow(x, q, p))

    truth = None
    if f.truth is not None:
        truth = f.truth.canonical(spec)
    return HiddenOracle(fn, amb, truth, parent=f, cost=1, name=f"lift[{f.name}]")


def solve_hsp_qhedral(oracle: HiddenOracle, spec: GroupSpec, seed: int,
                      max_trials: int = 200) -> ReconstructionResult:
    """Any hidden subgroup of Z_q x| Z_p.

    Weak sampling gives the normal core. A nontrivial core is the answer
    (every subgroup containing a translation is normal). Otherwise the
    oracle is lifted to A_p and the hidden-conjugate solver runs for each
    divisor n > 1 of q, largest first; when none verifies, the trivial
    subgroup is verified and returned.
    """
    q0 = oracle.queries
    core, observed = _weak_core(oracle, spec, seed)
    info: dict = {"weak_samples": observed}
    if core.kind != "trivial":
        ok = verify_subgroup(oracle, core, spec, trial_rng(seed, STREAM_VERIFY, 10**6))
        if ok:
            return ReconstructionResult(core, True, len(observed), oracle.queries - q0,
                                        [], {}, info)
    if spec.kind == "affine":
        lifted, amb = oracle, spec
    else:
        lifted, amb = extend_qhedral_oracle(oracle, spec), spec.ambient()
    trials = len(observed)
    transcript = []
    for n in sorted(nt.divisors(spec.q), reverse=True):
        if n == 1:
            continue
        a = amb.element_of_order(n)
        res = solve_hcp_affine(lifted, a, amb, seed=seed * 1009 + n, max_trials=max_trials)
        trials += res.trials
        transcript.append({"order": n, "trials": res.trials, "verified": res.verified,
                           "b": res.info.get("b")})
        if res.verified:
            h = SubgroupDesc.conjugate(a, res.subgroup.b, spec)
            return ReconstructionResult(h, True, trials, oracle.queries - q0, transcript,
                                        res.scores, info)
    triv = SubgroupDesc.trivial()
    ok = verify_subgroup(oracle, triv, spec, trial_rng(seed, STREAM_VERIFY, 10**6 + 1))
    return ReconstructionResult(triv, ok, trials, oracle.queries - q0, transcript, {}, info)


# -- maximum likelihood reconstruction -------------------------------------------------

def ml_reconstruct_conjugate(oracle: HiddenOracle, a: int, spec: GroupSpec, num_samples: int,
                             seed: int, verify: str = "full",
                             stream: int = STREAM_INFO) -> ReconstructionResult:
    """Maximum-likelihood b for H = H_a^b from the (k, u, bit) measurement.

    Sample i contributes log cos^2(pi m_i b / p) or log sin^2(...), with
    m_i = k a^u (a-1). The scan covers all p candidates. The maximisers are
    checked against the oracle in increasing order; the first that passes
    is returned. ``verify="generator"`` only tests that the candidate's
    generator lies in the hidden subgroup.
    """
    if spec.kind != "affine":
        raise ValueError("ml_reconstruct_conjugate works in A_p")
    p = spec.p
    sampler = FourierSampler(oracle, spec)
    q0 = oracle.queries
    ms, bits, transcript = [], [], []
    for i in range(num_samples):
        out = sampler.info(a, trial_rng(seed, stream, i))
        if out[0] == "sigma":
            transcript.append({"irrep": "sigma"})
            continue
        _, k, u, bit = out
        ms.append(info_coefficient(k, u, a, p))
        bits.append(bit)
        transcript.append({"irrep": "rho", "k": k, "u": u, "bit": bit})
    ll = kernels.loglik_scan(np.asarray(ms, dtype=np.int64), np.asarray(bits, dtype=np.int64), p)
    best = ll.max()
    tol = 1e-9 * max(1.0, abs(best)) if np.isfinite(best) else 0.0
    argmax = [int(b) for b in np.flatnonzero(ll >= best - tol)] if np.isfinite(best) else []
    order = np.argsort(-ll, kind="stable")[:5]
    scores = {int(b): float(ll[b]) for b in order}
    for b in argmax:
        cand = SubgroupDesc.conjugate(a, b, spec)
        if verify == "generator":
            ok = all(_in_hidden(oracle, g) for g in cand.generators(spec))
        else:
            ok = verify_subgroup(oracle, cand, spec, trial_rng(seed, STREAM_VERIFY, b))
        if ok:
            return ReconstructionResult(cand, True, num_samples, oracle.queries - q0, transcript,
                                        scores, {"b": b, "argmax": argmax})
    b0 = argmax[0] if argmax else None
    return ReconstructionResult(None if b0 is None else SubgroupDesc.conjugate(a, b0, spec),
                                False, num_samples, oracle.queries - q0, transcript, scores,
                                {"b": b0, "argmax": argmax})


def default_info_samples(p: int) -> int:
    return 12 * math.ceil(math.log2(p))


def power_filter_oracle(f: HiddenOracle, m: int, spec: GroupSpec) -> HiddenOracle:
    """g -> (f(g), x**m): hides H intersected with N_m = {(x, y): x**m = 1}."""
    p = spec.p

    def fn(g):
        return (f(g), pow(g[0], m, p))

    truth = f.truth.intersect_normal(m, spec) if f.truth is not None else None
    return HiddenOracle(fn, spec, truth, parent=f, cost=1, name=f"{f.name}|x^{m}")


def determine_subgroup_order(oracle: HiddenOracle, spec: GroupSpec, seed: int,
                             num_samples: int | None = None, detail: bool = False):
    """Order of a hidden non-normal (cyclic) subgroup of A_p.

    For each prime power m = l**e dividing p-1 the oracle is restricted to
    N_m by pairing it with x -> x**m. Assuming |H cap N_m| = m, the
    maximum-likelihood solver with an element of order m proposes b, and
    the hypothesis is accepted when the proposed generator is in H. The
    order is the product of the largest accepted prime powers.
    """
    if spec.kind != "affine":
        raise ValueError("determine_subgroup_order works in A_p")
    p = spec.p
    num_samples = num_samples or default_info_samples(p)
    order = 1
    shifts = set()
    steps = []
    for prime, exp in sorted(nt.factorize(spec.q).items()):
        for e in range(1, exp + 1):
            m = prime ** e
            fm = power_filter_oracle(oracle, m, spec)
            a_m = spec.element_of_order(m)
            res = ml_reconstruct_conjugate(fm, a_m, spec, num_samples,
                                           seed=seed * 7919 + m, verify="generator",
                                           stream=STREAM_ORDER)
            ok = res.verified and all(_in_hidden(oracle, g) for g in res.subgroup.generators(spec))
            steps.append({"prime_power": m, "accepted": ok, "b": res.info.get("b")})
            if not ok:
                break
            order *= prime
            shifts.add(res.subgroup.b)
    if len(shifts) > 1:
        raise PromiseViolation(f"inconsistent shifts {sorted(shifts)} across prime powers")
    if detail:
        return order, steps
    return order


def info_reconstruct_subgroup(oracle: HiddenOracle, spec: GroupSpec, seed: int,
                              num_samples: int | None = None) -> ReconstructionResult:
    """Any hidden subgroup of A_p or Z_q x| Z_p with the information-theoretic measurement.

    Normal subgroups come from the weak-sampling core. Otherwise the order
    n is determined, then b by maximum likelihood with an element of order n.
    """
    q0 = oracle.queries
    core, observed = _weak_core(oracle, spec, seed)
    info: dict = {"weak_samples": observed}
    if core.kind != "trivial":
        if verify_subgroup(oracle, core, spec, trial_rng(seed, STREAM_VERIFY, 10**6)):
            return ReconstructionResult(core, True, len(observed), oracle.queries - q0, [], {}, info)
    if spec.kind == "affine":
        lifted, amb = oracle, spec
    else:
        lifted, amb = extend_qhedral_oracle(oracle, spec), spec.ambient()
    num_samples = num_samples or default_info_samples(spec.p)
    n, steps = determine_subgroup_order(lifted, amb, seed, num_samples, detail=True)
    info["order_steps"] = steps
    info["order"] = n
    trials = len(observed) + num_samples * len(steps)
    if n == 1:
        triv = SubgroupDesc.trivial()
        ok = verify_subgroup(oracle, triv, spec, trial_rng(seed, STREAM_VERIFY, 10**6 + 1))
        return ReconstructionResult(triv, ok, trials, oracle.queries - q0, [], {}, info)
    a = amb.element_of_order(n)
    res = ml_reconstruct_conjugate(lifted, a, amb, num_samples, seed)
    trials += res.trials
    h = None if res.subgroup is None else SubgroupDesc.conjugate(a, res.subgroup.b, spec)
    ok = res.verified and verify_subgroup(oracle, h, spec, trial_rng(seed, STREAM_VERIFY, 10**6 + 2))
    return ReconstructionResult(h, ok, trials, oracle.queries - q0, res.transcript, res.scores, info)


def run_with_timing(fn, *args, **kwargs):
    """Call ``fn`` and return (result, seconds)."""
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
