"""Hidden shifts of multiplicative-coset functions, solved as hidden conjugates in A_p.

A coset function f on Z_p is constant exactly on the cosets of an index-r
subgroup M of Z_p^* and gives 0 its own symbol. A_p acts on functions by
(alpha f)(x) = f(alpha^{-1} x); the stabiliser of f is H_a = <(a, 0)> with
a = gamma**r, and the stabiliser of f_s(x) = f(x - s) is the conjugate
H_a^s. Sampling alpha f_s on a random set R of m = ceil(5 log2 p) points
gives an oracle on A_p that (with high probability over R) hides H_a^s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from . import numtheory as nt
from .groups import GroupElement, GroupSpec, HiddenOracle, PromiseViolation, SubgroupDesc
from .reconstruction import ReconstructionResult, solve_hcp_affine
from .sampling import SAMPLER_ENUM_CAP, trial_rng

STREAM_R, STREAM_PROBE = 11, 12


@dataclass(frozen=True)
class CosetFunction:
    """f(x) = labels[log_gamma(x) mod r] for x != 0, f(0) = r."""

    p: int
    r: int
    gamma: int
    labels: tuple[int, ...]

    @property
    def subgroup_order(self) -> int:
        return (self.p - 1) // self.r

    @property
    def stabiliser_generator(self) -> int:
        """a = gamma**r, generating M."""
        return pow(self.gamma, self.r, self.p)

    def table(self) -> np.ndarray:
        return _coset_table(self)

    def __call__(self, x: int) -> int:
        return int(self.table()[x % self.p])

    def members(self) -> list[int]:
        """Elements of M, ascending."""
        return sorted(int(v) for v in nt.subgroup_powers(self.stabiliser_generator, self.p))


_TABLES: dict = {}


def _coset_table(f: CosetFunction) -> np.ndarray:
    key = (f.p, f.r, f.gamma, f.labels)
    if key not in _TABLES:
        logs = nt._dlog_lookup(f.gamma, f.p)
        t = np.empty(f.p, dtype=np.int64)
        t[1:] = np.asarray(f.labels, dtype=np.int64)[logs[1:] % f.r]
        t[0] = f.r
        t.flags.writeable = False
        _TABLES[key] = t
    return _TABLES[key]


def make_coset_function(p: int, r: int, seed: int | None = None,
                        gamma: int | None = None) -> CosetFunction:
    """Coset function for the index-r subgroup; ``seed`` permutes the labels 0..r-1."""
    if not nt.is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if r < 2 or (p - 1) % r:
        raise ValueError(f"r={r} must be > 1 and divide p-1={p - 1}")
    gamma = nt.primitive_root(p) if gamma is None else gamma
    labels = tuple(range(r))
    if seed is not None:
        labels = tuple(int(v) for v in np.random.default_rng([seed, 13]).permutation(r))
    return CosetFunction(p, r, gamma, labels)


@dataclass(frozen=True)
class ShiftInstance:
    f: CosetFunction
    s: int

    def table(self) -> np.ndarray:
        """Values of f_s(x) = f(x - s) for x = 0..p-1."""
        return np.roll(self.f.table(), self.s % self.f.p)

    def oracle(self) -> HiddenOracle:
        p = self.f.p
        t = self.table()
        return HiddenOracle(lambda x: int(t[int(x) % p]), None, None, name="f_s")

    def to_dict(self) -> dict:
        return {"p": self.f.p, "r": self.f.r, "gamma": self.f.gamma, "s": self.s}


def make_shift_instance(p: int, r: int, s: int, seed: int | None = None) -> ShiftInstance:
    return ShiftInstance(make_coset_function(p, r, seed), int(s) % p)


@dataclass(frozen=True)
class SampleSet:
    points: tuple[int, ...]
    seed: int

    @property
    def m(self) -> int:
        return len(self.points)


def default_sample_size(p: int) -> int:
    return math.ceil(5 * math.log2(p))


def draw_sample_set(p: int, seed: int, m: int | None = None, attempt: int = 0) -> SampleSet:
    """m points of Z_p drawn independently and uniformly (duplicates kept)."""
    m = default_sample_size(p) if m is None else m
    rng = trial_rng(seed, STREAM_R, attempt)
    return SampleSet(tuple(int(v) for v in rng.integers(0, p, size=m)), seed)


def shift_spec(f: CosetFunction) -> GroupSpec:
    return GroupSpec.affine(f.p, f.gamma)


def sampled_symmetry_oracle(inst: ShiftInstance, R: SampleSet,
                            fs_oracle: HiddenOracle | None = None,
                            declare_truth: bool | None = None) -> HiddenOracle:
    """alpha -> ((alpha f_s)(x) for x in R) = (f_s(alpha^{-1} x))_x, an oracle on A_p.

    Each evaluation costs m queries to f_s. The hidden subgroup is H_a^s
    whenever R is good; for groups small enough to enumerate the sampling
    device checks this itself, otherwise it is declared (``declare_truth``).
    """
    f = inst.f
    p = f.p
    spec = shift_spec(f)
    fs = fs_oracle or inst.oracle()
    xs = np.asarray(R.points, dtype=np.int64)

    def fn(alpha):
        x, y = spec.check(alpha)
        xi = pow(x, -1, p)
        return tuple(fs(xi * (int(v) - y) % p) for v in xs)

    if declare_truth is None:
        declare_truth = spec.order > SAMPLER_ENUM_CAP
    truth = SubgroupDesc.conjugate(f.stabiliser_generator, inst.s, spec) if declare_truth else None
    return HiddenOracle(fn, spec, truth, parent=fs, cost=R.m, name="F_s^R")


def symmetry_table(inst: ShiftInstance, R: SampleSet, alphas: np.ndarray) -> np.ndarray:
    """F_s^R for a batch of group elements at once (rows follow ``alphas``)."""
    p = inst.f.p
    alphas = np.asarray(alphas, dtype=np.int64)
    uniq, pos = np.unique(alphas[:, 0], return_inverse=True)
    a_inv = np.array([pow(int(x), -1, p) for x in uniq], dtype=np.int64)[pos.ravel()]
    return kernels.affine_pullback(inst.table(), a_inv, alphas[:, 1], np.asarray(R.points), p)


def level_sets_match_cosets(inst: ShiftInstance, R: SampleSet) -> bool:
    """Exact check that the level sets of F_s^R are the left cosets of H_a^s.

    H_a^s is the stabiliser of the point s, so the left coset of g = (x, y)
    is determined by (log x mod r, g(s) = x s + y).
    """
    f = inst.f
    p = f.p
    xs = np.repeat(np.arange(1, p, dtype=np.int64), p)
    ys = np.tile(np.arange(p, dtype=np.int64), p - 1)
    values = symmetry_table(inst, R, np.stack([xs, ys], axis=1))
    logs = nt._dlog_lookup(f.gamma, p)
    labels = (logs[xs] % f.r) * p + (xs * inst.s + ys) % p
    n_cos = f.r * p
    rows = np.ascontiguousarray(values).view(np.dtype((np.void, values.dtype.itemsize * values.shape[1])))
    val_ids = np.unique(rows.ravel(), return_inverse=True)[1].ravel()
    if val_ids.max() + 1 != n_cos:
        return False
    # same partition iff the pairing label <-> value is a bijection
    pairs = np.unique(labels * n_cos + val_ids)
    return len(pairs) == n_cos


def isotropy_subgroup(f: CosetFunction) -> list[GroupElement]:
    """All alpha in A_p with alpha f = f, by exhaustive check."""
    p = f.p
    t = f.table()
    out = []
    xs = np.arange(p, dtype=np.int64)
    for a in range(1, p):
        ai = pow(a, -1, p)
        for b in range(p):
            if np.array_equal(t[(ai * (xs - b)) % p], t):
                out.append(GroupElement(a, b))
    return out


def collision_probability(alpha, beta, f: CosetFunction) -> Fraction:
    """Pr over uniform x in Z_p that (alpha f)(x) = (beta f)(x), exactly."""
    p = f.p
    t = f.table()
    xs = np.arange(p, dtype=np.int64)

    def pull(g):
        x, y = int(g[0]) % p, int(g[1]) % p
        return t[(pow(x, -1, p) * (xs - y)) % p]

    return Fraction(int(np.count_nonzero(pull(alpha) == pull(beta))), p)


def collision_table(f: CosetFunction) -> tuple[np.ndarray, np.ndarray]:
    """Pr_x[f(g x) = f(x)] for every g in A_p.

    Since (alpha f)(x) = (beta f)(x) iff f(alpha^{-1} beta z) = f(z) with
    z = beta^{-1} x, the collision probability of a pair depends only on
    g = alpha^{-1} beta. Returns (elements (x, y) as rows, counts out of p).
    """
    p = f.p
    t = f.table()
    z = np.arange(p, dtype=np.int64)
    elems, counts = [], []
    for x in range(1, p):
        gz = (x * z[None, :] + np.arange(p)[:, None]) % p  # row y: x z + y
        c = np.count_nonzero(t[gz] == t[None, :], axis=1)
        elems.extend((x, y) for y in range(p))
        counts.extend(int(v) for v in c)
    return np.array(elems, dtype=np.int64), np.array(counts, dtype=np.int64)


def solve_hidden_shift(inst: ShiftInstance, spec: GroupSpec | None, seed: int,
                       max_trials: int = 200, redraws: int = 3,
                       fs_oracle: HiddenOracle | None = None) -> ReconstructionResult:
    """Recover s from oracle access to f_s.

    Draws R, solves the hidden conjugate problem for F_s^R with
    a = gamma**r, then checks the answer by comparing f_s with f(. - s) on
    probe points. A failed check, or a sample set whose level sets are not
    cosets, triggers a fresh R (at most ``redraws`` more times).
    """
    f = inst.f
    p = f.p
    spec = spec or shift_spec(f)
    fs = fs_oracle or inst.oracle()
    q0 = fs.queries
    a = f.stabiliser_generator
    attempts = []
    trials = 0
    probes = 2 * math.ceil(math.log2(p)) + 8
    for attempt in range(redraws + 1):
        R = draw_sample_set(p, seed, attempt=attempt)
        F = sampled_symmetry_oracle(inst, R, fs)
        try:
            res = solve_hcp_affine(F, a, spec, seed=seed * 31 + attempt, max_trials=max_trials)
        except PromiseViolation as exc:
            attempts.append({"attempt": attempt, "error": str(exc)})
            continue
        trials += res.trials
        s_hat = res.info.get("b")
        ok = False
        if res.verified and s_hat is not None:
            rng = trial_rng(seed, STREAM_PROBE, attempt)
            ft = f.table()
            ok = all(fs(int(x)) == int(ft[(int(x) - s_hat) % p])
                     for x in rng.integers(0, p, size=probes))
        attempts.append({"attempt": attempt, "s": s_hat, "hcp_verified": res.verified,
                         "probe_ok": ok, "trials": res.trials})
        if ok:
            h = SubgroupDesc.conjugate(a, s_hat, spec)
            return ReconstructionResult(h, True, trials, fs.queries - q0, attempts, res.scores,
                                        {"s": s_hat, "m": R.m})
    return ReconstructionResult(None, False, trials, fs.queries - q0, attempts, {}, {"s": None})
