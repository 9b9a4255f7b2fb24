"""Exact simulation of Fourier sampling on coset states.

The quantum experiment is: prepare a uniform superposition over a random
left coset cH, apply the Fourier transform over the group, then measure.
Everything here computes the resulting outcome distributions exactly and,
for the solvers, draws samples from them with seeded generators.

Measurement procedures
----------------------
weak
    Measure the irrep name only.
strong
    Measure name, row and column in a chosen basis (adapted or Haar random).
row Fourier (A_p)
    Measure the name; when it is rho, measure the row register, then apply
    the conjugate Fourier transform over Z_{p-1} to the column register and
    measure the frequency l. The row carries the block label k.
info (A_p, element a of order q)
    Measure the name; for rho, measure the row, then the <a>-coset k of the
    column, then the q-outcome POVM with Kraus operators
    (P_u + P_{u+1}) / sqrt(2) on block positions, then a Hadamard on the
    surviving pair. Outcomes are (k, u, bit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import numtheory as nt
from .distributions import OutcomeDistribution, mixture
from .groups import (ENUMERATION_CAP, GroupElement, GroupSpec, HiddenOracle, PromiseViolation,
                     SubgroupDesc, _mul, hidden_subgroup_by_enumeration)
from .reps import (DENSE_CAP, Irrep, coset_transform, irreps, observe_rep_distribution, omega,
                   projector, projector_rank, projector_rows)

SAMPLER_ENUM_CAP = 200_000
ROWS_METHOD_CAP = 4096


# -- bases -------------------------------------------------------------------

def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random n x n unitary: QR of a complex Gaussian, diag(R) made positive."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    qm, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return qm * (d / np.abs(d))[None, :]


@dataclass(frozen=True)
class MeasurementBasis:
    """``adapted`` (identity change of basis) or ``random`` drawn from ``seed``.

    The random unitary for an irrep depends only on (seed, irrep name), so
    the same seed gives the same basis regardless of which irreps are used.
    """

    ident: str = "adapted"
    seed: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def adapted(cls) -> "MeasurementBasis":
        return cls("adapted")

    @classmethod
    def random(cls, seed: int) -> "MeasurementBasis":
        return cls("random", int(seed))

    @property
    def label(self) -> str:
        return self.ident if self.seed is None else f"{self.ident}({self.seed})"

    def unitary(self, irrep: Irrep) -> np.ndarray | None:
        if self.ident == "adapted":
            return None
        key = (irrep.spec, irrep.name)
        if key not in self._cache:
            if irrep.dim > DENSE_CAP:
                raise ValueError(f"dimension {irrep.dim} exceeds dense cap")
            tag = _name_tag(irrep.name)
            rng = np.random.default_rng([self.seed, tag])
            self._cache[key] = haar_unitary(irrep.dim, rng)
        return self._cache[key]


def _name_tag(name: str) -> int:
    # stable integer tag per irrep name (no hash randomisation)
    return int.from_bytes(name.encode(), "little") % (2**63)


# -- coset states ----------------------------------------------------------------

def element_index(g, spec: GroupSpec) -> int:
    """Position of g in ``spec.elements()`` order."""
    u = _sorted_position(spec)[g[0]]
    return int(u) * spec.p + int(g[1])


@lru_cache(maxsize=32)
def _sorted_position(spec: GroupSpec) -> np.ndarray:
    pos = np.full(spec.p, -1, dtype=np.int64)
    pos[np.sort(spec.mult_powers)] = np.arange(spec.q)
    return pos


@dataclass(frozen=True)
class CosetState:
    """Uniform superposition over the left coset cH."""

    spec: GroupSpec
    h: SubgroupDesc
    c: GroupElement

    def support(self) -> list[GroupElement]:
        c = self.spec.check(self.c)
        return [_mul(c, x, self.spec.p) for x in self.h.elements(self.spec)]

    def amplitude(self) -> float:
        return 1.0 / math.sqrt(self.h.size(self.spec))

    def vector(self) -> np.ndarray:
        if self.spec.order > ENUMERATION_CAP:
            raise ValueError("group too large for a dense state vector")
        v = np.zeros(self.spec.order, dtype=np.complex128)
        idx = [element_index(g, self.spec) for g in self.support()]
        v[idx] = self.amplitude()
        return v

    def fourier(self, irrep: Irrep) -> np.ndarray:
        """sqrt(d/|G|) sum_g psi(g) rho(g), summed over the support directly."""
        d = irrep.dim
        m = np.zeros((d, d), dtype=np.complex128)
        rows = np.arange(d)
        for g in self.support():
            cols, ph = irrep.monomial(g)
            m[rows, cols] += ph
        return m * self.amplitude() * math.sqrt(d / self.spec.order)


# -- strong sampling -------------------------------------------------------------

def _strong_arrays(h, c, basis, spec):
    out = {}
    for rep in irreps(spec):
        f = coset_transform(h, c, rep, spec)
        u = basis.unitary(rep)
        if u is not None:
            f = u.conj().T @ f @ u
        out[rep.name] = np.abs(f) ** 2
    return out


def _arrays_to_distribution(arrays, meta) -> OutcomeDistribution:
    mapping = {}
    for name, probs in arrays.items():
        for (i, j), v in np.ndenumerate(probs):
            if v > 1e-15:
                mapping[(name, i, j)] = float(v)
    return OutcomeDistribution.from_dict(("irrep", "row", "col"), mapping, meta)


def strong_sample_distribution(h: SubgroupDesc, c, basis: MeasurementBasis,
                               spec: GroupSpec) -> OutcomeDistribution:
    """P(rho, i, j) = |(B^dag phi_c(rho) B)_{ij}|^2 for the single coset cH."""
    c = spec.check(c)
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "basis": basis.label,
            "coset": list(c), "averaged": False}
    return _arrays_to_distribution(_strong_arrays(h, c, basis, spec), meta)


def coset_averaged_distribution(h: SubgroupDesc, basis: MeasurementBasis,
                                spec: GroupSpec) -> OutcomeDistribution:
    """Uniform mixture of the strong distributions over all left cosets."""
    reps_ = h.coset_representatives(spec)
    acc = None
    for c in reps_:
        arr = _strong_arrays(h, c, basis, spec)
        if acc is None:
            acc = arr
        else:
            for k in acc:
                acc[k] += arr[k]
    acc = {k: v / len(reps_) for k, v in acc.items()}
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "basis": basis.label,
            "averaged": True}
    return _arrays_to_distribution(acc, meta)


# -- row Fourier measurement (hidden conjugates in A_p) ---------------------------

def _require_affine(spec: GroupSpec):
    if spec.kind != "affine":
        raise ValueError("this measurement is defined on the affine group A_p")


def _block_frequency_probs(block: np.ndarray, b: int, p: int) -> np.ndarray:
    """P(l | block) for l in Z_{p-1}: |sum_x w_p^{-bx} w_{p-1}^{lx}|^2 / (|block|(p-1))."""
    n = p - 1
    w = np.zeros(n, dtype=np.complex128)
    np.add.at(w, block % n, omega(p, (-b * block) % p))
    amp = np.fft.ifft(w) * n
    return np.abs(amp) ** 2 / (len(block) * n)


def _blocks(a: int, p: int) -> dict[int, np.ndarray]:
    powers = nt.subgroup_powers(a, p)
    return {k: (k * powers) % p for k in nt.mult_coset_labels(a, p)}


def row_fourier_distribution(h: SubgroupDesc, spec: GroupSpec, joint: bool = False
                             ) -> OutcomeDistribution:
    """Distribution of the frequency l given that rho was observed (closed form).

    ``joint=True`` keeps the block label k of the measured row: outcomes
    (k, l), with k uniform over the cosets of <a>. Otherwise the marginal on l.
    For the maximal subgroup this is
    sin^2((p-1) theta) / ((p-1)^2 sin^2 theta), theta = (b/p - l/(p-1)) pi.
    """
    _require_affine(spec)
    p = spec.p
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "measurement": "row-fourier",
            "conditioned_on": "rho", "averaged": True}
    if h.contains_translations():
        raise ValueError("rho is never observed when H contains translations")
    if h.kind == "trivial":
        outcomes = [(j, l) for j in range(1, p) for l in range(p - 1)] if joint else \
            [(l,) for l in range(p - 1)]
        fields = ("k", "ell") if joint else ("ell",)
        return OutcomeDistribution.uniform(fields, outcomes, meta)
    blocks = _blocks(h.a, p)
    weight = 1.0 / len(blocks)
    if joint:
        mapping = {}
        for k, block in blocks.items():
            probs = _block_frequency_probs(block, h.b, p)
            for l, v in enumerate(probs):
                mapping[(k, l)] = weight * v
        return OutcomeDistribution.from_dict(("k", "ell"), mapping, meta)
    total = np.zeros(p - 1)
    for block in blocks.values():
        total += _block_frequency_probs(block, h.b, p)
    return OutcomeDistribution(("ell",), [(l,) for l in range(p - 1)], total * weight, meta)


def maximal_closed_form(b: int, p: int) -> np.ndarray:
    """The sin^2 ratio for the maximal subgroup, evaluated directly."""
    l = np.arange(p - 1)
    theta = (b / p - l / (p - 1)) * np.pi
    s = np.sin(theta)
    out = np.empty(p - 1)
    small = np.abs(s) < 1e-12
    out[~small] = np.sin((p - 1) * theta[~small]) ** 2 / s[~small] ** 2 / (p - 1) ** 2
    out[small] = 1.0
    return out


def general_closed_form(b: int, a: int, p: int) -> np.ndarray:
    """P(l) for H_a^b with a of order q: block average of |sum_t e^{2i theta k a^t}|^2/(q(p-1))."""
    l = np.arange(p - 1)
    theta = (b / p - l / (p - 1)) * np.pi
    blocks = _blocks(a, p)
    q = nt.multiplicative_order(a, p)
    total = np.zeros(p - 1)
    for block in blocks.values():
        s = np.exp(2j * theta[:, None] * block[None, :]).sum(axis=1)
        total += np.abs(s) ** 2 / (q * (p - 1))
    return total / len(blocks)


def conj_fourier_matrix(p: int) -> np.ndarray:
    """Q-bar: entry (l, m) = w_{p-1}^{+l m} / sqrt(p-1), columns m = 1..p-1."""
    n = p - 1
    l = np.arange(n)[:, None]
    m = np.arange(1, p)[None, :]
    return omega(n, (l * m) % n) / math.sqrt(n)


def row_fourier_pipeline(h: SubgroupDesc, spec: GroupSpec, joint: bool = False
                         ) -> OutcomeDistribution:
    """The same distribution by explicit linear algebra.

    pi is summed from the enumerated subgroup, every coset's transform
    rho(c) pi is formed, the row is measured and the conjugate Z_{p-1}
    transform applied to the column register.
    """
    _require_affine(spec)
    p = spec.p
    rep = Irrep("rho", 0, spec)
    pi = projector(h, rep, spec, method="sum")
    if pi.rank == 0:
        raise ValueError("rho is never observed when H contains translations")
    t = pi.matrix @ conj_fourier_matrix(p).T  # rows of pi, column register transformed
    gen = h.a if h.kind == "conjugate" else 1
    reps_ = h.coset_representatives(spec)
    acc = np.zeros((p - 1, p - 1))
    labels = np.array([nt.mult_coset_min(j, gen, p) for j in range(1, p)])
    by_block = {}
    for c in reps_:
        cols, ph = rep.monomial(c)
        z = ph[:, None] * t[cols]
        probs = np.abs(z) ** 2 / pi.rank
        acc += probs
        if joint:
            for j in range(p - 1):
                k = int(labels[cols[j]])
                by_block[k] = by_block.get(k, 0) + probs[j]
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "measurement": "row-fourier",
            "method": "pipeline", "averaged": True}
    if joint:
        mapping = {(k, l): float(v[l]) / len(reps_) for k, v in by_block.items()
                   for l in range(p - 1)}
        return OutcomeDistribution.from_dict(("k", "ell"), mapping, meta)
    ell = acc.sum(axis=0) / len(reps_)
    return OutcomeDistribution(("ell",), [(l,) for l in range(p - 1)], ell, meta)


def _theta_distance(b: int, l: int, p: int) -> int:
    """|b/p - l/(p-1)| folded to [0, 1/2], scaled by p(p-1) (exact integer)."""
    m = p * (p - 1)
    r = (b * (p - 1) - l * p) % m
    return min(r, m - r)


def best_frequency(b: int, p: int) -> int:
    """The l minimising |theta| for shift b; ties go to the smaller l."""
    dists = [_theta_distance(b, l, p) for l in range(p - 1)]
    return int(np.argmin(dists))


def candidate_shifts(l: int, p: int) -> list[int]:
    """Every b minimising |theta| for observed frequency l, ascending.

    There are two exactly when l = (p-1)/2; that frequency is the only way
    to observe b = (p+1)/2, so a decoder keeping just one would never find it.
    """
    centre = round(l * p / (p - 1))
    cands = sorted({(centre + d) % p for d in (-1, 0, 1)})
    best = min(_theta_distance(b, l, p) for b in cands)
    return [b for b in cands if _theta_distance(b, l, p) == best]


def guess_shift(l: int, p: int) -> int:
    """The b minimising |theta| for observed frequency l; ties go to the smaller b."""
    return candidate_shifts(l, p)[0]


def hcp_trial_success_probability(h: SubgroupDesc, spec: GroupSpec) -> float:
    """Exact probability that one trial observes rho and votes for the true b."""
    p = spec.p
    dist = row_fourier_distribution(h, spec)
    p_rho = observe_rep_distribution(h, spec).prob(("rho",))
    good = sum(pr for (l,), pr in zip(dist.outcomes, dist.probs) if h.b in candidate_shifts(l, p))
    return p_rho * good


def coset_interval_fraction(a: int, k: int, p: int) -> Fraction:
    """Fraction of the coset k<a> lying strictly inside (p/6, 5p/6)."""
    if k % p == 0:
        raise ValueError("k must be a unit mod p")
    xs = (k % p) * nt.subgroup_powers(a, p) % p
    inside = int(np.count_nonzero((6 * xs > p) & (6 * xs < 5 * p)))
    return Fraction(inside, len(xs))


def min_interval_fraction(a: int, p: int) -> Fraction:
    return min(coset_interval_fraction(a, k, p) for k in nt.mult_coset_labels(a, p))


# -- information-theoretic measurement ----------------------------------------------

def povm_kraus(q: int) -> list[np.ndarray]:
    """Kraus operators (P_u + P_{u+1 mod q}) / sqrt(2) on C^q."""
    ops = []
    for u in range(q):
        m = np.zeros((q, q))
        m[u, u] = 1.0
        m[(u + 1) % q, (u + 1) % q] = 1.0
        ops.append(m / math.sqrt(2))
    return ops


def _check_measurement_element(a: int, spec: GroupSpec) -> int:
    q = nt.multiplicative_order(a, spec.p)
    if q < 2:
        raise ValueError("the measurement element must have order at least 2")
    return q


def info_formula_probs(b: int, a: int, p: int) -> dict[tuple, float]:
    """(k, u, bit) -> (q/(p-1)) (1/q) cos^2 / sin^2 (pi m b / p), m = k a^u (a-1)."""
    q = nt.multiplicative_order(a, p)
    powers = nt.subgroup_powers(a, p)
    out = {}
    nblocks = (p - 1) // q
    for k in nt.mult_coset_labels(a, p):
        m = (k * powers % p) * ((a - 1) % p) % p
        theta = np.pi * (m * b % p) / p
        c2 = np.cos(theta) ** 2
        for u in range(q):
            out[(k, u, 0)] = c2[u] / (q * nblocks)
            out[(k, u, 1)] = (1.0 - c2[u]) / (q * nblocks)
    return out


def _row_info_probs(cols: np.ndarray, vals: np.ndarray, a: int, q: int, p: int,
                    acc: dict, weight: float) -> None:
    """Accumulate weight * P(k, u, bit) for one normalized row state.

    ``cols`` are Z_p^* values (1..p-1) carrying amplitudes ``vals``.
    """
    labels = {}
    for x, v in zip(cols.tolist(), vals.tolist()):
        k = nt.mult_coset_min(x, a, p)
        s = nt.discrete_log(x * pow(k, -1, p) % p, a, p)
        labels.setdefault(k, {})[s] = labels.setdefault(k, {}).get(s, 0) + v
    for k, amps in labels.items():
        us = {(s - 1) % q for s in amps} | set(amps)
        for u in us:
            x0 = amps.get(u, 0)
            x1 = amps.get((u + 1) % q, 0)
            plus = abs(x0 + x1) ** 2 / 4
            minus = abs(x0 - x1) ** 2 / 4
            acc[(k, u, 0)] = acc.get((k, u, 0), 0.0) + weight * plus
            acc[(k, u, 1)] = acc.get((k, u, 1), 0.0) + weight * minus


def _row_state(h: SubgroupDesc, spec: GroupSpec, j: int):
    rep = Irrep("rho", 0, spec)
    cols, vals = projector_rows(h, rep, spec, np.array([j - 1]))
    vals = vals[0] / np.linalg.norm(vals[0])
    return cols[0] + 1, vals


def info_measurement_distribution(h: SubgroupDesc, spec: GroupSpec, a: int | None = None,
                                  method: str = "formula") -> OutcomeDistribution:
    """Joint law of (k, u, bit) given rho, averaged over cosets.

    ``a`` is the measurement element (defaults to H's own generator).
    ``formula`` uses the closed form and needs H = H_a'^b with <a'> = <a>;
    ``rows`` measures each row state of pi_H(rho) in turn; ``statevector``
    builds every coset state, transforms it, and applies the block
    projection, Kraus operators and Hadamard as explicit matrices.
    """
    _require_affine(spec)
    p = spec.p
    if a is None:
        if h.kind != "conjugate":
            raise ValueError("a measurement element is required for this subgroup")
        a = h.a
    q = _check_measurement_element(a, spec)
    if h.contains_translations():
        raise ValueError("rho is never observed when H contains translations")
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "measurement": "info",
            "a": int(a), "method": method, "conditioned_on": "rho", "averaged": True}
    fields = ("k", "u", "bit")
    if method == "formula":
        if h.kind != "conjugate" or nt.multiplicative_order(h.a, p) != q or \
                pow(h.a, 1, p) not in set(nt.subgroup_powers(a, p).tolist()):
            raise ValueError("closed form needs H generated by an element of <a> of the same order")
        return OutcomeDistribution.from_dict(fields, info_formula_probs(h.b, a, p), meta)
    if method == "rows":
        if p - 1 > ROWS_METHOD_CAP:
            raise ValueError("too many rows")
        acc: dict = {}
        for j in range(1, p):
            cols, vals = _row_state(h, spec, j)
            _row_info_probs(cols, vals, a, q, p, acc, 1.0 / (p - 1))
        return OutcomeDistribution.from_dict(fields, acc, meta)
    if method == "statevector":
        return OutcomeDistribution.from_dict(fields, _info_statevector(h, spec, a, q), meta)
    raise ValueError(f"unknown method {method!r}")


def _info_statevector(h: SubgroupDesc, spec: GroupSpec, a: int, q: int) -> dict:
    if spec.order > 5000:
        raise ValueError("state-vector simulation is limited to |G| <= 5000")
    p = spec.p
    rep = Irrep("rho", 0, spec)
    d = rep.dim
    kraus = povm_kraus(q)
    powers = nt.subgroup_powers(a, p)
    labels = nt.mult_coset_labels(a, p)
    # block projections and, per (k, u), the Kraus operator embedded in C^d
    embed = {}
    for k in labels:
        idx = (k * powers % p) - 1  # position s -> adapted index
        for u in range(q):
            m = np.zeros((d, d))
            m[np.ix_(idx, idx)] = kraus[u]
            embed[(k, u)] = (m, idx[u], idx[(u + 1) % q])
    cosets = h.coset_representatives(spec)
    acc = {}
    p_rho_total = 0.0
    for c in cosets:
        state = CosetState(spec, h, c)
        f = state.fourier(rep)
        p_rho_total += float(np.sum(np.abs(f) ** 2))
        for key, (m, i0, i1) in embed.items():
            post = f @ m.T  # Kraus on the column register, every row at once
            plus = np.zeros(d, dtype=np.complex128)
            minus = np.zeros(d, dtype=np.complex128)
            plus[[i0, i1]] = [1 / math.sqrt(2), 1 / math.sqrt(2)]
            minus[[i0, i1]] = [1 / math.sqrt(2), -1 / math.sqrt(2)]
            acc[key + (0,)] = acc.get(key + (0,), 0.0) + float(np.sum(np.abs(post @ plus.conj()) ** 2))
            acc[key + (1,)] = acc.get(key + (1,), 0.0) + float(np.sum(np.abs(post @ minus.conj()) ** 2))
    return {k: v / p_rho_total for k, v in acc.items()}


def info_coefficient(k: int, u: int, a: int, p: int) -> int:
    """m = k a^u (a - 1) mod p, the coefficient multiplying b in theta."""
    return k * pow(a, u, p) % p * ((a - 1) % p) % p


# -- random bases ------------------------------------------------------------------

def random_basis_distribution(h: SubgroupDesc, seed: int, spec: GroupSpec
                              ) -> OutcomeDistribution:
    """P_b(v) = |pi v|^2 / rk pi over the columns v of a Haar unitary from ``seed``."""
    _require_affine(spec)
    rep = Irrep("rho", 0, spec)
    if rep.dim > DENSE_CAP:
        raise ValueError("dimension exceeds dense cap")
    pi = projector(h, rep, spec)
    if pi.rank == 0:
        raise ValueError("rho is never observed when H contains translations")
    u = MeasurementBasis.random(seed).unitary(rep)
    probs = np.sum(np.abs(pi.matrix @ u) ** 2, axis=0) / pi.rank
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "basis": f"random({seed})",
            "seed": int(seed), "conditioned_on": "rho"}
    return OutcomeDistribution(("v",), [(i,) for i in range(rep.dim)], probs, meta)


def adapted_column_distribution(h: SubgroupDesc, spec: GroupSpec) -> OutcomeDistribution:
    """Column distribution of rho in the adapted basis (the random-basis counterpart)."""
    rep = Irrep("rho", 0, spec)
    pi = projector(h, rep, spec)
    probs = np.sum(np.abs(pi.matrix) ** 2, axis=0) / pi.rank
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "basis": "adapted"}
    return OutcomeDistribution(("v",), [(i,) for i in range(rep.dim)], probs, meta)


# -- abelian (forgetful) sampling ---------------------------------------------------

@dataclass(frozen=True)
class AbelianSubgroup:
    """Subgroup of Z_{n1} x ... x Z_{nk} given by its elements."""

    moduli: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...]

    def indicator(self) -> np.ndarray:
        arr = np.zeros(self.moduli)
        for e in self.elements:
            arr[tuple(e)] = 1.0
        return arr


def abelian_sample_distribution(h, spec: GroupSpec | None = None) -> OutcomeDistribution:
    """Character distribution of a coset state under an abelian Fourier transform.

    ``h`` is either an :class:`AbelianSubgroup` of a product of cyclic groups,
    or a :class:`SubgroupDesc` of A_p, which is then viewed forgetfully
    inside the direct product Z_{p-1} x Z_p via (x, y) -> (log_gamma x, y).
    """
    if isinstance(h, AbelianSubgroup):
        ind = h.indicator()
        size = len(h.elements)
        total = ind.size
        amp = np.fft.ifftn(ind) * total
        probs = np.abs(amp) ** 2 / (size * total)
        meta = {"moduli": list(h.moduli), "subgroup_order": size, "averaged": True}
        fields = tuple(f"chi{i}" for i in range(len(h.moduli)))
        outcomes = [tuple(int(v) for v in idx) for idx in np.ndindex(*h.moduli)]
        return OutcomeDistribution(fields, outcomes, probs.ravel(), meta)
    return forgetful_affine_distribution(h, spec)


def forgetful_affine_distribution(h: SubgroupDesc, spec: GroupSpec) -> OutcomeDistribution:
    """P(k, l) for characters w_{p-1}^{k t} w_p^{l y} of Z_{p-1} x Z_p, coset averaged."""
    _require_affine(spec)
    p = spec.p
    n = p - 1
    size = h.size(spec)
    elems = h.elements(spec)
    acc = np.zeros((n, p))
    for c in h.coset_representatives(spec):
        ind = np.zeros((n, p))
        for x in elems:
            g = _mul(c, x, p)
            ind[spec.log(g[0]), g[1]] = 1.0
        amp = np.fft.ifftn(ind) * ind.size
        acc += np.abs(amp) ** 2
    probs = acc / (size * spec.order * len(h.coset_representatives(spec)))
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "transform": "abelian Z_{p-1} x Z_p",
            "averaged": True}
    outcomes = [(k, l) for k in range(n) for l in range(p)]
    return OutcomeDistribution(("k", "ell"), outcomes, probs.ravel(), meta)


# -- the sampling device --------------------------------------------------------------

class FourierSampler:
    """Simulated quantum device attached to a hidden-subgroup oracle.

    Each call performs one Fourier-sampling experiment, billing a single
    superposition query to the oracle. The device needs to know the
    subgroup the oracle hides in order to compute the exact outcome law:
    it uses the oracle's declared ``truth`` when present and otherwise
    recovers it by evaluating the oracle everywhere (uncharged). Solvers
    only see the outcomes.
    """

    def __init__(self, oracle: HiddenOracle, spec: GroupSpec | None = None):
        self.oracle = oracle
        self.spec = spec or oracle.spec
        if self.spec is None:
            raise ValueError("a group spec is required")
        self._hidden: SubgroupDesc | None = None
        self._cache: dict = {}

    def hidden(self) -> SubgroupDesc:
        if self._hidden is None:
            if self.oracle.truth is not None:
                self._hidden = self.oracle.truth
            elif self.spec.order <= SAMPLER_ENUM_CAP:
                try:
                    self._hidden = hidden_subgroup_by_enumeration(self.oracle, self.spec)
                except ValueError as exc:
                    raise PromiseViolation(f"oracle does not hide a subgroup: {exc}") from exc
            else:
                raise ValueError("cannot simulate sampling: no ground truth and group too large")
        return self._hidden

    def _weak(self) -> OutcomeDistribution:
        if "weak" not in self._cache:
            self._cache["weak"] = observe_rep_distribution(self.hidden(), self.spec)
        return self._cache["weak"]

    def weak(self, rng: np.random.Generator) -> str:
        self.oracle.charge(1)
        return self._weak().sample(rng)[0]

    def p_rho(self) -> float:
        d = self._weak()
        return sum(pr for (name,), pr in zip(d.outcomes, d.probs) if not name.startswith("sigma"))

    def _observe_high(self, rng) -> bool:
        self.oracle.charge(1)
        return rng.random() < self.p_rho()

    def row_fourier(self, rng: np.random.Generator) -> tuple:
        """One row-Fourier trial: ("rho", k, l) or ("sigma", None, None)."""
        _require_affine(self.spec)
        if not self._observe_high(rng):
            return ("sigma", None, None)
        h = self.hidden()
        p = self.spec.p
        j = int(rng.integers(1, p))
        if h.kind == "trivial":
            return ("rho", j, int(rng.integers(p - 1)))
        k = nt.mult_coset_min(j, h.a, p)
        key = ("rowf", k)
        if key not in self._cache:
            block = (k * nt.subgroup_powers(h.a, p)) % p
            probs = _block_frequency_probs(block, h.b, p)
            cdf = np.cumsum(probs)
            cdf /= cdf[-1]
            self._cache[key] = cdf
        l = int(np.searchsorted(self._cache[key], rng.random(), side="right"))
        return ("rho", k, min(l, p - 2))

    def info(self, a: int, rng: np.random.Generator) -> tuple:
        """One info trial with measurement element a: ("rho", k, u, bit) or sigma."""
        _require_affine(self.spec)
        if not self._observe_high(rng):
            return ("sigma", None, None, None)
        h = self.hidden()
        p = self.spec.p
        q = _check_measurement_element(a, self.spec)
        if h.kind == "conjugate" and nt.multiplicative_order(h.a, p) == q and \
                pow(h.a, q, p) == 1 and nt.mult_coset_min(h.a, a, p) == 1:
            k = nt.mult_coset_labels(a, p)[int(rng.integers((p - 1) // q))]
            u = int(rng.integers(q))
            m = info_coefficient(k, u, a, p)
            c2 = math.cos(math.pi * (m * h.b % p) / p) ** 2
            return ("rho", k, u, 0 if rng.random() < c2 else 1)
        j = int(rng.integers(1, p))
        cols, vals = _row_state(h, self.spec, j)
        acc: dict = {}
        _row_info_probs(cols, vals, a, q, p, acc, 1.0)
        keys = sorted(acc)
        probs = np.array([acc[k_] for k_ in keys])
        idx = int(np.searchsorted(np.cumsum(probs) / probs.sum(), rng.random(), side="right"))
        return ("rho",) + keys[min(idx, len(keys) - 1)]


def trial_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index`` of ``stream`` under ``seed``."""
    return np.random.default_rng([int(seed), int(stream), int(index)])
