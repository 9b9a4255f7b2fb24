"""Irreducible representations, projections pi_H(rho) and coset Fourier transforms.

Conventions
-----------
* ``sigma_t`` (t in Z_q) is one-dimensional: ``sigma_t(x, y) = w_q**(t*u)``
  with ``x = base**u``; the base is gamma for A_p and ``spec.a`` for a
  q-hedral group.
* ``rho`` (A_p only) has dimension p-1 in the adapted basis indexed by
  j = 1..p-1: row j of ``rho(x, y)`` has the single entry ``w_p**(y*j)`` in
  column ``x*j mod p``. Matrix row/column ``j`` is stored at index ``j-1``.
* ``rho_k`` (q-hedral, k a minimal coset representative of <a> in Z_p^*)
  has dimension q: row s of ``rho_k(a**u, y)`` has the entry
  ``w_p**(k * a**s * y)`` in column ``s+u mod q``.

Every representation here is monomial (one nonzero per row), so the
``monomial`` form ``(cols, phases)`` is the primary evaluation and dense
matrices are built from it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import numtheory as nt
from .distributions import OutcomeDistribution
from .groups import GroupElement, GroupSpec, SubgroupDesc

DENSE_CAP = 4096


@lru_cache(maxsize=64)
def roots_of_unity(n: int) -> np.ndarray:
    """``w_n**k`` for k = 0..n-1 (read-only)."""
    table = np.exp(2j * np.pi * np.arange(n) / n)
    table.flags.writeable = False
    return table


def omega(n: int, k) -> complex | np.ndarray:
    return roots_of_unity(n)[np.asarray(k) % n]


@dataclass(frozen=True)
class Irrep:
    kind: str  # "sigma" | "rho" | "rho_k"
    index: int
    spec: GroupSpec

    @property
    def dim(self) -> int:
        if self.kind == "sigma":
            return 1
        if self.kind == "rho":
            return self.spec.p - 1
        return self.spec.q

    @property
    def name(self) -> str:
        if self.kind == "sigma":
            return f"sigma_{self.index}"
        if self.kind == "rho":
            return "rho"
        return f"rho_{self.index}"

    @property
    def high_dimensional(self) -> bool:
        return self.kind != "sigma"

    def _sigma_base(self) -> int:
        return self.spec.gamma if self.spec.kind == "affine" else self.spec.a

    def monomial(self, g) -> tuple[np.ndarray, np.ndarray]:
        """(cols, phases): row i has the single nonzero ``phases[i]`` at ``cols[i]``."""
        spec = self.spec
        p = spec.p
        x, y = spec.check(g)
        if self.kind == "sigma":
            u = nt.discrete_log(x, self._sigma_base(), p)
            return np.zeros(1, dtype=np.int64), np.array([omega(spec.q, self.index * u)])
        if self.kind == "rho":
            j = np.arange(1, p, dtype=np.int64)
            return (x * j) % p - 1, omega(p, y * j % p)
        q = spec.q
        u = spec.exponent(x)
        s = np.arange(q, dtype=np.int64)
        pows = spec.mult_powers  # a**s
        return (s + u) % q, omega(p, (self.index * pows % p) * y % p)

    def matrix(self, g) -> np.ndarray:
        d = self.dim
        if d > DENSE_CAP:
            raise ValueError(f"dimension {d} exceeds dense cap {DENSE_CAP}")
        cols, phases = self.monomial(g)
        m = np.zeros((d, d), dtype=np.complex128)
        m[np.arange(d), cols] = phases
        return m

    def __call__(self, g) -> np.ndarray:
        return self.matrix(g)

    def kernel(self) -> SubgroupDesc:
        if self.kind == "sigma":
            return SubgroupDesc.normal(math.gcd(self.spec.q, self.index)).canonical(self.spec)
        return SubgroupDesc.trivial()

    def __repr__(self) -> str:
        return f"Irrep({self.name}, dim={self.dim})"


def irreps(spec: GroupSpec) -> list[Irrep]:
    """Complete list of inequivalent irreducible representations."""
    out = [Irrep("sigma", t, spec) for t in range(spec.q)]
    if spec.kind == "affine":
        out.append(Irrep("rho", 0, spec))
    else:
        out.extend(Irrep("rho_k", k, spec) for k in nt.mult_coset_labels(spec.a, spec.p))
    return out


def irrep_by_name(name: str, spec: GroupSpec) -> Irrep:
    if name == "rho":
        return Irrep("rho", 0, spec)
    kind, _, idx = name.rpartition("_")
    return Irrep(kind if kind == "sigma" else "rho_k", int(idx), spec)


def rho_affine(g, spec: GroupSpec) -> np.ndarray:
    if spec.kind != "affine":
        raise ValueError("rho_affine needs the affine group")
    return Irrep("rho", 0, spec).matrix(g)


def rho_qhedral(g, k: int, spec: GroupSpec) -> np.ndarray:
    if k % spec.p == 0:
        raise ValueError("k must be a unit mod p")
    return Irrep("rho_k", k % spec.p, spec).matrix(g)


def sigma(g, t: int, spec: GroupSpec) -> complex:
    return complex(Irrep("sigma", t % spec.q, spec).matrix(g)[0, 0])


# -- projections ---------------------------------------------------------------

@dataclass(frozen=True)
class Projector:
    name: str
    matrix: np.ndarray
    rank: int

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def projector_rank(h: SubgroupDesc, irrep: Irrep, spec: GroupSpec) -> int:
    """rk pi_H(rho) from the character: (1/|H|) sum_h tr rho(h)."""
    n = h.mult_order(spec)
    if irrep.kind == "sigma":
        return 1 if irrep.index % n == 0 else 0
    if h.contains_translations():
        return 0
    return irrep.dim // n


def projector_rows(h: SubgroupDesc, irrep: Irrep, spec: GroupSpec,
                   rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form rows of pi_H(rho) for the given row indices.

    Returns ``(cols, vals)`` of shape ``(len(rows), n)``: row ``rows[i]`` has
    entries ``vals[i]`` at ``cols[i]`` (n nonzeros per row, n = |H|).
    Only for high-dimensional irreps and trivial/conjugate H.
    """
    p = spec.p
    rows = np.asarray(rows, dtype=np.int64)
    if h.kind == "trivial":
        return rows[:, None].copy(), np.ones((len(rows), 1), dtype=np.complex128)
    if h.kind != "conjugate":
        raise ValueError("rows of a zero projector requested")
    powers = nt.subgroup_powers(h.a, p)  # a'^t, t < n
    n = len(powers)
    if irrep.kind == "rho":
        j = rows + 1
        col_vals = (j[:, None] * powers[None, :]) % p
        vals = omega(p, (h.b * ((j[:, None] - col_vals) % p)) % p) / n
        return col_vals - 1, vals
    q = spec.q
    u = np.array([spec.exponent(int(x)) for x in powers], dtype=np.int64)
    a_s = spec.mult_powers[rows]
    cols = (rows[:, None] + u[None, :]) % q
    ph = (irrep.index * a_s % p)[:, None] * ((1 - powers[None, :]) % p) % p * h.b % p
    return cols, omega(p, ph) / n


def projector(h: SubgroupDesc, irrep: Irrep, spec: GroupSpec, method: str = "closed") -> Projector:
    """pi_H(rho) = (1/|H|) sum_{h in H} rho(h).

    ``method="sum"`` adds up the enumerated group elements; ``"closed"``
    writes the entries down directly.
    """
    d = irrep.dim
    if d > DENSE_CAP:
        raise ValueError(f"dimension {d} exceeds dense cap {DENSE_CAP}")
    rank = projector_rank(h, irrep, spec)
    if method == "sum":
        m = np.zeros((d, d), dtype=np.complex128)
        elems = h.elements(spec)
        idx = np.arange(d)
        for g in elems:
            cols, ph = irrep.monomial(g)
            m[idx, cols] += ph
        m /= len(elems)
    elif irrep.kind == "sigma":
        m = np.full((1, 1), float(rank), dtype=np.complex128)
    elif h.kind in ("trivial", "conjugate"):
        cols, vals = projector_rows(h, irrep, spec, np.arange(d))
        m = np.zeros((d, d), dtype=np.complex128)
        np.add.at(m, (np.repeat(np.arange(d), cols.shape[1]), cols.ravel()), vals.ravel())
    else:
        m = np.zeros((d, d), dtype=np.complex128)
    return Projector(irrep.name, m, rank)


def observe_rep_distribution(h: SubgroupDesc, spec: GroupSpec) -> OutcomeDistribution:
    """Weak Fourier sampling: P(rho) = (d_rho |H| / |G|) rk pi_H(rho)."""
    size = h.size(spec)
    mapping = {}
    for rep in irreps(spec):
        r = projector_rank(h, rep, spec)
        mapping[(rep.name,)] = rep.dim * size * r / spec.order
    meta = {"group": spec.to_dict(), "subgroup": h.to_dict(), "measurement": "weak"}
    return OutcomeDistribution.from_dict(("irrep",), mapping, meta)


def coset_transform(h: SubgroupDesc, c, irrep: Irrep, spec: GroupSpec,
                    method: str = "factored") -> np.ndarray:
    """Fourier transform at ``irrep`` of the normalized indicator of the coset cH.

    ``factored``: sqrt(d |H| / |G|) rho(c) pi_H(rho).
    ``direct``: sqrt(d / (|G| |H|)) sum_{g in cH} rho(g).
    """
    d = irrep.dim
    size = h.size(spec)
    if method == "direct":
        from .groups import _mul
        m = np.zeros((d, d), dtype=np.complex128)
        idx = np.arange(d)
        for x in h.elements(spec):
            cols, ph = irrep.monomial(_mul(spec.check(c), x, spec.p))
            m[idx, cols] += ph
        return m * math.sqrt(d / (spec.order * size))
    pi = projector(h, irrep, spec).matrix
    cols, ph = irrep.monomial(c)
    # rho(c) @ pi: row i of the product is ph[i] * pi[cols[i]]
    return math.sqrt(d * size / spec.order) * (ph[:, None] * pi[cols])


def block_structure(spec: GroupSpec, q: int) -> dict[int, tuple[int, int]]:
    """Map the adapted index j of rho to block coordinates (k, s) with j = k a**s.

    ``a = gamma**((p-1)/q)``; k runs over the minimal coset representatives
    of <a>. Ordering rows by (k, s) makes rho restricted to N_q block
    diagonal with blocks rho_k.
    """
    if spec.kind != "affine":
        raise ValueError("block structure is defined for rho of the affine group")
    if q < 1 or (spec.p - 1) % q:
        raise ValueError(f"q={q} does not divide p-1={spec.p - 1}")
    p = spec.p
    a = spec.element_of_order(q)
    powers = nt.subgroup_powers(a, p)
    out = {}
    for k in nt.mult_coset_labels(a, p):
        for s, x in enumerate(powers):
            out[int(k * x % p)] = (k, s)
    return out


def block_permutation(spec: GroupSpec, q: int) -> np.ndarray:
    """Row order (0-based adapted indices) listing blocks k ascending, s ascending."""
    bs = block_structure(spec, q)
    order = sorted(bs, key=lambda j: bs[j])
    return np.array(order, dtype=np.int64) - 1


def matrix_to_csv(m: np.ndarray, tol: float = 0.0) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["row", "col", "re", "im"])
    for (i, j), v in np.ndenumerate(m):
        if abs(v) > tol:
            w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def is_unitary(m: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=tol))


def plancherel_total(reps: Sequence[Irrep]) -> int:
    return sum(r.dim ** 2 for r in reps)


__all__ = [
    "Irrep", "Projector", "irreps", "irrep_by_name", "rho_affine", "rho_qhedral", "sigma",
    "projector", "projector_rank", "projector_rows", "observe_rep_distribution",
    "coset_transform", "block_structure", "block_permutation", "matrix_to_csv",
    "roots_of_unity", "omega", "plancherel_total", "is_unitary",
]
