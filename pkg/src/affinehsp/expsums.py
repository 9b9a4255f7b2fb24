"""Gauss sums, incomplete sums over multiplicative subgroups, and concentration checks.

Character conventions: chi_s(z) = w_p^{s z} is additive and
psi_t(g^z) = w_{p-1}^{t z} is multiplicative with respect to a fixed
generator g; t = 0 is the trivial multiplicative character.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import numtheory as nt
from .distributions import OutcomeDistribution, l1_distance, total_variation

__all__ = [
    "CharacterPair", "gauss_sum", "gauss_sum_direct", "gauss_table", "gauss_degenerate_value",
    "incomplete_gauss_sum", "incomplete_gauss_sum_direct", "incomplete_sum_profile",
    "regime", "regime_bound", "cosine_gap_sum", "tv_cosine_identity",
    "concentration_experiment", "ConcentrationRow", "total_variation", "l1_distance",
    "l1_to_uniform",
]


@dataclass(frozen=True)
class CharacterPair:
    p: int
    s: int
    t: int
    g: int | None = None

    def __post_init__(self):
        if not nt.is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        object.__setattr__(self, "s", self.s % self.p)
        object.__setattr__(self, "t", self.t % (self.p - 1))
        if self.g is None:
            object.__setattr__(self, "g", nt.primitive_root(self.p))
        elif not nt.is_generator(self.g, self.p):
            raise ValueError(f"{self.g} does not generate Z_{self.p}^*")

    @property
    def trivial_additive(self) -> bool:
        return self.s == 0

    @property
    def trivial_multiplicative(self) -> bool:
        return self.t == 0


def gauss_sum(pair: CharacterPair) -> complex:
    """sum over z in Z_p^* of chi_s(z) psi_t(z), vectorised over z = g^e."""
    p, n = pair.p, pair.p - 1
    e = np.arange(n, dtype=np.int64)
    z = nt.subgroup_powers(pair.g, p)  # z[e] = g^e
    phase = (pair.s * z % p) / p + (pair.t * e % n) / n
    return complex(np.exp(2j * np.pi * phase).sum())


def gauss_sum_direct(pair: CharacterPair) -> complex:
    """Same sum by a scalar loop over z with discrete logs."""
    p = pair.p
    total = 0j
    for z in range(1, p):
        e = nt.discrete_log(z, pair.g, p)
        total += cmath.exp(2j * cmath.pi * (pair.s * z / p + pair.t * e / (p - 1)))
    return total


def gauss_degenerate_value(p: int, s: int, t: int) -> int | None:
    """Exact value when a character is trivial, else None.

    s = 0, t = 0: p - 1.  s = 0, t != 0: 0 (a nontrivial multiplicative
    character sums to zero).  s != 0, t = 0: -1 (the nonzero additive
    values sum to -1).
    """
    s, t = s % p, t % (p - 1)
    if s == 0:
        return p - 1 if t == 0 else 0
    if t == 0:
        return -1
    return None


def gauss_table(p: int, g: int | None = None) -> np.ndarray:
    """G[s, t] for all s in Z_p, t in Z_{p-1}, via one FFT per row."""
    g = nt.primitive_root(p) if g is None else g
    n = p - 1
    z = nt.subgroup_powers(g, p).astype(np.int64)
    s = np.arange(p, dtype=np.int64)[:, None]
    add = np.exp(2j * np.pi * ((s * z[None, :]) % p) / p)  # [s, e]
    # sum_e add[s, e] w_n^{t e} = n * ifft(add)[t]
    return np.fft.ifft(add, axis=1) * n


def incomplete_gauss_sum(t: int, a: int, p: int) -> complex:
    """sum_{z=0}^{q-1} chi_t(a^z) with q the order of a."""
    pts = nt.subgroup_powers(a, p).astype(np.int64)
    return complex(np.exp(2j * np.pi * ((t * pts) % p) / p).sum())


def incomplete_gauss_sum_direct(t: int, a: int, p: int) -> complex:
    q = nt.multiplicative_order(a, p)
    total, x = 0j, 1
    for _ in range(q):
        total += cmath.exp(2j * cmath.pi * (t * x % p) / p)
        x = x * a % p
    return total


def regime(p: int, q: int) -> str:
    if q >= p ** (2 / 3):
        return "large"      # O(p^{1/2})
    if q >= p ** 0.5:
        return "medium"     # O(p^{1/4} q^{3/8})
    if q >= p ** (1 / 3):
        return "small"      # O(p^{1/8} q^{5/8})
    return "unbounded"


def regime_bound(p: int, q: int) -> float | None:
    """Shape of the bound (no constant); None where no bound is claimed."""
    r = regime(p, q)
    if r == "large":
        return p ** 0.5
    if r == "medium":
        return p ** 0.25 * q ** 0.375
    if r == "small":
        return p ** 0.125 * q ** 0.625
    return None


def incomplete_sum_profile(p: int, q: int) -> dict:
    """Max |sum| over all t != 0 for the order-q subgroup, with the fitted constant."""
    if (p - 1) % q:
        raise ValueError(f"q={q} does not divide p-1={p - 1}")
    a = pow(nt.primitive_root(p), (p - 1) // q, p)
    pts = nt.subgroup_powers(a, p).astype(np.int64)
    ind = np.zeros(p)
    ind[pts] = 1.0
    # all t at once: sum_x ind[x] w_p^{t x} = p * ifft(ind)[t]
    vals = np.abs(np.fft.ifft(ind) * p)[1:]
    worst = float(vals.max())
    bound = regime_bound(p, q)
    return {"p": p, "q": q, "regime": regime(p, q), "max_abs": worst,
            "bound_shape": bound, "fitted_constant": None if bound is None else worst / bound}


def cosine_gap_sum(p: int, b: int, b2: int) -> float:
    """sum_{m in Z_p^*} (cos(2 pi m b/p) - cos(2 pi m b2/p))^2."""
    m = np.arange(1, p)
    return float(np.sum((np.cos(2 * np.pi * m * b / p) - np.cos(2 * np.pi * m * b2 / p)) ** 2))


def tv_cosine_identity(p: int, b: int, b2: int, tol: float = 1e-9) -> bool:
    """The cosine gap sum equals p when b, b2 != 0 and b2 != +-b.

    The cosines have zero inner product over all of Z_p and each has squared
    norm p/2; dropping m = 0 removes 1 from each norm and adds 2 to the cross
    term, leaving exactly p. For b2 = -b the sum is 0.
    """
    b, b2 = b % p, b2 % p
    if b == 0 or b2 == 0 or b2 in (b, (-b) % p):
        raise ValueError("identity needs b, b2 nonzero and b2 != +-b")
    return abs(cosine_gap_sum(p, b, b2) - p) <= tol * p


def l1_to_uniform(d: OutcomeDistribution) -> float:
    n = len(d.outcomes)
    return float(np.abs(np.asarray(d.probs) - 1.0 / n).sum())


@dataclass(frozen=True)
class ConcentrationRow:
    rank: int
    dim: int
    delta: float
    num_vectors: int
    tail: float
    bound: float
    sigma: float

    @property
    def vacuous(self) -> bool:
        return self.bound >= 1.0

    @property
    def ok(self) -> bool:
        return self.tail <= self.bound + 3 * self.sigma

    def as_dict(self) -> dict:
        return {"rank": self.rank, "dim": self.dim, "delta": self.delta,
                "num_vectors": self.num_vectors, "tail": self.tail, "bound": self.bound,
                "sigma": self.sigma, "vacuous": self.vacuous, "ok": self.ok}


def _projected_mass(rank: int, dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """|pi v|^2 for Haar-random unit v in C^dim, pi the projector on the first rank coordinates."""
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    w = np.abs(v) ** 2
    return w[:, :rank].sum(axis=1) / w.sum(axis=1)


def concentration_experiment(rank: int, dim: int, num_vectors: int, seed: int,
                             deltas=(0.25, 0.5, 1.0), chunk: int = 2048) -> list[ConcentrationRow]:
    """Tail frequency of ||pi v|^2 - r/d| > delta r/d against 4 exp(-r delta^2 / 48).

    Vectors are drawn in chunks, chunk i from its own stream [seed, i], so
    results do not depend on how the work is split. sigma is the binomial
    standard error at the bound (capped at 1).
    """
    if not 1 <= rank <= dim:
        raise ValueError("need 1 <= rank <= dim")
    masses = []
    for i, start in enumerate(range(0, num_vectors, chunk)):
        rng = np.random.default_rng([seed, i])
        masses.append(_projected_mass(rank, dim, min(chunk, num_vectors - start), rng))
    mass = np.concatenate(masses) if masses else np.zeros(0)
    mean = rank / dim
    rows = []
    for delta in deltas:
        tail = float(np.mean(np.abs(mass - mean) > delta * mean + 1e-12)) if len(mass) else 0.0
        bound = 4 * math.exp(-rank * delta ** 2 / 48)
        b = min(bound, 1.0)
        sigma = math.sqrt(b * (1 - b) / max(num_vectors, 1))
        rows.append(ConcentrationRow(rank, dim, float(delta), num_vectors, tail, bound, sigma))
    return rows
