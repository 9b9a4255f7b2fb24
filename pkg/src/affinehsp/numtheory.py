"""Modular arithmetic helpers: primality, orders, discrete logarithms."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime, primitive_root as _sympy_primitive_root

from . import kernels

DLOG_TABLE_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    return bool(isprime(int(n)))


@lru_cache(maxsize=256)
def factorize(n: int) -> dict[int, int]:
    return {int(k): int(v) for k, v in factorint(int(n)).items()}


def divisors(n: int) -> list[int]:
    divs = [1]
    for prime, exp in factorize(n).items():
        divs = [d * prime ** e for d in divs for e in range(exp + 1)]
    return sorted(divs)


@lru_cache(maxsize=256)
def primitive_root(p: int) -> int:
    """Smallest generator of Z_p^*."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return int(_sympy_primitive_root(p))


def multiplicative_order(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ValueError("0 has no multiplicative order")
    order = p - 1
    for prime in factorize(p - 1):
        while order % prime == 0 and pow(x, order // prime, p) == 1:
            order //= prime
    return order


def is_generator(g: int, p: int) -> bool:
    return g % p != 0 and multiplicative_order(g, p) == p - 1


def mod_inverse(x: int, p: int) -> int:
    return pow(int(x), -1, p)


@lru_cache(maxsize=64)
def _dlog_lookup(base: int, p: int) -> np.ndarray:
    table = kernels.dlog_table(base, p)
    table.flags.writeable = False
    return table


def _bsgs(x: int, base: int, p: int, order: int) -> int | None:
    m = math.isqrt(order) + 1
    baby = {}
    e = 1
    for j in range(m):
        baby.setdefault(e, j)
        e = e * base % p
    giant = pow(base, -m, p)
    y = x
    for i in range(m):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % order
        y = y * giant % p
    return None


def discrete_log(x: int, base: int, p: int) -> int:
    """Return t in [0, order(base)) with ``base**t == x (mod p)``.

    Table lookup for p below 2**20, baby-step giant-step above.
    """
    x %= p
    base %= p
    if x == 0 or base == 0:
        raise ValueError("discrete log of or to base 0")
    if p < DLOG_TABLE_LIMIT:
        t = int(_dlog_lookup(base, p)[x])
        if t < 0:
            raise ValueError(f"{x} is not in the subgroup generated by {base} mod {p}")
        return t
    order = multiplicative_order(base, p)
    t = _bsgs(x, base, p, order)
    if t is None:
        raise ValueError(f"{x} is not in the subgroup generated by {base} mod {p}")
    return t


@lru_cache(maxsize=128)
def subgroup_powers(base: int, p: int) -> np.ndarray:
    """All powers of ``base`` mod p in exponent order (cached, read-only)."""
    table = kernels.power_table(base, multiplicative_order(base, p), p)
    table.flags.writeable = False
    return table


def mult_coset_labels(base: int, p: int) -> list[int]:
    """Minimal representative of every coset of <base> in Z_p^*, ascending."""
    n = multiplicative_order(base, p)
    seen = np.zeros(p, dtype=bool)
    labels = []
    powers = subgroup_powers(base, p)
    for k in range(1, p):
        if not seen[k]:
            labels.append(k)
            seen[(k * powers) % p] = True
            if len(labels) * n == p - 1:
                break
    return labels


def mult_coset_min(x: int, base: int, p: int) -> int:
    """Minimal element of the coset ``x * <base>`` in Z_p^*."""
    return int(((x % p) * subgroup_powers(base, p) % p).min())
