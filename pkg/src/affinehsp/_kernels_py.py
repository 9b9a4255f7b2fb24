"""Pure-Python (numpy) versions of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and the same output, bit for bit on integer results.
"""

from __future__ import annotations

import numpy as np


def power_table(base: int, n: int, p: int) -> np.ndarray:
    """Return ``[base**0, ..., base**(n-1)] mod p`` as int64.

    Uses block doubling so the work is vectorised: the second half of a
    prefix is the first half times ``base**len``.
    """
    out = np.empty(max(n, 0), dtype=np.int64)
    if n <= 0:
        return out
    out[0] = 1 % p
    filled = 1
    while filled < n:
        step = min(filled, n - filled)
        mult = pow(base, filled, p)
        out[filled:filled + step] = (out[:step] * mult) % p
        filled += step
    return out


def dlog_table(base: int, p: int) -> np.ndarray:
    """Table ``t`` of length p with ``base**t[x] == x`` (mod p), -1 off the subgroup."""
    powers = []
    x = 1
    while True:
        powers.append(x)
        x = x * base % p
        if x == 1:
            break
    powers = np.asarray(powers, dtype=np.int64)
    table = np.full(p, -1, dtype=np.int64)
    table[powers] = np.arange(len(powers), dtype=np.int64)
    return table


def _log_tables(p: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.arange(p, dtype=np.float64)
    c2 = np.cos(np.pi * x / p) ** 2
    s2 = 1.0 - c2
    s2[0] = 0.0
    with np.errstate(divide="ignore"):
        return np.log(c2), np.log(s2)


def loglik_scan(ms: np.ndarray, bits: np.ndarray, p: int) -> np.ndarray:
    """Log-likelihood of every shift b in Z_p for Hadamard-bit samples.

    Sample i contributes ``log cos^2(pi m_i b / p)`` if ``bits[i] == 0``
    and ``log sin^2(pi m_i b / p)`` otherwise.
    """
    ms = np.asarray(ms, dtype=np.int64) % p
    bits = np.asarray(bits, dtype=np.int64)
    logc, logs = _log_tables(p)
    out = np.zeros(p, dtype=np.float64)
    bs = np.arange(p, dtype=np.int64)
    chunk = max(1, 2_000_000 // max(p, 1))
    for start in range(0, len(ms), chunk):
        m = ms[start:start + chunk]
        idx = (m[:, None] * bs[None, :]) % p
        bit = bits[start:start + chunk, None]
        out += np.where(bit == 0, logc[idx], logs[idx]).sum(axis=0)
    return out


def affine_pullback(symbols: np.ndarray, a_inv: np.ndarray, shifts: np.ndarray,
                    xs: np.ndarray, p: int) -> np.ndarray:
    """``out[i, j] = symbols[a_inv[i] * (xs[j] - shifts[i]) mod p]``.

    This evaluates ``(alpha_i . f)(x_j) = f(alpha_i^{-1}(x_j))`` for a batch
    of affine maps ``alpha_i = (a_i, shifts_i)`` given their inverse slopes.
    """
    symbols = np.asarray(symbols, dtype=np.int64)
    a_inv = np.asarray(a_inv, dtype=np.int64)
    shifts = np.asarray(shifts, dtype=np.int64)
    xs = np.asarray(xs, dtype=np.int64)
    diff = (xs[None, :] - shifts[:, None]) % p
    return symbols[(a_inv[:, None] * diff) % p]
