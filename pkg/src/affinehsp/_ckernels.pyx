# cython: language_level=3
"""Compiled versions of the hot kernels (see ``_kernels_py`` for semantics)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, log, M_PI, INFINITY

ctypedef cnp.int64_t i64

cnp.import_array()


def power_table(long long base, long long n, long long p):
    cdef cnp.ndarray[i64, ndim=1] out = np.empty(max(n, 0), dtype=np.int64)
    cdef long long i, x
    if n <= 0:
        return out
    base = ((base % p) + p) % p
    x = 1 % p
    for i in range(n):
        out[i] = x
        x = (x * base) % p
    return out


def dlog_table(long long base, long long p):
    cdef cnp.ndarray[i64, ndim=1] table = np.full(p, -1, dtype=np.int64)
    cdef long long x = 1, e = 0
    base = ((base % p) + p) % p
    while True:
        table[x] = e
        x = (x * base) % p
        e += 1
        if x == 1:
            break
    return table


def loglik_scan(ms, bits, long long p):
    cdef cnp.ndarray[i64, ndim=1] m = np.asarray(ms, dtype=np.int64) % p
    cdef cnp.ndarray[i64, ndim=1] bt = np.asarray(bits, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] logc = np.empty(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] logs = np.empty(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(p, dtype=np.float64)
    cdef long long i, b, x, n = m.shape[0]
    cdef double c2
    for x in range(p):
        c2 = cos(M_PI * x / p)
        c2 = c2 * c2
        logc[x] = log(c2) if c2 > 0.0 else -INFINITY
        if x == 0:
            logs[x] = -INFINITY
        else:
            logs[x] = log(1.0 - c2) if c2 < 1.0 else -INFINITY
    for i in range(n):
        x = 0
        if bt[i] == 0:
            for b in range(p):
                out[b] += logc[x]
                x += m[i]
                if x >= p:
                    x -= p
        else:
            for b in range(p):
                out[b] += logs[x]
                x += m[i]
                if x >= p:
                    x -= p
    return out


def affine_pullback(symbols, a_inv, shifts, xs, long long p):
    cdef cnp.ndarray[i64, ndim=1] sym = np.asarray(symbols, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ai = np.asarray(a_inv, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] sh = np.asarray(shifts, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] x = np.asarray(xs, dtype=np.int64)
    cdef long long n = ai.shape[0], mlen = x.shape[0], i, j, d
    cdef cnp.ndarray[i64, ndim=2] out = np.empty((n, mlen), dtype=np.int64)
    for i in range(n):
        for j in range(mlen):
            d = (x[j] - sh[i]) % p
            if d < 0:
                d += p
            d = (ai[i] * d) % p
            if d < 0:
                d += p
            out[i, j] = sym[d]
    return out
