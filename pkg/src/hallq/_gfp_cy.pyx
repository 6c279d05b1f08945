# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython kernels for GF(p) row reduction; hot path of the whole workbench."""

import numpy as np

BACKEND = "cython"


cdef long _modinv(long a, long p):
    # Fermat: a^(p-2) mod p, p prime
    cdef long result = 1
    cdef long base = a % p
    cdef long e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


cdef int _rref_core(long[:, ::1] a, long p, long[::1] piv):
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t cols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef long inv, factor, tmp
    cdef int npiv = 0
    for c in range(cols):
        if r == rows:
            break
        i = -1
        for k in range(r, rows):
            if a[k, c] != 0:
                i = k
                break
        if i < 0:
            continue
        if i != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[i, j]
                a[i, j] = tmp
        inv = _modinv(a[r, c], p)
        if inv != 1:
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % p
        for k in range(rows):
            if k == r:
                continue
            factor = a[k, c]
            if factor != 0:
                for j in range(cols):
                    a[k, j] = (a[k, j] - factor * a[r, j]) % p
                    if a[k, j] < 0:
                        a[k, j] += p
        piv[npiv] = c
        npiv += 1
        r += 1
    return npiv


def rref_inplace(long[:, ::1] a, long p):
    """Reduce `a` (entries in [0,p)) to RREF in place; return pivot columns."""
    cdef Py_ssize_t cols = a.shape[1]
    if a.shape[0] == 0 or cols == 0:
        return []
    piv_arr = np.empty(cols, dtype=np.int64)
    cdef long[::1] piv = piv_arr
    cdef int npiv = _rref_core(a, p, piv)
    return [int(piv_arr[i]) for i in range(npiv)]


def batch_rank(long[:, :, ::1] mats, long p):
    """Ranks of a stack of matrices, shape (k, rows, cols)."""
    cdef Py_ssize_t k = mats.shape[0]
    cdef Py_ssize_t rows = mats.shape[1]
    cdef Py_ssize_t cols = mats.shape[2]
    out_arr = np.empty(k, dtype=np.int64)
    cdef long[::1] out = out_arr
    if rows == 0 or cols == 0:
        out_arr[:] = 0
        return out_arr
    scratch_arr = np.empty((rows, cols), dtype=np.int64)
    cdef long[:, ::1] scratch = scratch_arr
    piv_arr = np.empty(cols, dtype=np.int64)
    cdef long[::1] piv = piv_arr
    cdef Py_ssize_t i, r, c
    for i in range(k):
        for r in range(rows):
            for c in range(cols):
                scratch[r, c] = mats[i, r, c] % p
        out[i] = _rref_core(scratch, p, piv)
    return out_arr
