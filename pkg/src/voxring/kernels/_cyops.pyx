# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row kernels. Same contracts as py_backend."""

import numpy as np

cdef extern from *:
    """
    #define vx_popcount(x) __builtin_popcountll(x)
    #define vx_ctz(x) __builtin_ctzll(x)
    """
    int vx_popcount(unsigned long long x) nogil
    int vx_ctz(unsigned long long x) nogil


def xor_into(dst, src):
    cdef unsigned long long[::1] d = dst
    cdef unsigned long long[::1] s = src
    cdef Py_ssize_t i, n = d.shape[0]
    with nogil:
        for i in range(n):
            d[i] ^= s[i]


def row_is_zero(row):
    cdef unsigned long long[::1] r = row
    cdef Py_ssize_t i, n = r.shape[0]
    for i in range(n):
        if r[i]:
            return False
    return True


def parity_and(a, b):
    cdef unsigned long long[::1] x = a
    cdef unsigned long long[::1] y = b
    cdef Py_ssize_t i, n = x.shape[0]
    cdef int acc = 0
    with nogil:
        for i in range(n):
            acc ^= vx_popcount(x[i] & y[i]) & 1
    return acc


def lowest_bit(row):
    cdef unsigned long long[::1] r = row
    cdef Py_ssize_t i, n = r.shape[0]
    for i in range(n):
        if r[i]:
            return i * 64 + vx_ctz(r[i])
    return -1


def gather_xor(matrix, select, out):
    cdef unsigned long long[:, ::1] m = matrix
    cdef unsigned long long[::1] sel = select
    cdef unsigned long long[::1] acc = out
    cdef Py_ssize_t nrows = m.shape[0], nw = m.shape[1]
    cdef Py_ssize_t w, j, row
    cdef unsigned long long bits
    with nogil:
        for w in range(sel.shape[0]):
            bits = sel[w]
            while bits:
                row = w * 64 + vx_ctz(bits)
                bits &= bits - 1
                if row >= nrows:
                    break
                for j in range(nw):
                    acc[j] ^= m[row, j]


def sweep_pair(fmat, pmat, bit, fupd, pupd):
    cdef unsigned long long[:, ::1] f = fmat
    cdef unsigned long long[:, ::1] p = pmat
    cdef unsigned long long[::1] fu = fupd
    cdef unsigned long long[::1] pu = pupd
    cdef Py_ssize_t w = bit // 64
    cdef int b = bit % 64
    cdef unsigned long long mask = (<unsigned long long>1) << b
    cdef Py_ssize_t r, j, nrows = f.shape[0]
    cdef Py_ssize_t fw = f.shape[1], pw = p.shape[1]
    with nogil:
        for r in range(nrows):
            if f[r, w] & mask:
                for j in range(fw):
                    f[r, j] ^= fu[j]
                for j in range(pw):
                    p[r, j] ^= pu[j]
