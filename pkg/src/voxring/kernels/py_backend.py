"""Numpy implementations of the row kernels (fallback backend)."""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def xor_into(dst, src):
    np.bitwise_xor(dst, src, out=dst)


def row_is_zero(row):
    return not row.any()


def parity_and(a, b):
    return int(np.bitwise_count(a & b).sum()) & 1


def lowest_bit(row):
    nz = np.nonzero(row)[0]
    if nz.size == 0:
        return -1
    w = int(nz[0])
    word = int(row[w])
    return w * 64 + (word & -word).bit_length() - 1


def gather_xor(matrix, select, out):
    unpacked = np.unpackbits(select.view(np.uint8), bitorder="little")
    rows = np.nonzero(unpacked)[0]
    rows = rows[rows < matrix.shape[0]]
    if rows.size:
        np.bitwise_xor(out, np.bitwise_xor.reduce(matrix[rows], axis=0), out=out)


def sweep_pair(fmat, pmat, bit, fupd, pupd):
    w, b = divmod(bit, 64)
    hit = np.nonzero((fmat[:, w] >> np.uint64(b)) & _ONE)[0]
    if hit.size:
        fmat[hit] ^= fupd
        pmat[hit] ^= pupd
