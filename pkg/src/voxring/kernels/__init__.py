"""Bit-packed Z/2 row kernels with a compiled fast path.

A "row" is a 1-D numpy uint64 array holding a Z/2 vector: bit j lives in
word j // 64 at position j % 64.  A "matrix" is a C-contiguous 2-D uint64
array of such rows.  These are the hot primitives behind the incremental
algebraic-topological-model updates and the axiom verifier.

The compiled backend (``_cyops``, built from Cython at install time) is
selected automatically when present; set ``VOXRING_KERNELS=python`` to
force the numpy fallback, or call :func:`set_backend` at runtime.
"""

from __future__ import annotations

import os

import numpy as np

from . import py_backend

try:
    from . import _cyops as cy_backend
except ImportError:
    cy_backend = None

_BACKENDS = {"python": py_backend}
if cy_backend is not None:
    _BACKENDS["cython"] = cy_backend

WORD = 64


def _pick_default():
    forced = os.environ.get("VOXRING_KERNELS", "").strip().lower()
    if forced:
        if forced not in _BACKENDS:
            raise RuntimeError(
                f"VOXRING_KERNELS={forced!r} not available "
                f"(have: {sorted(_BACKENDS)})")
        return forced
    return "cython" if "cython" in _BACKENDS else "python"


_active = _pick_default()


def backend_name() -> str:
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    """Switch kernel backend ('python' or 'cython'). Used by benchmarks."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r} (have: {sorted(_BACKENDS)})")
    _active = name


# ---------------------------------------------------------------- storage

def nwords(nbits: int) -> int:
    return max(1, (nbits + WORD - 1) // WORD)


def zero_row(nbits: int) -> np.ndarray:
    return np.zeros(nwords(nbits), dtype=np.uint64)


def zero_matrix(nrows: int, nbits: int) -> np.ndarray:
    return np.zeros((nrows, nwords(nbits)), dtype=np.uint64)


def row_from_bits(bits, nbits: int) -> np.ndarray:
    row = zero_row(nbits)
    for j in bits:
        row[j // WORD] |= np.uint64(1) << np.uint64(j % WORD)
    return row


def bits_of_row(row: np.ndarray) -> list[int]:
    """Set bit positions, ascending."""
    as_bytes = row.view(np.uint8)
    unpacked = np.unpackbits(as_bytes, bitorder="little")
    return np.nonzero(unpacked)[0].tolist()


# ------------------------------------------------------------- dispatch

def get_bit(row: np.ndarray, j: int) -> int:
    return int((row[j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))


def set_bit(row: np.ndarray, j: int) -> None:
    row[j // WORD] |= np.uint64(1) << np.uint64(j % WORD)


def flip_bit(row: np.ndarray, j: int) -> None:
    row[j // WORD] ^= np.uint64(1) << np.uint64(j % WORD)


def xor_into(dst: np.ndarray, src: np.ndarray) -> None:
    _BACKENDS[_active].xor_into(dst, src)


def row_is_zero(row: np.ndarray) -> bool:
    return bool(_BACKENDS[_active].row_is_zero(row))


def parity_and(a: np.ndarray, b: np.ndarray) -> int:
    """Parity of the popcount of a & b (the Z/2 scalar product)."""
    return int(_BACKENDS[_active].parity_and(a, b))


def lowest_bit(row: np.ndarray) -> int:
    """Index of the lowest set bit, or -1 when the row is zero."""
    return int(_BACKENDS[_active].lowest_bit(row))


def gather_xor(matrix: np.ndarray, select: np.ndarray, out: np.ndarray) -> None:
    """XOR into ``out`` every matrix row whose index is a set bit of ``select``.

    Bits of ``select`` at or beyond ``matrix.shape[0]`` are ignored, which
    lets callers reuse wider selectors.
    """
    _BACKENDS[_active].gather_xor(matrix, select, out)


def sweep_pair(fmat: np.ndarray, pmat: np.ndarray, bit: int,
               fupd: np.ndarray, pupd: np.ndarray) -> None:
    """For every row r with ``bit`` set in fmat[r]:
    fmat[r] ^= fupd and pmat[r] ^= pupd.

    The bit test happens against the pre-update row, i.e. all right-hand
    sides are read before any assignment.
    """
    _BACKENDS[_active].sweep_pair(fmat, pmat, bit, fupd, pupd)
