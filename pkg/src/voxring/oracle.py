"""Independent homology oracle: Betti numbers from Z/2 matrix ranks.

This is deliberately kept separate from the incremental model-building
algorithms so the two can cross-check each other.  b_q is
dim ker(d_q) - rank(d_{q+1}), with ranks obtained by Gaussian elimination
over Z/2.  Rows are Python integers used as bit vectors; below
``DENSE_LIMIT`` cells per dimension a straight row-echelon pass is used,
above it a sparse column reduction keyed by pivot position.
"""

from __future__ import annotations

from .chains import GradedChainComplex

DENSE_LIMIT = 4096


def z2_rank_dense(rows: list[int]) -> int:
    """Row-echelon rank of bit-packed rows."""
    pivots: list[int] = []
    rank = 0
    for row in rows:
        for p in pivots:
            if row & (p & -p):
                row ^= p
        if row:
            pivots.append(row)
            pivots.sort(key=lambda r: r & -r)
            rank += 1
    return rank


def z2_rank_sparse(columns: list[int]) -> int:
    """Pivot-keyed column reduction; efficient when columns stay sparse."""
    pivot: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            low = col.bit_length() - 1
            other = pivot.get(low)
            if other is None:
                pivot[low] = col
                rank += 1
                break
            col ^= other
    return rank


def _boundary_rows(cx: GradedChainComplex, q: int) -> list[int]:
    """One bit row per q-cell over the positions of the (q-1)-cells."""
    rows = []
    for cell in cx.cells(q):
        bits = 0
        for face in cx.boundary(cell).cells:
            bits |= 1 << cx.position(face)
        rows.append(bits)
    return rows


def boundary_rank(cx: GradedChainComplex, q: int) -> int:
    rows = _boundary_rows(cx, q)
    if max(cx.n_cells(q), cx.n_cells(q - 1)) <= DENSE_LIMIT:
        return z2_rank_dense(rows)
    return z2_rank_sparse(rows)


def betti_numbers(cx: GradedChainComplex, top: int = 2) -> tuple[int, ...]:
    """(b_0, ..., b_top) over Z/2, after checking dd = 0."""
    cx.require_boundary_squared()
    ranks = {q: boundary_rank(cx, q) for q in range(cx.max_dim + 2)}
    out = []
    for q in range(top + 1):
        out.append(cx.n_cells(q) - ranks.get(q, 0) - ranks.get(q + 1, 0))
    return tuple(out)


def z2_rank_of_table(rows: list[list[int]]) -> int:
    """Rank of a small dense 0/1 table (used for cup-product matrices)."""
    packed = [sum(bit << j for j, bit in enumerate(r)) for r in rows]
    return z2_rank_dense(packed)
