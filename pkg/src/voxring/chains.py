"""Z/2 chains and graded chain complexes with explicit boundary maps.

Cells are opaque integer ids, unique within one complex and carrying a
fixed dimension.  A chain is a finite set of same-dimension cells; adding
chains is symmetric difference.  Boundary maps are stored explicitly per
cell (face reduction rewrites them, so they cannot be recomputed from
geometry).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import IntegrityError, UsageError


class Chain:
    """A mod-2 formal sum of same-dimension cells."""

    __slots__ = ("dim", "cells")

    def __init__(self, dim: int, cells: Iterable[int] = ()):
        self.dim = dim
        self.cells = frozenset(cells)

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim)

    def __add__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim:
            raise UsageError(
                f"cannot add a {self.dim}-chain and a {other.dim}-chain")
        return Chain(self.dim, self.cells ^ other.cells)

    def dot(self, other: "Chain") -> int:
        """Z/2 scalar product: parity of the common support."""
        if self.dim != other.dim:
            raise UsageError(
                f"scalar product needs equal dimensions ({self.dim} vs {other.dim})")
        return len(self.cells & other.cells) & 1

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)

    def __contains__(self, cell: int) -> bool:
        return cell in self.cells

    def __eq__(self, other) -> bool:
        return (isinstance(other, Chain) and self.dim == other.dim
                and self.cells == other.cells)

    def __hash__(self) -> int:
        return hash((self.dim, self.cells))

    def __repr__(self) -> str:
        return f"Chain(dim={self.dim}, cells={sorted(self.cells)})"


def chain_add(a: Chain, b: Chain) -> Chain:
    return a + b


def scalar_product(a: Chain, b: Chain) -> int:
    return a.dot(b)


class GradedChainComplex:
    """Cells graded by dimension plus an explicit boundary map.

    Immutable after construction; transformations (subcomplexes, face
    reduction, subdivision) build new instances.
    """

    def __init__(self, dims: Mapping[int, int],
                 boundary: Mapping[int, Iterable[int]]):
        self._dim = dict(dims)
        self._boundary: dict[int, frozenset[int]] = {}
        by_dim: dict[int, list[int]] = {}
        for cell, q in self._dim.items():
            by_dim.setdefault(q, []).append(cell)
        self._by_dim = {q: tuple(sorted(cells)) for q, cells in by_dim.items()}
        self._pos = {cell: i
                     for cells in self._by_dim.values()
                     for i, cell in enumerate(cells)}
        for cell, faces in boundary.items():
            if cell not in self._dim:
                raise UsageError(f"boundary given for unknown cell {cell}")
            q = self._dim[cell]
            faces = frozenset(faces)
            for face in faces:
                if self._dim.get(face) != q - 1:
                    raise UsageError(
                        f"cell {cell} (dim {q}) has bad facet {face}")
            self._boundary[cell] = faces
        for cell in self._dim:
            self._boundary.setdefault(cell, frozenset())

    # ------------------------------------------------------------ access

    @property
    def max_dim(self) -> int:
        return max(self._by_dim, default=-1)

    def n_cells(self, q: int | None = None) -> int:
        if q is None:
            return len(self._dim)
        return len(self._by_dim.get(q, ()))

    def cells(self, q: int) -> tuple[int, ...]:
        """Cells of dimension q, ascending by id."""
        return self._by_dim.get(q, ())

    def all_cells(self) -> list[int]:
        """All cells sorted by (dimension, id)."""
        out: list[int] = []
        for q in sorted(self._by_dim):
            out.extend(self._by_dim[q])
        return out

    def __contains__(self, cell: int) -> bool:
        return cell in self._dim

    def dim(self, cell: int) -> int:
        try:
            return self._dim[cell]
        except KeyError:
            raise UsageError(f"unknown cell {cell}") from None

    def position(self, cell: int) -> int:
        """Index of the cell within its dimension's sorted cell list."""
        return self._pos[cell]

    def chain(self, cells: Iterable[int], dim: int | None = None) -> Chain:
        cells = list(cells)
        if not cells:
            if dim is None:
                raise UsageError("empty chain needs an explicit dimension")
            return Chain.zero(dim)
        dims = {self.dim(c) for c in cells}
        if len(dims) > 1:
            raise UsageError(f"mixed-dimension chain: {sorted(dims)}")
        q = dims.pop()
        if dim is not None and dim != q:
            raise UsageError(f"chain has dimension {q}, expected {dim}")
        return Chain(q, cells)

    def boundary(self, cell: int) -> Chain:
        q = self.dim(cell)
        return Chain(q - 1, self._boundary[cell])

    def boundary_of(self, chain: Chain) -> Chain:
        """Linear extension of the boundary map to chains."""
        acc: set[int] = set()
        for cell in chain.cells:
            if cell not in self._dim:
                raise UsageError(f"unknown cell {cell}")
            acc ^= self._boundary[cell]
        return Chain(chain.dim - 1, acc)

    def boundary_sets(self) -> dict[int, frozenset[int]]:
        """Copy of the raw boundary map (for reduction algorithms)."""
        return dict(self._boundary)

    # ------------------------------------------------------- derivations

    def check_boundary_squared(self) -> int | None:
        """Return the first cell (by id) with dd != 0, or None."""
        for cell in sorted(self._dim):
            if self._dim[cell] < 2:
                continue
            acc: set[int] = set()
            for face in self._boundary[cell]:
                acc ^= self._boundary[face]
            if acc:
                return cell
        return None

    def require_boundary_squared(self) -> None:
        bad = self.check_boundary_squared()
        if bad is not None:
            raise IntegrityError(f"dd != 0 at cell {bad}")

    def subcomplex(self, cells: Iterable[int]) -> "GradedChainComplex":
        """Closed subcomplex on the given cells, keeping their ids."""
        keep = set(cells)
        for cell in keep:
            if cell not in self._dim:
                raise UsageError(f"unknown cell {cell}")
        for cell in keep:
            if not self._boundary[cell] <= keep:
                raise UsageError(f"subcomplex not face-closed at cell {cell}")
        return GradedChainComplex(
            {c: self._dim[c] for c in keep},
            {c: self._boundary[c] for c in keep})


def boundary_chain(cx: GradedChainComplex, c: Chain) -> Chain:
    return cx.boundary_of(c)
