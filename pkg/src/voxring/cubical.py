"""Elementary cubes, cubical complexes from voxel sets, and the ordered
square property behind the direct cup-product formula.

A cell is an elementary cube: a base lattice point plus a bitmask of the
axes along which the cube extends (dimension = popcount of the mask).
Complexes assign integer cell ids sorted by (dimension, base, extent),
which makes every "take the smallest cell" step downstream reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .chains import GradedChainComplex
from .errors import UsageError

Point3 = tuple[int, int, int]

_AXIS_OFFSET = {1: (1, 0, 0), 2: (0, 1, 0), 4: (0, 0, 1)}


def _shift(p: Point3, mask: int) -> Point3:
    x, y, z = p
    return (x + (mask & 1), y + ((mask >> 1) & 1), z + ((mask >> 2) & 1))


@dataclass(frozen=True, order=True)
class ElementaryCube:
    """A cell of a cubical complex: minimal vertex + extended-axis mask."""

    base: Point3
    extent: int  # 3-bit mask; bit 0 = x, bit 1 = y, bit 2 = z

    def __post_init__(self):
        if not 0 <= self.extent <= 7:
            raise UsageError(f"extent mask out of range: {self.extent}")

    @property
    def dim(self) -> int:
        return bin(self.extent).count("1")

    def vertices(self) -> list[Point3]:
        """The 2^dim vertices in lexicographic order."""
        subsets = [m for m in range(8) if m & self.extent == m]
        return sorted(_shift(self.base, m) for m in subsets)

    def max_vertex(self) -> Point3:
        return _shift(self.base, self.extent)

    def facets(self) -> list["ElementaryCube"]:
        """The 2*dim faces one dimension down (lower and upper per axis)."""
        out = []
        for axis in (1, 2, 4):
            if self.extent & axis:
                rest = self.extent & ~axis
                out.append(ElementaryCube(self.base, rest))
                out.append(ElementaryCube(_shift(self.base, axis), rest))
        return out

    def faces(self) -> list["ElementaryCube"]:
        """All faces of all dimensions, including the cube itself."""
        out = []
        for sub in range(8):
            if sub & self.extent != sub:
                continue
            rest = self.extent & ~sub
            for lift in range(8):
                if lift & rest != lift:
                    continue
                out.append(ElementaryCube(_shift(self.base, lift), sub))
        return out

    def __repr__(self) -> str:
        return f"Cube({self.base}, extent={self.extent:03b})"


def cube_vertices(c: ElementaryCube) -> list[Point3]:
    return c.vertices()


def cube_facets(c: ElementaryCube) -> list[ElementaryCube]:
    return c.facets()


def voxel_cube(p: Point3) -> ElementaryCube:
    """The voxel at lattice point p: the unit cube with minimal vertex p."""
    return ElementaryCube(p, 7)


class CubicalComplex(GradedChainComplex):
    """A face-closed complex of elementary cubes.

    Vertices are ordered lexicographically by coordinates, so every square
    automatically has the four order-compatible edges in its boundary.
    """

    def __init__(self, cubes: Iterable[ElementaryCube],
                 voxels: Iterable[Point3] = ()):
        cube_set = set(cubes)
        ordered = sorted(cube_set, key=lambda c: (c.dim, c.base, c.extent))
        self._cube_of = dict(enumerate(ordered))
        self._id_of = {cube: i for i, cube in self._cube_of.items()}
        dims = {i: cube.dim for i, cube in self._cube_of.items()}
        boundary = {}
        for i, cube in self._cube_of.items():
            faces = []
            for f in cube.facets():
                j = self._id_of.get(f)
                if j is None:
                    raise UsageError(f"complex not face-closed: missing {f}")
                faces.append(j)
            boundary[i] = faces
        super().__init__(dims, boundary)
        self.voxels = frozenset(voxels)

    @classmethod
    def from_voxels(cls, points: Iterable[Point3]) -> "CubicalComplex":
        points = set(points)
        if not points:
            raise UsageError("empty voxel set")
        cubes: set[ElementaryCube] = set()
        for p in points:
            cubes.update(voxel_cube(p).faces())
        return cls(cubes, voxels=points)

    # ----------------------------------------------------------- lookups

    def cube(self, cell: int) -> ElementaryCube:
        return self._cube_of[cell]

    def cell_of(self, cube: ElementaryCube) -> int:
        try:
            return self._id_of[cube]
        except KeyError:
            raise UsageError(f"cell not in complex: {cube}") from None

    def has_cube(self, cube: ElementaryCube) -> bool:
        return cube in self._id_of

    def subcomplex_of_cubes(self, cells: Iterable[int]) -> "CubicalComplex":
        """Closed subcomplex keeping this complex's cell ids."""
        keep = set(cells)
        sub = CubicalComplex.__new__(CubicalComplex)
        sub._cube_of = {i: self._cube_of[i] for i in keep}
        sub._id_of = {cube: i for i, cube in sub._cube_of.items()}
        try:
            boundary = {i: [sub._id_of[f] for f in sub._cube_of[i].facets()]
                        for i in keep}
        except KeyError as missing:
            raise UsageError(f"subcomplex not face-closed: missing {missing}")
        GradedChainComplex.__init__(
            sub, {i: sub._cube_of[i].dim for i in keep}, boundary)
        sub.voxels = self.voxels
        return sub

    # -------------------------------------------- ordered-square protocol

    def two_cell_vertices(self, cell: int):
        """The square's vertices in the complex's vertex order."""
        return self.cube(cell).vertices()

    def edge_cell_between(self, u: Point3, v: Point3) -> int | None:
        if u > v:
            u, v = v, u
        delta = (v[0] - u[0], v[1] - u[1], v[2] - u[2])
        for axis, off in _AXIS_OFFSET.items():
            if delta == off:
                edge = ElementaryCube(u, axis)
                return self._id_of.get(edge)
        return None


def complex_from_voxels(points: Iterable[Point3]) -> CubicalComplex:
    return CubicalComplex.from_voxels(points)


_SIX_NEIGHBORS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0),
                  (0, -1, 0), (0, 0, 1), (0, 0, -1))


def boundary_squares(points: set[Point3]) -> set[ElementaryCube]:
    """Squares shared by a voxel in the set and a 6-neighbor outside it."""
    squares: set[ElementaryCube] = set()
    for p in points:
        x, y, z = p
        for dx, dy, dz in _SIX_NEIGHBORS:
            if (x + dx, y + dy, z + dz) in points:
                continue
            if dx == 1:
                squares.add(ElementaryCube((x + 1, y, z), 6))
            elif dx == -1:
                squares.add(ElementaryCube((x, y, z), 6))
            elif dy == 1:
                squares.add(ElementaryCube((x, y + 1, z), 5))
            elif dy == -1:
                squares.add(ElementaryCube((x, y, z), 5))
            elif dz == 1:
                squares.add(ElementaryCube((x, y, z + 1), 3))
            else:
                squares.add(ElementaryCube((x, y, z), 3))
    return squares


def boundary_subcomplex(Q: CubicalComplex) -> CubicalComplex:
    """The 2-subcomplex of exposed squares and their faces.

    Shares Q's cell ids, so its chains are literally Q-chains.
    """
    if not Q.voxels:
        raise UsageError("complex carries no voxel set; build it with "
                         "complex_from_voxels")
    cells: set[int] = set()
    for sq in boundary_squares(set(Q.voxels)):
        for face in sq.faces():
            cells.add(Q.cell_of(face))
    return Q.subcomplex_of_cubes(cells)


class AbstractCubicalComplex(GradedChainComplex):
    """A cubical 2-/3-complex given combinatorially: ordered vertices,
    edges as vertex pairs, squares as increasing 4-tuples.

    A square (vi, vj, vk, vl) gets exactly the boundary edges (vi,vj),
    (vi,vk), (vj,vl), (vk,vl), so the ordered-square property holds by
    construction; pass ``square_boundaries`` to override a square's edge
    list (only useful for building deliberately broken complexes in
    tests).  Squares with identified vertices are representable as long
    as all four corners and the four boundary edges are distinct.
    """

    def __init__(self, vertices: Sequence, edges: Iterable[tuple],
                 squares: Iterable[tuple] = (),
                 cubes: Mapping[tuple, Iterable[tuple]] | None = None,
                 square_boundaries: Mapping[tuple, Iterable[tuple]] | None = None):
        self.vertex_order = {v: i for i, v in enumerate(vertices)}
        if len(self.vertex_order) != len(vertices):
            raise UsageError("duplicate vertex labels")

        def rank(v):
            try:
                return self.vertex_order[v]
            except KeyError:
                raise UsageError(f"unknown vertex {v!r}") from None

        def norm(cell):
            return tuple(sorted(cell, key=rank))

        verts = [(v,) for v in vertices]
        edge_keys = sorted({norm(e) for e in edges},
                           key=lambda e: tuple(rank(v) for v in e))
        square_keys = sorted({norm(s) for s in squares},
                             key=lambda s: tuple(rank(v) for v in s))
        cube_items = {norm(c): [norm(f) for f in fs]
                      for c, fs in (cubes or {}).items()}
        for e in edge_keys:
            if len(set(e)) != 2:
                raise UsageError(f"degenerate edge {e}")
        for s in square_keys:
            if len(set(s)) != 4:
                raise UsageError(f"degenerate square {s}")

        keys: list[tuple] = (verts + edge_keys + square_keys
                             + sorted(cube_items,
                                      key=lambda c: tuple(rank(v) for v in c)))
        self._key_of = dict(enumerate(keys))
        self._id_of = {k: i for i, k in self._key_of.items()}
        if len(self._id_of) != len(keys):
            raise UsageError("duplicate cells")

        overrides = {norm(s): [norm(e) for e in es]
                     for s, es in (square_boundaries or {}).items()}
        dims = {}
        boundary = {}
        for i, key in self._key_of.items():
            if len(key) == 1:
                dims[i] = 0
                boundary[i] = []
            elif len(key) == 2:
                dims[i] = 1
                boundary[i] = [self._id_of[(v,)] for v in key]
            elif len(key) == 4 and key in overrides:
                dims[i] = 2
                boundary[i] = [self._edge_id(e) for e in overrides[key]]
            elif len(key) == 4:
                vi, vj, vk, vl = key
                dims[i] = 2
                boundary[i] = [self._edge_id((vi, vj)), self._edge_id((vi, vk)),
                               self._edge_id((vj, vl)), self._edge_id((vk, vl))]
            else:
                dims[i] = 3
                boundary[i] = [self._id_of[f] for f in cube_items[key]]
        super().__init__(dims, boundary)

    def _edge_id(self, pair: tuple) -> int:
        key = tuple(sorted(pair, key=self.vertex_order.__getitem__))
        if key not in self._id_of:
            raise UsageError(f"square references missing edge {pair}")
        return self._id_of[key]

    def cell_key(self, cell: int) -> tuple:
        return self._key_of[cell]

    def cell_of(self, key: tuple) -> int:
        key = tuple(sorted(key, key=self.vertex_order.__getitem__))
        try:
            return self._id_of[key]
        except KeyError:
            raise UsageError(f"cell not in complex: {key}") from None

    # -------------------------------------------- ordered-square protocol

    def two_cell_vertices(self, cell: int):
        return list(self._key_of[cell])

    def edge_cell_between(self, u, v) -> int | None:
        key = tuple(sorted((u, v), key=self.vertex_order.__getitem__))
        return self._id_of.get(key)


def check_square_order(cx) -> bool:
    """True iff every square's boundary is exactly the four edges induced
    by the complex's vertex order: (vi,vj), (vi,vk), (vj,vl), (vk,vl) for
    vertices vi < vj < vk < vl."""
    for cell in cx.cells(2):
        vs = cx.two_cell_vertices(cell)
        if len(vs) != 4:
            return False
        vi, vj, vk, vl = vs
        expected = set()
        for u, v in ((vi, vj), (vi, vk), (vj, vl), (vk, vl)):
            e = cx.edge_cell_between(u, v)
            if e is None:
                return False
            expected.add(e)
        if set(cx.boundary(cell).cells) != expected:
            return False
    return True


def solid_box(nx: int, ny: int, nz: int) -> set[Point3]:
    return set(product(range(nx), range(ny), range(nz)))
