"""Reference objects used by the test suite, the CLI fixtures and the
benchmarks: the nine-vertex abstract torus, voxel rings, and linked /
unlinked / chained ring configurations whose complements carry the
interesting cup products.
"""

from __future__ import annotations

from itertools import product

from .cubical import AbstractCubicalComplex, Point3
from .picture import Picture3D

# 3x3 toroidal grid; rows wrap both ways.  With this labeling every
# square's boundary consists of its four order-compatible edges.
_TORUS_GRID = ((0, 1, 2), (3, 5, 6), (4, 7, 8))


def abstract_torus() -> AbstractCubicalComplex:
    """The hollow torus as an abstract cubical complex: 9 vertices,
    18 edges, 9 squares."""
    edges, squares = set(), set()
    for r in range(3):
        for c in range(3):
            a = _TORUS_GRID[r][c]
            b = _TORUS_GRID[r][(c + 1) % 3]
            d = _TORUS_GRID[(r + 1) % 3][c]
            e = _TORUS_GRID[(r + 1) % 3][(c + 1) % 3]
            edges.add(tuple(sorted((a, b))))
            edges.add(tuple(sorted((a, d))))
            squares.add(tuple(sorted((a, b, d, e))))
    return AbstractCubicalComplex(list(range(9)), sorted(edges), sorted(squares))


def solid_box_voxels(nx: int, ny: int, nz: int) -> set[Point3]:
    return set(product(range(nx), range(ny), range(nz)))


def shell_3x3x3() -> set[Point3]:
    """3x3x3 block minus its center: one cavity."""
    return solid_box_voxels(3, 3, 3) - {(1, 1, 1)}


def voxel_ring() -> set[Point3]:
    """Eight voxels forming a square ring (a solid torus) in the z=0 plane."""
    return {(x, y, 0) for x in range(3) for y in range(3) if (x, y) != (1, 1)}


def _frame_xy(x0, x1, y0, y1, z) -> set[Point3]:
    return {(x, y, z)
            for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)
            if x in (x0, x1) or y in (y0, y1)}


def _frame_xz(x0, x1, z0, z1, y) -> set[Point3]:
    return {(x, y, z)
            for x in range(x0, x1 + 1) for z in range(z0, z1 + 1)
            if x in (x0, x1) or z in (z0, z1)}


def linked_rings() -> set[Point3]:
    """Two once-linked voxel rings: a 5x5 ring in the z=3 plane threaded
    by a 5x6 ring standing in the y=2 plane, with a full one-voxel gap
    everywhere."""
    a = _frame_xy(0, 4, 0, 4, 3)
    b = _frame_xz(2, 6, 0, 5, 2)
    assert not a & b
    return a | b


def unlinked_rings() -> set[Point3]:
    """The same two ring shapes, pulled apart."""
    a = _frame_xy(0, 4, 0, 4, 3)
    b = _frame_xz(10, 14, 0, 5, 2)
    return a | b


def chained_rings() -> set[Point3]:
    """Three rings in a chain: ring A links B, B links C, A and C are
    unlinked."""
    a = _frame_xy(0, 4, 0, 4, 3)
    b = _frame_xz(2, 8, 0, 5, 2)
    c = _frame_xy(6, 10, 0, 4, 2)
    assert not (a & b or b & c or a & c)
    return a | b | c


def picture_from_voxels(voxels: set[Point3]) -> Picture3D:
    """Tight-box picture containing exactly the given voxels."""
    xs = [p[0] for p in voxels]
    ys = [p[1] for p in voxels]
    zs = [p[2] for p in voxels]
    ox, oy, oz = min(xs), min(ys), min(zs)
    shifted = frozenset((x - ox, y - oy, z - oz) for x, y, z in voxels)
    dims = (max(xs) - ox + 1, max(ys) - oy + 1, max(zs) - oz + 1)
    return Picture3D(dims, shifted)
