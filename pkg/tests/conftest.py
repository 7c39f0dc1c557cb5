import random
from itertools import product

import pytest

from voxring.cubical import (AbstractCubicalComplex, CubicalComplex,
                             boundary_subcomplex, complex_from_voxels)


def random_voxels(rng: random.Random, max_side=4, density=None):
    dims = [rng.randint(1, max_side) for _ in range(3)]
    density = density if density is not None else rng.choice([0.3, 0.5, 0.7])
    vox = {p for p in product(*(range(d) for d in dims))
           if rng.random() < density}
    if not vox:
        vox = {(0, 0, 0)}
    return vox


def abstract_from_squares(cubes):
    """AbstractCubicalComplex from elementary squares (vertex order = lex)."""
    verts, edges, squares = set(), set(), set()
    for sq in cubes:
        vs = sq.vertices()
        verts.update(vs)
        squares.add(tuple(vs))
        for e in sq.facets():
            ev = e.vertices()
            edges.add((ev[0], ev[-1]))
    return AbstractCubicalComplex(sorted(verts), sorted(edges), sorted(squares))


def abstract_from_cubical_2complex(cx: CubicalComplex):
    return abstract_from_squares([cx.cube(c) for c in cx.cells(2)])


def random_abstract_2complex(rng: random.Random, max_squares=20):
    """A random face-closed set of squares out of a small voxel complex."""
    Q = complex_from_voxels(random_voxels(rng, max_side=3, density=0.6))
    squares = list(Q.cells(2))
    k = rng.randint(1, min(max_squares, len(squares)))
    chosen = rng.sample(squares, k)
    return abstract_from_squares([Q.cube(c) for c in chosen])


def torus_with_sphere(rng: random.Random):
    """The 9-square torus plus a 6-square sphere, glued at a random torus
    vertex or kept disjoint: 15 squares with both tunnels and cavities,
    so the product tables are nontrivial."""
    from voxring.fixtures import abstract_torus

    T = abstract_torus()
    edges = {T.cell_key(e) for e in T.cells(1)}
    squares = {T.cell_key(s) for s in T.cells(2)}

    shared = rng.randrange(9) if rng.random() < 0.7 else None
    low = 9 if shared is None else shared
    cube_labels = [low] + list(range(10, 17))

    shell = boundary_subcomplex(complex_from_voxels({(0, 0, 0)}))
    geo_verts = sorted(shell.cube(v).base for v in shell.cells(0))
    relabel = {p: cube_labels[i] for i, p in enumerate(geo_verts)}
    for e in shell.cells(1):
        vs = shell.cube(e).vertices()
        edges.add((relabel[vs[0]], relabel[vs[-1]]))
    for s in shell.cells(2):
        squares.add(tuple(relabel[p] for p in shell.cube(s).vertices()))

    verts = sorted(set(range(9)) | set(cube_labels))
    return AbstractCubicalComplex(verts, sorted(edges), sorted(squares))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
