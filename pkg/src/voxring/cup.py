"""Cup products on cubical and simplicial complexes, product matrices,
the staircase triangulation, and the two cross-checks tying the direct
cubical formula to the classical simplicial one.

On a square with ordered vertices vi < vj < vk < vl the product of two
1-cocycles evaluates as

    <a1, f(vi,vj)>.<a2, f(vj,vl)> + <a1, f(vi,vk)>.<a2, f(vk,vl)>,

on a 2-simplex (vp,vq,vr) as <a1, f(vp,vq)>.<a2, f(vq,vr)>; both extend
linearly over the representative cycle of each 2-generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .atmodel import ATModel, incremental_atmodel, subdivide_cell, verify_atmodel
from .chains import Chain, GradedChainComplex
from .cubical import (AbstractCubicalComplex, CubicalComplex, Point3,
                      check_square_order)
from .errors import UsageError
from .oracle import z2_rank_of_table

_AXIS_BIT = {(1, 0, 0): 1, (0, 1, 0): 2, (0, 0, 1): 4}


class SimplicialComplex(GradedChainComplex):
    """Face-closed complex of simplices keyed by increasing vertex tuples."""

    def __init__(self, simplices):
        closure: set[tuple] = set()
        stack = [tuple(s) for s in simplices]
        while stack:
            s = stack.pop()
            if len(set(s)) != len(s) or list(s) != sorted(s):
                raise UsageError(f"simplex vertices must increase: {s}")
            if s in closure:
                continue
            closure.add(s)
            if len(s) > 1:
                stack.extend(combinations(s, len(s) - 1))
        ordered = sorted(closure, key=lambda s: (len(s), s))
        self._key_of = dict(enumerate(ordered))
        self._id_of = {k: i for i, k in self._key_of.items()}
        dims = {i: len(k) - 1 for i, k in self._key_of.items()}
        boundary = {i: [self._id_of[f] for f in combinations(k, len(k) - 1)]
                    if len(k) > 1 else []
                    for i, k in self._key_of.items()}
        super().__init__(dims, boundary)

    def cell_key(self, cell: int) -> tuple:
        return self._key_of[cell]

    def cell_of(self, key: tuple) -> int:
        try:
            return self._id_of[tuple(key)]
        except KeyError:
            raise UsageError(f"simplex not in complex: {key}") from None

    def two_cell_vertices(self, cell: int):
        return list(self._key_of[cell])

    def edge_cell_between(self, u, v) -> int | None:
        return self._id_of.get((u, v) if u < v else (v, u))


# ------------------------------------------------------- edge-pair scheme

def _pair_scheme(cx, cell: int) -> list[tuple[int, int]]:
    """The (first-edge, second-edge) factor pairs of a 2-cell's cup
    evaluation, as cell ids."""
    vs = cx.two_cell_vertices(cell)
    if len(vs) == 4:
        vi, vj, vk, vl = vs
        legs = ((vi, vj), (vj, vl)), ((vi, vk), (vk, vl))
    elif len(vs) == 3:
        vp, vq, vr = vs
        legs = (((vp, vq), (vq, vr)),)
    else:
        raise UsageError(f"cell {cell} is not a square or triangle")
    out = []
    for (u1, v1), (u2, v2) in legs:
        e1 = cx.edge_cell_between(u1, v1)
        e2 = cx.edge_cell_between(u2, v2)
        if e1 is None or e2 is None:
            raise UsageError(f"2-cell {cell} lacks an ordered boundary edge")
        out.append((e1, e2))
    return out


def _require_ordered(cx) -> None:
    if isinstance(cx, (CubicalComplex, AbstractCubicalComplex)):
        ok = getattr(cx, "_ordered_ok", None)
        if ok is None:
            ok = check_square_order(cx)
            cx._ordered_ok = ok
        if not ok:
            raise UsageError("complex violates the ordered-square property")


def cup_evaluate(model: ATModel, a1: int, a2: int, two_chain: Chain,
                 geometry=None) -> int:
    """Evaluate the cup product cocycle of (a1, a2) on a 2-chain."""
    cx = geometry if geometry is not None else model.complex
    total = 0
    for cell in two_chain.cells:
        for e1, e2 in _pair_scheme(cx, cell):
            total ^= (a1 in model.f(e1).cells) & (a2 in model.f(e2).cells)
    return total


def cup_product(model: ATModel, a1: int, a2: int, geometry=None) -> Chain:
    """The product of two 1-generators as a chain of 2-generators."""
    cx = geometry if geometry is not None else model.complex
    _require_ordered(cx)
    for a in (a1, a2):
        if a not in model.inclusion or model.complex.dim(a) != 1:
            raise UsageError(f"cell {a} is not a 1-dimensional generator")
    out = set()
    for beta in model.generators_of_dim(2):
        if cup_evaluate(model, a1, a2, model.g(beta), cx):
            out.add(beta)
    return Chain(2, out)


def cup_product_cubical(model: ATModel, a1: int, a2: int,
                        geometry=None) -> Chain:
    cx = geometry if geometry is not None else model.complex
    if not isinstance(cx, (CubicalComplex, AbstractCubicalComplex)):
        raise UsageError("cubical cup product needs a cubical complex")
    return cup_product(model, a1, a2, cx)


def cup_product_simplicial(model: ATModel, a1: int, a2: int,
                           geometry=None) -> Chain:
    cx = geometry if geometry is not None else model.complex
    if not isinstance(cx, SimplicialComplex):
        raise UsageError("simplicial cup product needs a simplicial complex")
    return cup_product(model, a1, a2, cx)


# ---------------------------------------------------------- cup matrices

@dataclass(frozen=True)
class CupMatrix:
    """Products of all unordered 1-generator pairs expanded over the
    2-generator basis, with the table's Z/2 rank."""

    pairs: tuple[tuple[int, int], ...]     # rows: (a_i, a_j), i <= j
    cavities: tuple[int, ...]              # columns: 2-generators
    entries: tuple[tuple[int, ...], ...]   # entries[row][col] in {0, 1}
    rank: int
    asymmetric_pairs: tuple[tuple[int, int], ...] = ()

    @property
    def nonzero_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(p for p, row in zip(self.pairs, self.entries) if any(row))

    def product(self, pair: tuple[int, int]) -> tuple[int, ...]:
        row = self.entries[self.pairs.index(pair)]
        return tuple(c for c, bit in zip(self.cavities, row) if bit)


def discriminate_by_rank(a: CupMatrix, b: CupMatrix) -> str | None:
    """Different table ranks certify topological difference; equal ranks
    certify nothing."""
    if a.rank != b.rank:
        return "not homotopy equivalent"
    return None


def cup_product_matrix(model: ATModel, geometry=None) -> CupMatrix:
    """Tabulate every pairwise product of the 1-generators (diagonal
    included).  Each entry is computed with both argument orders; they
    must agree on cohomology and any discrepancy is recorded rather than
    silently accepted."""
    ones = model.generators_of_dim(1)
    twos = model.generators_of_dim(2)
    pairs = [(a, b) for i, a in enumerate(ones) for b in ones[i:]]
    entries = []
    asymmetric = []
    for a, b in pairs:
        fwd = cup_product(model, a, b, geometry)
        bwd = cup_product(model, b, a, geometry)
        if fwd != bwd:
            asymmetric.append((a, b))
        entries.append(tuple(int(c in fwd.cells) for c in twos))
    rank = z2_rank_of_table([list(r) for r in entries])
    return CupMatrix(tuple(pairs), tuple(twos), tuple(entries), rank,
                     tuple(asymmetric))


# ------------------------------------------------- staircase triangulation

def triangulate(Q: CubicalComplex) -> SimplicialComplex:
    """Split every square along its min-max diagonal and every cube into
    the six tetrahedra of monotone lattice paths (all sharing the main
    diagonal); the restriction of a cube's split to each face matches the
    face's own diagonal split."""
    _require_ordered(Q)
    tops: list[tuple[Point3, ...]] = []
    for q in range(Q.max_dim + 1):
        for cell in Q.cells(q):
            cube = Q.cube(cell)
            if q <= 1:
                tops.append(tuple(cube.vertices()))
            elif q == 2:
                vi, vj, vk, vl = cube.vertices()
                tops.append((vi, vj, vl))
                tops.append((vi, vk, vl))
            else:
                axes = [off for off, bit in _AXIS_BIT.items()
                        if cube.extent & bit]
                for order in permutations(axes):
                    path = [cube.base]
                    for off in order:
                        x, y, z = path[-1]
                        path.append((x + off[0], y + off[1], z + off[2]))
                    tops.append(tuple(path))
    return SimplicialComplex(tops)


# ---------------------------------------- equivalence of the two products

@dataclass(frozen=True)
class ProductComparison:
    a1: int
    a2: int
    beta: int
    cubical_bit: int
    simplicial_bit: int

    @property
    def ok(self) -> bool:
        return self.cubical_bit == self.simplicial_bit


@dataclass(frozen=True)
class EquivalenceReport:
    comparisons: tuple[ProductComparison, ...]
    verification: object
    generator_map: dict[int, int]

    @property
    def ok(self) -> bool:
        return self.verification.ok and all(c.ok for c in self.comparisons)

    def mismatches(self) -> tuple[ProductComparison, ...]:
        return tuple(c for c in self.comparisons if not c.ok)


class _SubdividedView:
    """Vertex bookkeeping for a complex produced by square subdivisions:
    enough of the complex protocol for the simplicial cup evaluation."""

    def __init__(self, Q: AbstractCubicalComplex):
        self.tri_vertices: dict[int, tuple] = {}
        self.edge_ids: dict[tuple, int] = {}
        self.order = Q.vertex_order
        for e in Q.cells(1):
            self.edge_ids[Q.cell_key(e)] = e

    def two_cell_vertices(self, cell: int):
        return list(self.tri_vertices[cell])

    def edge_cell_between(self, u, v) -> int | None:
        key = tuple(sorted((u, v), key=self.order.__getitem__))
        return self.edge_ids.get(key)


def cup_equivalence_2d(Q: AbstractCubicalComplex, model: ATModel,
                       verify_each: bool = False) -> EquivalenceReport:
    """Split every square of a 2-complex along its min-max diagonal,
    transporting the model through each subdivision, then compare every
    cubical product against the simplicial product of the transported
    model under the generator correspondence (subdivided generator ->
    its first half)."""
    if Q.max_dim > 2:
        raise UsageError("equivalence check expects a 2-complex")
    _require_ordered(Q)
    ones = model.generators_of_dim(1)
    twos = model.generators_of_dim(2)

    cub = {}
    for i, a1 in enumerate(ones):
        for a2 in ones[i:]:
            prod = cup_product(model, a1, a2, Q)
            for beta in twos:
                cub[(a1, a2, beta)] = int(beta in prod.cells)

    view = _SubdividedView(Q)
    cx: GradedChainComplex = Q
    m = model
    h = {c: c for c in model.generators}
    for sq in Q.cells(2):
        vi, vj, vk, vl = Q.cell_key(sq)
        wing1 = cx.chain([view.edge_ids[(vi, vj)], view.edge_ids[(vj, vl)]])
        wing2 = cx.chain([view.edge_ids[(vi, vk)], view.edge_ids[(vk, vl)]])
        fb = cx.chain([Q.cell_of((vi,)), Q.cell_of((vl,))])
        cx, m, (a1_id, a2_id, e_id) = subdivide_cell(cx, m, sq, wing1, wing2, fb)
        view.tri_vertices[a1_id] = (vi, vj, vl)
        view.tri_vertices[a2_id] = (vi, vk, vl)
        view.edge_ids[(vi, vl)] = e_id
        if sq in h:
            h[sq] = a1_id
        if verify_each and not verify_atmodel(cx, m).ok:
            raise UsageError(f"subdivision of square {sq} broke the model")

    comparisons = []
    for i, a1 in enumerate(ones):
        for a2 in ones[i:]:
            for beta in twos:
                bit = cup_evaluate(m, h[a1], h[a2], m.g(h[beta]), view)
                comparisons.append(ProductComparison(
                    a1, a2, beta, cub[(a1, a2, beta)], bit))
    report = verify_atmodel(cx, m)
    return EquivalenceReport(tuple(comparisons), report, h)


@dataclass(frozen=True)
class RankCrosscheck:
    cubical_betti: tuple[int, ...]
    simplicial_betti: tuple[int, ...]
    cubical_rank: int
    simplicial_rank: int

    @property
    def ok(self) -> bool:
        return (self.cubical_betti == self.simplicial_betti
                and self.cubical_rank == self.simplicial_rank)


def cup_rank_crosscheck(Q: CubicalComplex) -> RankCrosscheck:
    """Compare Betti numbers and cup-matrix rank computed on Q directly
    against an independently built model of the triangulation."""
    mq = incremental_atmodel(Q)
    KQ = triangulate(Q)
    mk = incremental_atmodel(KQ)
    return RankCrosscheck(
        cubical_betti=tuple(mq.betti()),
        simplicial_betti=tuple(mk.betti()),
        cubical_rank=cup_product_matrix(mq).rank,
        simplicial_rank=cup_product_matrix(mk).rank,
    )
