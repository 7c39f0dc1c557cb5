"""Algebraic-topological models over Z/2 and the algorithms that build them.

An AT-model for a complex P is a tuple (H, f, g, phi): a generator set H
together with a projection f (chains -> generator chains), an inclusion g
(generator -> representative cycle) and a chain homotopy phi, satisfying

    f g = id,   phi d + d phi = id + g f,   f d = 0,   d g = 0,
    phi phi = 0,   f phi = 0,   phi g = 0.

Chains of H are then isomorphic to the homology (and cohomology) of P;
g(s) is a representative cycle and <s, f(.)> a representative cocycle.

Internally the builders keep f and phi as bit-packed matrices (one row
per cell, one column per same-dimension cell) and run the elimination
sweeps through the kernel backend; the public ATModel stores sparse
chains.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace

from . import kernels as kn
from .chains import Chain, GradedChainComplex
from .errors import IntegrityError, UsageError


@dataclass(frozen=True)
class ATModel:
    complex: GradedChainComplex
    generators: tuple[int, ...]
    projection: dict[int, Chain]   # f; missing entry = zero
    inclusion: dict[int, Chain]    # g; keyed exactly by the generators
    homotopy: dict[int, Chain]     # phi; missing entry = zero
    flags: tuple[str, ...] = ()

    def generators_of_dim(self, q: int) -> tuple[int, ...]:
        return tuple(c for c in self.generators if self.complex.dim(c) == q)

    def betti(self, top: int = 2) -> tuple[int, ...]:
        return tuple(len(self.generators_of_dim(q)) for q in range(top + 1))

    def f(self, cell: int) -> Chain:
        got = self.projection.get(cell)
        return got if got is not None else Chain.zero(self.complex.dim(cell))

    def f_of(self, chain: Chain) -> Chain:
        acc = Chain.zero(chain.dim)
        for cell in chain.cells:
            acc = acc + self.f(cell)
        return acc

    def g(self, cell: int) -> Chain:
        try:
            return self.inclusion[cell]
        except KeyError:
            raise UsageError(f"cell {cell} is not a generator") from None

    def g_of(self, chain: Chain) -> Chain:
        acc = Chain.zero(chain.dim)
        for cell in chain.cells:
            acc = acc + self.g(cell)
        return acc

    def phi(self, cell: int) -> Chain:
        got = self.homotopy.get(cell)
        return got if got is not None else Chain.zero(self.complex.dim(cell) + 1)

    def phi_of(self, chain: Chain) -> Chain:
        acc = Chain.zero(chain.dim + 1)
        for cell in chain.cells:
            acc = acc + self.phi(cell)
        return acc


@dataclass(frozen=True)
class Cocycle:
    """The representative cocycle of a generator: on a cell it reads
    <generator, f(cell)>, which vanishes on boundaries since f d = 0."""

    generator: int
    model: "ATModel"

    def on_cell(self, cell: int) -> int:
        return int(self.generator in self.model.f(cell).cells)

    def __call__(self, chain: Chain) -> int:
        if self.model.complex.dim(self.generator) != chain.dim:
            raise UsageError(
                "cocycle evaluated on a chain of the wrong dimension")
        return sum(self.on_cell(cell) for cell in chain.cells) & 1


def cocycle_value(generator: int, model: ATModel, chain: Chain) -> int:
    """Evaluate the representative cocycle of ``generator`` on a chain."""
    if generator not in model.inclusion:
        raise UsageError(f"cell {generator} is not a generator")
    return Cocycle(generator, model)(chain)


# --------------------------------------------------------------- packing

class _Packed:
    """Bit-matrix view of a complex: boundary rows per dimension."""

    def __init__(self, cx: GradedChainComplex):
        self.cx = cx
        top = max(cx.max_dim, 0)
        self.top = top
        self.n = {q: cx.n_cells(q) for q in range(top + 2)}
        self.cells = {q: cx.cells(q) for q in range(top + 2)}
        self.D = {}
        for q in range(1, top + 1):
            M = kn.zero_matrix(self.n[q], self.n[q - 1])
            for i, cell in enumerate(self.cells[q]):
                for f in cx.boundary(cell).cells:
                    kn.set_bit(M[i], cx.position(f))
            self.D[q] = M

    def nq(self, q: int) -> int:
        return self.n.get(q, 0)

    def row_to_cells(self, row, q: int) -> list[int]:
        cells = self.cells.get(q, ())
        return [cells[j] for j in kn.bits_of_row(row) if j < len(cells)]

    def pack_chain(self, chain: Chain, q: int):
        row = kn.zero_row(self.n[q])
        for cell in chain.cells:
            if self.cx.dim(cell) != q:
                raise UsageError(f"cell {cell} has dim {self.cx.dim(cell)}, "
                                 f"expected {q}")
            kn.set_bit(row, self.cx.position(cell))
        return row


def _materialize(cx, P: _Packed, F, PHI, H, g_rows, flags=()) -> ATModel:
    projection = {}
    homotopy = {}
    for q in range(P.top + 1):
        for i, cell in enumerate(P.cells[q]):
            fc = P.row_to_cells(F[q][i], q)
            if fc:
                projection[cell] = Chain(q, fc)
            pc = P.row_to_cells(PHI[q][i], q + 1)
            if pc:
                homotopy[cell] = Chain(q + 1, pc)
    inclusion = {cell: Chain(cx.dim(cell), P.row_to_cells(row, cx.dim(cell)))
                 for cell, row in g_rows.items()}
    return ATModel(cx, tuple(sorted(H)), projection, inclusion, homotopy,
                   tuple(flags))


# ---------------------------------------------------------- verification

CORE_AXIOMS = ("wellformed", "fg_identity", "homotopy_identity",
               "f_boundary_zero", "g_cycle", "phi_phi_zero",
               "f_phi_zero", "phi_g_zero")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    failed_cell: int | None = None
    advisory: bool = False


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks if not c.advisory)

    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            mark = "pass" if c.ok else "FAIL"
            extra = "" if c.failed_cell is None else f" (first at cell {c.failed_cell})"
            lines.append(f"{c.name:>22}: {mark}{extra}")
        return "\n".join(lines)


class _Tracker:
    def __init__(self, name, advisory=False):
        self.name = name
        self.advisory = advisory
        self.passed = True
        self.failed: int | None = None

    def hit(self, cell=None):
        if self.passed:
            self.passed = False
            self.failed = cell

    def result(self):
        return CheckResult(self.name, self.passed, self.failed, self.advisory)


def verify_atmodel(cx: GradedChainComplex, model: ATModel) -> VerificationReport:
    """Check every model identity on every cell and generator.

    The per-axiom report carries the first violating cell; the advisory
    ``generator_normalized`` entry (f(a) = a and a in g(a) for a in H)
    does not affect ``ok``.
    """
    P = _Packed(cx)
    trackers = {name: _Tracker(name) for name in CORE_AXIOMS}
    trackers["generator_normalized"] = _Tracker("generator_normalized",
                                                advisory=True)
    wf = trackers["wellformed"]

    H_by_dim: dict[int, set[int]] = {}
    for a in model.generators:
        H_by_dim.setdefault(cx.dim(a), set()).add(a)
    if set(model.inclusion) != set(model.generators):
        wf.hit(next(iter(set(model.inclusion) ^ set(model.generators)), None))

    F, PHI, G, Hmask = {}, {}, {}, {}
    for q in range(P.top + 1):
        F[q] = kn.zero_matrix(P.n[q], P.n[q])
        PHI[q] = kn.zero_matrix(P.n[q], P.n[q + 1])
        G[q] = kn.zero_matrix(P.n[q], P.n[q])
        Hmask[q] = kn.zero_row(P.n[q])
    try:
        for cell, ch in model.projection.items():
            q = cx.dim(cell)
            if ch.dim != q:
                raise UsageError(f"f({cell}) has wrong dimension")
            F[q][cx.position(cell)] = P.pack_chain(ch, q)
        for cell, ch in model.homotopy.items():
            q = cx.dim(cell)
            if ch.dim != q + 1:
                raise UsageError(f"phi({cell}) has wrong dimension")
            PHI[q][cx.position(cell)] = P.pack_chain(ch, q + 1)
        for cell, ch in model.inclusion.items():
            q = cx.dim(cell)
            if ch.dim != q:
                raise UsageError(f"g({cell}) has wrong dimension")
            G[q][cx.position(cell)] = P.pack_chain(ch, q)
            kn.set_bit(Hmask[q], cx.position(cell))
    except UsageError:
        wf.hit(None)
        return VerificationReport(tuple(t.result() for t in trackers.values()))

    for q in range(P.top + 1):
        not_H = ~Hmask[q]
        for i, cell in enumerate(P.cells[q]):
            frow = F[q][i]
            if not kn.row_is_zero(frow & not_H):
                wf.hit(cell)
            if q >= 1:
                acc = kn.zero_row(P.n[q - 1])
                kn.gather_xor(F[q - 1], P.D[q][i], acc)
                if not kn.row_is_zero(acc):
                    trackers["f_boundary_zero"].hit(cell)
            # phi d + d phi = id + g f
            lhs = kn.zero_row(P.n[q])
            if q >= 1:
                kn.gather_xor(PHI[q - 1], P.D[q][i], lhs)
            if q + 1 in P.D:
                kn.gather_xor(P.D[q + 1], PHI[q][i], lhs)
            kn.flip_bit(lhs, i)
            kn.gather_xor(G[q], frow, lhs)
            if not kn.row_is_zero(lhs):
                trackers["homotopy_identity"].hit(cell)
            if q + 1 <= P.top:
                acc = kn.zero_row(P.n[q + 2])
                kn.gather_xor(PHI[q + 1], PHI[q][i], acc)
                if not kn.row_is_zero(acc):
                    trackers["phi_phi_zero"].hit(cell)
                acc = kn.zero_row(P.n[q + 1])
                kn.gather_xor(F[q + 1], PHI[q][i], acc)
                if not kn.row_is_zero(acc):
                    trackers["f_phi_zero"].hit(cell)

        for a in sorted(H_by_dim.get(q, ())):
            i = cx.position(a)
            grow = G[q][i]
            acc = kn.zero_row(P.n[q])
            kn.gather_xor(F[q], grow, acc)
            kn.flip_bit(acc, i)
            if not kn.row_is_zero(acc):
                trackers["fg_identity"].hit(a)
            if q >= 1:
                acc = kn.zero_row(P.n[q - 1])
                kn.gather_xor(P.D[q], grow, acc)
                if not kn.row_is_zero(acc):
                    trackers["g_cycle"].hit(a)
            acc = kn.zero_row(P.n[q + 1])
            kn.gather_xor(PHI[q], grow, acc)
            if not kn.row_is_zero(acc):
                trackers["phi_g_zero"].hit(a)
            unit = kn.zero_row(P.n[q])
            kn.set_bit(unit, i)
            if not kn.row_is_zero(F[q][i] ^ unit) or not kn.get_bit(grow, i):
                trackers["generator_normalized"].hit(a)

    return VerificationReport(tuple(t.result() for t in trackers.values()))


# --------------------------------------------- generic incremental builder

def incremental_atmodel(cx: GradedChainComplex) -> ATModel:
    """Build an AT-model by adding cells one at a time, faces first.

    A cell whose projected boundary vanishes starts a new generator; any
    other cell eliminates the smallest generator appearing in that
    projected boundary, sweeping the update through all processed cells
    of the same dimension.
    """
    cx.require_boundary_squared()
    P = _Packed(cx)
    F = {q: kn.zero_matrix(P.n[q], P.n[q]) for q in range(P.top + 1)}
    PHI = {q: kn.zero_matrix(P.n[q], P.n[q + 1]) for q in range(P.top + 1)}
    H: set[int] = set()
    g_rows: dict[int, object] = {}

    for cell in cx.all_cells():
        q = cx.dim(cell)
        r = cx.position(cell)
        fd = None
        if q >= 1:
            fd = kn.zero_row(P.n[q - 1])
            kn.gather_xor(F[q - 1], P.D[q][r], fd)
        if fd is None or kn.row_is_zero(fd):
            H.add(cell)
            kn.set_bit(F[q][r], r)
            grow = kn.zero_row(P.n[q])
            if q >= 1:
                kn.gather_xor(PHI[q - 1], P.D[q][r], grow)
            kn.set_bit(grow, r)
            g_rows[cell] = grow
        else:
            apos = kn.lowest_bit(fd)
            a = P.cells[q - 1][apos]
            H.remove(a)
            del g_rows[a]
            pupd = kn.zero_row(P.n[q])
            kn.gather_xor(PHI[q - 1], P.D[q][r], pupd)
            kn.set_bit(pupd, r)
            kn.sweep_pair(F[q - 1], PHI[q - 1], apos, fd, pupd)

    return _materialize(cx, P, F, PHI, H, g_rows)


# ------------------------------------------------------- spanning forests

@dataclass(frozen=True)
class SpanningForest:
    roots: tuple[int, ...]
    parent: dict[int, tuple[int, int]]   # vertex -> (edge cell, parent vertex)


def build_spanning_forest(cx: GradedChainComplex) -> SpanningForest:
    """BFS forest over the 1-skeleton, one tree per connected component,
    rooted at each component's smallest vertex, exploring neighbors in
    ascending id order."""
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in cx.cells(0)}
    for e in cx.cells(1):
        ends = sorted(cx.boundary(e).cells)
        if len(ends) != 2:
            raise UsageError(f"edge {e} does not have two distinct endpoints")
        u, v = ends
        incident[u].append((v, e))
        incident[v].append((u, e))
    for lst in incident.values():
        lst.sort()

    roots: list[int] = []
    parent: dict[int, tuple[int, int]] = {}
    seen: set[int] = set()
    for start in cx.cells(0):
        if start in seen:
            continue
        roots.append(start)
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            for w, e in incident[v]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (e, v)
                    queue.append(w)
    return SpanningForest(tuple(roots), parent)


def _validate_forest(cx: GradedChainComplex, forest: SpanningForest) -> dict[int, int]:
    """Check the forest spans the 1-skeleton with one tree per component;
    return the vertex -> root map."""
    vertices = set(cx.cells(0))
    roots = set(forest.roots)
    if len(roots) != len(forest.roots):
        raise UsageError("duplicate roots")
    if not roots <= vertices:
        raise UsageError("root is not a vertex of the complex")
    if roots & set(forest.parent):
        raise UsageError("a root also has a parent")
    if roots | set(forest.parent) != vertices:
        raise UsageError("forest does not cover every vertex exactly once")
    for v, (e, w) in forest.parent.items():
        if e not in cx or cx.dim(e) != 1 or set(cx.boundary(e).cells) != {v, w}:
            raise UsageError(f"parent edge {e} does not join {v} and {w}")

    root_of: dict[int, int] = {r: r for r in forest.roots}

    def resolve(v):
        trail = []
        while v not in root_of:
            if v in trail:
                raise UsageError("forest contains a cycle")
            trail.append(v)
            v = forest.parent[v][1]
        for t in trail:
            root_of[t] = root_of[v]
        return root_of[v]

    for v in vertices:
        resolve(v)

    # one tree per connected component
    comp: dict[int, int] = {v: v for v in vertices}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for e in cx.cells(1):
        u, v = sorted(cx.boundary(e).cells)
        comp[find(u)] = find(v)
    by_comp: dict[int, set[int]] = {}
    for r in forest.roots:
        by_comp.setdefault(find(r), set()).add(r)
    if len(by_comp) != len({find(v) for v in vertices}) or \
            any(len(rs) != 1 for rs in by_comp.values()):
        raise UsageError("forest must have exactly one root per component")
    return root_of


# ------------------------------------------- boundary-complex model (2D)

def boundary_atmodel(dQ: GradedChainComplex,
                     forest: SpanningForest | None = None) -> ATModel:
    """AT-model of a 2-complex built from a spanning forest.

    Vertices project to their tree root with the tree path as homotopy;
    squares with a single unused edge absorb that edge pairwise; edges
    left over become 1-generators; remaining squares either start a
    2-generator or eliminate a 1-generator, sweeping the update through
    all non-tree edges.  Representative cycles are g(s) = s + phi(d s).
    """
    if dQ.max_dim > 2:
        raise UsageError("boundary model needs a 2-complex (no 3-cells)")
    dQ.require_boundary_squared()
    if forest is None:
        forest = build_spanning_forest(dQ)
    root_of = _validate_forest(dQ, forest)

    P = _Packed(dQ)
    n0, n1, n2 = P.nq(0), P.nq(1), P.nq(2)
    verts = P.cells.get(0, ())
    edges = P.cells.get(1, ())
    squares = P.cells.get(2, ())

    F0 = kn.zero_matrix(n0, n0)
    PHI0 = kn.zero_matrix(n0, n1)
    F1 = kn.zero_matrix(n1, n1)
    PHI1 = kn.zero_matrix(n1, n2)
    F2 = kn.zero_matrix(n2, n2)
    PHI2 = kn.zero_matrix(n2, P.nq(3))

    # step 1: vertices project to roots, homotopy = path to root
    for i, v in enumerate(verts):
        kn.set_bit(F0[i], dQ.position(root_of[v]))
    done: set[int] = set(forest.roots)
    pending = [v for v in verts if v not in done]
    while pending:
        rest = []
        for v in pending:
            e, w = forest.parent[v]
            if w in done:
                row = PHI0[dQ.position(v)]
                kn.xor_into(row, PHI0[dQ.position(w)])
                kn.flip_bit(row, dQ.position(e))
                done.add(v)
            else:
                rest.append(v)
        pending = rest

    for i in range(n1):
        kn.set_bit(F1[i], i)
    for i in range(n2):
        kn.set_bit(F2[i], i)

    tree_edges = {e for e, _ in forest.parent.values()}
    edge_used = [False] * n1
    for e in tree_edges:
        i = dQ.position(e)
        edge_used[i] = True
        F1[i] = 0  # f(tree edge) = 0
    n_free = n1 - len(tree_edges)

    # step 2: pair squares having exactly one unused edge; otherwise the
    # smallest unused edge starts a 1-generator
    edge_squares: dict[int, list[int]] = {i: [] for i in range(n1)}
    free_count = [0] * n2
    for si in range(n2):
        for b in kn.bits_of_row(P.D[2][si]):
            edge_squares[b].append(si)
            if not edge_used[b]:
                free_count[si] += 1
    square_used = [False] * n2
    candidates = [si for si in range(n2) if free_count[si] == 1]
    heapq.heapify(candidates)
    free_heap = [i for i in range(n1) if not edge_used[i]]
    heapq.heapify(free_heap)
    H: set[int] = set(forest.roots)

    def consume_edge(apos):
        nonlocal n_free
        edge_used[apos] = True
        n_free -= 1
        for si in edge_squares[apos]:
            if not square_used[si]:
                free_count[si] -= 1
                if free_count[si] == 1:
                    heapq.heappush(candidates, si)

    while n_free > 0:
        sq = None
        while candidates:
            si = heapq.heappop(candidates)
            if not square_used[si] and free_count[si] == 1:
                sq = si
                break
        if sq is not None:
            apos = next(b for b in kn.bits_of_row(P.D[2][sq])
                        if not edge_used[b])
            rest = P.D[2][sq].copy()
            kn.flip_bit(rest, apos)
            fa = kn.zero_row(n1)
            kn.gather_xor(F1, rest, fa)
            F1[apos] = fa
            pa = kn.zero_row(n2)
            kn.gather_xor(PHI1, rest, pa)
            kn.set_bit(pa, sq)
            PHI1[apos] = pa
            F2[sq] = 0
            square_used[sq] = True
            consume_edge(apos)
        else:
            while free_heap:
                apos = heapq.heappop(free_heap)
                if not edge_used[apos]:
                    break
            H.add(edges[apos])
            consume_edge(apos)

    # step 3: remaining squares create a 2-generator or kill a 1-generator
    for sq in range(n2):
        if square_used[sq]:
            continue
        fd = kn.zero_row(n1)
        kn.gather_xor(F1, P.D[2][sq], fd)
        if kn.row_is_zero(fd):
            H.add(squares[sq])
        else:
            apos = kn.lowest_bit(fd)
            H.remove(edges[apos])
            pupd = kn.zero_row(n2)
            kn.gather_xor(PHI1, P.D[2][sq], pupd)
            kn.set_bit(pupd, sq)
            kn.sweep_pair(F1, PHI1, apos, fd, pupd)
            F2[sq] = 0

    # step 4: representative cycles
    F = {0: F0, 1: F1, 2: F2}
    PHI = {0: PHI0, 1: PHI1, 2: PHI2}
    g_rows = {}
    for a in H:
        q = dQ.dim(a)
        grow = kn.zero_row(P.n[q])
        if q >= 1:
            kn.gather_xor(PHI[q - 1], P.D[q][dQ.position(a)], grow)
        kn.set_bit(grow, dQ.position(a))
        g_rows[a] = grow

    return _materialize(dQ, P, F, PHI, H, g_rows)


# ------------------------------------------------------- face reduction

def face_reduction(Q: GradedChainComplex,
                   dQ: GradedChainComplex) -> GradedChainComplex:
    """Cancel interior cell pairs (s, s') with s' a facet of s, rewriting
    d(c) := d(c + s) for every cell whose boundary contains s', until no
    interior pair remains.  Cells of dQ and their boundaries are never
    touched; the result keeps the surviving cells' ids.

    Pairs are chosen deterministically: the interior cell of highest
    dimension (smallest id on ties) that currently has an interior facet,
    with the smallest such facet.
    """
    dq_cells = set(dQ.all_cells())
    q_cells = set(Q.all_cells())
    if not dq_cells <= q_cells:
        raise UsageError("dQ is not a subcomplex of Q")
    interior = q_cells - dq_cells

    bnd = {c: set(faces) for c, faces in Q.boundary_sets().items()}
    # coboundaries are only ever queried at interior cells (both members of
    # a cancelled pair are interior), so they are tracked for those alone
    cobnd: dict[int, set[int]] = {c: set() for c in interior}
    for c, faces in bnd.items():
        for f in faces:
            if f in cobnd:
                cobnd[f].add(c)
    heap = [(-Q.dim(c), c) for c in interior]
    heapq.heapify(heap)

    def repush(c):
        if c in cobnd:
            heapq.heappush(heap, (-Q.dim(c), c))

    while heap:
        _, s = heapq.heappop(heap)
        if s not in cobnd:
            continue
        inner = [t for t in bnd[s] if t in cobnd]
        if not inner:
            continue
        s2 = min(inner)
        ds = frozenset(bnd[s])
        ds_int = [f for f in ds if f in cobnd]
        for c in sorted(cobnd[s2]):
            if c == s:
                continue
            old = bnd[c]
            for f in ds_int:
                if f in old:
                    cobnd[f].discard(c)
                else:
                    cobnd[f].add(c)
            bnd[c] = old ^ ds
            repush(c)
        for t in sorted(cobnd[s]):
            bnd[t].discard(s)
            repush(t)
        for cell in (s, s2):
            for f in bnd[cell]:
                if f in cobnd:
                    cobnd[f].discard(cell)
            del bnd[cell]
            del cobnd[cell]

    return GradedChainComplex({c: Q.dim(c) for c in bnd}, bnd)


# ------------------------------------------------- extension to the full K

def extend_atmodel(model: ATModel, K: GradedChainComplex,
                   verify_guard: bool = True) -> ATModel:
    """Extend a boundary-complex model over the reduced complex K by
    adding the cells of K minus the boundary complex in increasing
    dimension.  Every added cell must eliminate a generator (its
    projected boundary is nonzero); a vanishing projected boundary means
    a cycle was created, which the construction forbids, and raises
    IntegrityError.

    Representative cycles are untouched, so they stay supported on the
    boundary complex.  As a guard, the result is verified; if any axiom
    fails, g is recomputed as g(s) = s + phi(d s) and the model is
    flagged ``g-recomputed``.
    """
    dQ = model.complex
    dq_cells = set(dQ.all_cells())
    k_cells = set(K.all_cells())
    if not dq_cells <= k_cells:
        raise UsageError("model's complex is not contained in K")
    K.require_boundary_squared()
    for c in dq_cells:
        if K.dim(c) != dQ.dim(c):
            raise UsageError(f"cell {c} changes dimension between complexes")

    P = _Packed(K)
    F = {q: kn.zero_matrix(P.n[q], P.n[q]) for q in range(P.top + 1)}
    PHI = {q: kn.zero_matrix(P.n[q], P.n[q + 1]) for q in range(P.top + 1)}
    for cell, ch in model.projection.items():
        F[K.dim(cell)][K.position(cell)] = P.pack_chain(ch, ch.dim)
    for cell, ch in model.homotopy.items():
        PHI[K.dim(cell)][K.position(cell)] = P.pack_chain(ch, ch.dim)
    H = set(model.generators)
    g_rows = {cell: P.pack_chain(ch, ch.dim)
              for cell, ch in model.inclusion.items()}

    added = sorted(k_cells - dq_cells, key=lambda c: (K.dim(c), c))
    for cell in added:
        q = K.dim(cell)
        r = K.position(cell)
        fd = kn.zero_row(P.n[q - 1]) if q >= 1 else None
        if q >= 1:
            kn.gather_xor(F[q - 1], P.D[q][r], fd)
        if fd is None or kn.row_is_zero(fd):
            raise IntegrityError(
                f"adding cell {cell} created a cycle; the boundary complex "
                "does not carry the homology of K")
        apos = kn.lowest_bit(fd)
        a = P.cells[q - 1][apos]
        if a not in H:
            raise IntegrityError(
                f"projected boundary of cell {cell} hit non-generator {a}")
        H.remove(a)
        g_rows.pop(a)
        pupd = kn.zero_row(P.n[q])
        kn.gather_xor(PHI[q - 1], P.D[q][r], pupd)
        kn.set_bit(pupd, r)
        kn.sweep_pair(F[q - 1], PHI[q - 1], apos, fd, pupd)

    out = _materialize(K, P, F, PHI, H, g_rows)
    if verify_guard and not verify_atmodel(K, out).ok:
        inclusion = {}
        for a in out.generators:
            q = K.dim(a)
            cyc = Chain(q, [a]) + out.phi_of(K.boundary(a))
            inclusion[a] = cyc
        out = replace(out, inclusion=inclusion,
                      flags=out.flags + ("g-recomputed",))
    return out


# ------------------------------------------------------ subdivision step

def subdivide_cell(cx: GradedChainComplex, model: ATModel, cell: int,
                   wing1: Chain, wing2: Chain,
                   face_boundary: Chain | None = None):
    """Split ``cell`` into two fresh cells joined along a fresh facet.

    ``wing1`` / ``wing2`` are the halves of the old boundary: the two new
    cells get boundaries wing1 + e and wing2 + e, where e is the new
    facet with boundary ``face_boundary``.  The transported model swaps
    the cell for the first half in f (and in H, when it was a generator)
    and for both halves in phi and g; it is again a valid AT-model.

    Returns (new_complex, new_model, (half1, half2, facet)).
    """
    if model.complex is not cx:
        raise UsageError("model does not belong to this complex")
    q = cx.dim(cell)
    if q < 1:
        raise UsageError("cannot subdivide a vertex")
    if wing1.dim != q - 1 or wing2.dim != q - 1:
        raise UsageError("wings must be chains one dimension down")
    if wing1 + wing2 != cx.boundary(cell):
        raise UsageError("wings do not split the cell's boundary")
    fb = face_boundary if face_boundary is not None else Chain.zero(q - 2)
    if fb.dim != q - 2:
        raise UsageError("facet boundary has the wrong dimension")
    if cx.boundary_of(wing1) != fb or cx.boundary_of(wing2) != fb:
        raise UsageError("facet boundary inconsistent with the wings")
    for a in model.generators:
        if model.f(a) != Chain(cx.dim(a), [a]) or a not in model.g(a).cells:
            raise UsageError(
                "model lacks the builder normalization f(a) = a, a in g(a)")

    base = max(cx.all_cells(), default=-1) + 1
    e_id, a1_id, a2_id = base, base + 1, base + 2

    dims = {c: cx.dim(c) for c in cx.all_cells() if c != cell}
    dims[e_id] = q - 1
    dims[a1_id] = q
    dims[a2_id] = q
    boundary: dict[int, set[int]] = {}
    for c in dims:
        if c >= base:
            continue
        faces = set(cx.boundary(c).cells)
        if cell in faces:
            faces.discard(cell)
            faces.update((a1_id, a2_id))
        boundary[c] = faces
    boundary[e_id] = set(fb.cells)
    boundary[a1_id] = set(wing1.cells) | {e_id}
    boundary[a2_id] = set(wing2.cells) | {e_id}
    new_cx = GradedChainComplex(dims, boundary)

    def swap_f(ch: Chain) -> Chain:
        if ch.dim == q and cell in ch.cells:
            return Chain(q, (ch.cells - {cell}) | {a1_id})
        return ch

    def swap_both(ch: Chain) -> Chain:
        if ch.dim == q and cell in ch.cells:
            return Chain(q, (ch.cells - {cell}) | {a1_id, a2_id})
        return ch

    projection = {}
    for c, ch in model.projection.items():
        if c != cell:
            projection[c] = swap_f(ch)
    fa1 = swap_f(model.f(cell))
    if fa1:
        projection[a1_id] = fa1
    fe = model.f_of(wing1)
    if fe:
        projection[e_id] = fe

    homotopy = {}
    for c, ch in model.homotopy.items():
        if c != cell:
            homotopy[c] = swap_both(ch)
    pa1 = model.phi(cell)
    if pa1:
        homotopy[a1_id] = pa1
    homotopy[e_id] = Chain(q, [a2_id]) + swap_both(model.phi_of(wing2))

    inclusion = {}
    generators = []
    for a in model.generators:
        if a == cell:
            inclusion[a1_id] = swap_both(model.g(cell))
            generators.append(a1_id)
        else:
            inclusion[a] = swap_both(model.g(a))
            generators.append(a)
    new_model = ATModel(new_cx, tuple(sorted(generators)), projection,
                        inclusion, homotopy, model.flags)
    return new_cx, new_model, (a1_id, a2_id, e_id)
