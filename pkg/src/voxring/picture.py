"""3D binary pictures: parsing, serialization, connectivity, complements,
and projecting homology generators back onto voxels.

A picture fixes the (26, 6) adjacency convention: foreground voxels are
26-connected, background voxels 6-connected.  The voxel at lattice point
(x, y, z) is the unit cube with minimal vertex (x, y, z).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .atmodel import ATModel
from .chains import Chain
from .cubical import CubicalComplex, ElementaryCube, Point3
from .errors import ParseError, UsageError

_SIX = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
_TWENTYSIX = tuple((dx, dy, dz)
                   for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
                   if (dx, dy, dz) != (0, 0, 0))


@dataclass(frozen=True)
class Picture3D:
    dims: tuple[int, int, int]
    foreground: frozenset[Point3]

    def __post_init__(self):
        X, Y, Z = self.dims
        if X <= 0 or Y <= 0 or Z <= 0:
            raise UsageError(f"non-positive dimensions {self.dims}")
        for (x, y, z) in self.foreground:
            if not (0 <= x < X and 0 <= y < Y and 0 <= z < Z):
                raise UsageError(f"voxel {(x, y, z)} outside {self.dims}")

    @property
    def n_voxels(self) -> int:
        return len(self.foreground)

    def __contains__(self, p: Point3) -> bool:
        return p in self.foreground


def parse_picture(data: bytes | str) -> Picture3D:
    """Accepts the dense grid format (header "X Y Z", then Z blocks of Y
    lines of X characters from {0,1}, blank line between blocks, trailing
    newline) or the coordinate list format (header "dims X Y Z", then one
    "x y z" line per foreground voxel, duplicates rejected)."""
    if isinstance(data, bytes):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not ASCII: {exc}") from None
    else:
        text = data
    if not text:
        raise ParseError("empty input", line=1)
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline")
    lines = text.split("\n")[:-1]
    header = lines[0].split()
    if header and header[0] == "dims":
        return _parse_coords(lines)
    return _parse_grid(lines)


def _parse_dims(tokens, line) -> tuple[int, int, int]:
    if len(tokens) != 3:
        raise ParseError(f"expected three dimensions, got {tokens}", line=line)
    try:
        dims = tuple(int(t) for t in tokens)
    except ValueError:
        raise ParseError(f"bad dimensions {tokens}", line=line) from None
    if any(d <= 0 for d in dims):
        raise ParseError(f"non-positive dimensions {dims}", line=line)
    return dims


def _parse_grid(lines) -> Picture3D:
    X, Y, Z = _parse_dims(lines[0].split(), 1)
    expected = 1 + Z * Y + (Z - 1)
    if len(lines) != expected:
        raise ParseError(
            f"size mismatch: expected {expected} lines for {X} {Y} {Z}, "
            f"got {len(lines)}", line=len(lines))
    fg = set()
    ln = 1
    for z in range(Z):
        if z > 0:
            if lines[ln] != "":
                raise ParseError("expected blank line between blocks",
                                 line=ln + 1)
            ln += 1
        for y in range(Y):
            row = lines[ln]
            ln += 1
            if len(row) != X:
                raise ParseError(
                    f"size mismatch: expected {X} characters, got {len(row)}",
                    line=ln)
            for x, ch in enumerate(row):
                if ch == "1":
                    fg.add((x, y, z))
                elif ch != "0":
                    raise ParseError(f"illegal character {ch!r} at offset {x}",
                                     line=ln)
    return Picture3D((X, Y, Z), frozenset(fg))


def _parse_coords(lines) -> Picture3D:
    head = lines[0].split()
    dims = _parse_dims(head[1:], 1)
    fg = set()
    for i, row in enumerate(lines[1:], start=2):
        toks = row.split()
        if len(toks) != 3:
            raise ParseError(f"expected 'x y z', got {row!r}", line=i)
        try:
            p = tuple(int(t) for t in toks)
        except ValueError:
            raise ParseError(f"bad coordinate {row!r}", line=i) from None
        if not all(0 <= c < d for c, d in zip(p, dims)):
            raise ParseError(f"voxel {p} outside dims {dims}", line=i)
        if p in fg:
            raise ParseError(f"duplicate voxel {p}", line=i)
        fg.add(p)
    return Picture3D(dims, frozenset(fg))


def serialize_picture(p: Picture3D) -> str:
    """Canonical dense grid form; parse(serialize(p)) == p."""
    X, Y, Z = p.dims
    blocks = []
    for z in range(Z):
        rows = []
        for y in range(Y):
            rows.append("".join("1" if (x, y, z) in p.foreground else "0"
                                for x in range(X)))
        blocks.append("\n".join(rows))
    return f"{X} {Y} {Z}\n" + "\n\n".join(blocks) + "\n"


def foreground_components(p: Picture3D) -> int:
    """Number of 26-connected foreground components."""
    todo = set(p.foreground)
    count = 0
    while todo:
        count += 1
        stack = [todo.pop()]
        while stack:
            x, y, z = stack.pop()
            for dx, dy, dz in _TWENTYSIX:
                q = (x + dx, y + dy, z + dz)
                if q in todo:
                    todo.remove(q)
                    stack.append(q)
    return count


def complement_picture(p: Picture3D, padding: int = 1) -> Picture3D:
    """The background of p inside its grid box expanded by ``padding`` in
    all six directions, re-anchored at the origin."""
    if padding < 0:
        raise UsageError("padding must be nonnegative")
    X, Y, Z = p.dims
    dims = (X + 2 * padding, Y + 2 * padding, Z + 2 * padding)
    fg = set()
    for x, y, z in product(range(dims[0]), range(dims[1]), range(dims[2])):
        old = (x - padding, y - padding, z - padding)
        if old not in p.foreground:
            fg.add((x, y, z))
    return Picture3D(dims, frozenset(fg))


# ------------------------------------------------------- cycle projection

@dataclass(frozen=True)
class VoxelCycle:
    generator: int
    dim: int
    voxels: tuple[Point3, ...]
    fallback_used: bool = False


def _boundary_voxel_of_square(square: ElementaryCube,
                              fg: frozenset[Point3]) -> Point3:
    """The single foreground voxel having this boundary square as a face."""
    x, y, z = square.base
    axis = 7 ^ square.extent  # the collapsed axis
    if axis == 1:
        cands = ((x, y, z), (x - 1, y, z))
    elif axis == 2:
        cands = ((x, y, z), (x, y - 1, z))
    else:
        cands = ((x, y, z), (x, y, z - 1))
    inside = [c for c in cands if c in fg]
    if len(inside) != 1:
        raise UsageError(f"square {square} is not a boundary square")
    return inside[0]


def _voxels_containing(cube: ElementaryCube, fg: frozenset[Point3]) -> list[Point3]:
    """Foreground voxels having the given cell as a face, ascending."""
    x, y, z = cube.base
    free = 7 ^ cube.extent
    out = []
    for m in range(8):
        if m & free != m:
            continue
        v = (x - (m & 1), y - ((m >> 1) & 1), z - ((m >> 2) & 1))
        if v in fg:
            out.append(v)
    return sorted(out)


def _is_boundary_voxel(v: Point3, fg: frozenset[Point3]) -> bool:
    x, y, z = v
    return any((x + dx, y + dy, z + dz) not in fg for dx, dy, dz in _SIX)


def decompose_simple_cycles(dQ, chain: Chain) -> list[list[int]]:
    """Split a 1-cycle into edge-disjoint simple cycles, walking greedily
    from the smallest unused edge and always taking the smallest unused
    edge at each vertex; returns lists of edge cells in walk order."""
    incident: dict[int, list[int]] = {}
    for e in sorted(chain.cells):
        for v in dQ.boundary(e).cells:
            incident.setdefault(v, []).append(e)
    unused = set(chain.cells)
    cycles: list[list[int]] = []
    while unused:
        start = min(unused)
        walk = [start]
        unused.remove(start)
        u, v = sorted(dQ.boundary(start).cells)
        origin, at = u, v
        seen_at = {origin: 0, at: 1}
        while at != origin:
            nxt = next((e for e in incident[at] if e in unused), None)
            if nxt is None:
                raise UsageError("chain is not a cycle: walk got stuck")
            unused.remove(nxt)
            walk.append(nxt)
            a, b = dQ.boundary(nxt).cells
            at = b if a == at else a
            if at in seen_at and at != origin:
                # pinch point: split off the loop walked since last visit
                k = seen_at[at]
                cycles.append(walk[k:])
                del walk[k:]
                seen_at = {w: i for w, i in seen_at.items() if i <= k}
            else:
                seen_at[at] = len(walk)
        cycles.append(walk)
    return cycles


def cycle_to_voxels(model: ATModel, generator: int, picture: Picture3D,
                    Q: CubicalComplex, dQ: CubicalComplex) -> VoxelCycle:
    """Draw the representative cycle of a generator in the picture.

    A 0-generator maps to the foreground voxel of a boundary square
    touching the vertex.  A 2-generator maps each square of its cycle to
    the single foreground voxel carrying it.  A 1-generator's cycle is
    split into simple cycles walked edge by edge: consecutive edges lying
    in one boundary square take that square's voxel; leftover edges take
    a boundary voxel 6-adjacent to the next (else previous) edge's voxel;
    failing both, any boundary voxel containing the edge is used and the
    record is flagged.
    """
    if generator not in model.inclusion:
        raise UsageError(f"cell {generator} is not a generator")
    fg = picture.foreground
    cycle = model.g(generator)
    q = cycle.dim

    if q == 0:
        vertex = next(iter(cycle.cells))
        vp = dQ.cube(vertex).base
        for sq in dQ.cells(2):
            cube = dQ.cube(sq)
            if vp in cube.vertices():
                return VoxelCycle(generator, 0,
                                  (_boundary_voxel_of_square(cube, fg),))
        raise UsageError(f"vertex {vertex} lies on no boundary square")

    if q == 2:
        voxels = {_boundary_voxel_of_square(dQ.cube(sq), fg)
                  for sq in cycle.cells}
        return VoxelCycle(generator, 2, tuple(sorted(voxels)))

    edge_squares: dict[int, set[int]] = {}
    for sq in dQ.cells(2):
        for e in dQ.boundary(sq).cells:
            edge_squares.setdefault(e, set()).add(sq)

    assigned: dict[int, Point3] = {}
    fallback = False
    for walk in decompose_simple_cycles(dQ, cycle):
        k = len(walk)
        for i, e in enumerate(walk):
            nxt = walk[(i + 1) % k]
            shared = sorted(edge_squares.get(e, set())
                            & edge_squares.get(nxt, set()))
            if shared:
                vox = _boundary_voxel_of_square(dQ.cube(shared[0]), fg)
                assigned.setdefault(e, vox)
                assigned.setdefault(nxt, vox)
        for i, e in enumerate(walk):
            if e in assigned:
                continue
            carriers = [v for v in _voxels_containing(dQ.cube(e), fg)
                        if _is_boundary_voxel(v, fg)]
            placed = False
            for nb in (walk[(i + 1) % k], walk[(i - 1) % k]):
                anchor = assigned.get(nb)
                if anchor is None:
                    continue
                ax, ay, az = anchor
                for v in carriers:
                    if (abs(v[0] - ax) + abs(v[1] - ay) + abs(v[2] - az)) == 1:
                        assigned[e] = v
                        placed = True
                        break
                if placed:
                    break
            if not placed:
                if not carriers:
                    raise UsageError(f"edge {e} lies in no boundary voxel")
                assigned[e] = carriers[0]
                fallback = True

    return VoxelCycle(generator, 1, tuple(sorted(set(assigned.values()))),
                      fallback_used=fallback)
