"""Acceptance suite: one test per shipped guarantee, each printing a
verdict line (run with ``pytest tests/test_acceptance.py -v -s``).

Frozen expectations come from three sources: classical reference values
for the torus, hollow-cube and ring-complement examples; independently
computed oracle values (rank-based Betti numbers, enumerations); and
trivially forced identities.
"""

import random
import time

from conftest import random_abstract_2complex, random_voxels, torus_with_sphere
from voxring.atmodel import (boundary_atmodel, build_spanning_forest,
                             extend_atmodel, face_reduction,
                             incremental_atmodel, verify_atmodel)
from voxring.chains import Chain
from voxring.cubical import boundary_subcomplex, complex_from_voxels, solid_box
from voxring.cup import (cup_equivalence_2d, cup_evaluate, cup_product_cubical,
                         cup_product_matrix, cup_rank_crosscheck)
from voxring.fixtures import (abstract_torus, chained_rings, linked_rings,
                              picture_from_voxels, shell_3x3x3, unlinked_rings,
                              voxel_ring)
from voxring.oracle import betti_numbers
from voxring.pipeline import analyze_picture

SEED = 20260811


def _verdict(n, ok, text):
    print(f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, text


# ---------------------------------------------------------------------- 1

def test_criterion_1_torus_cup_product():
    t0 = time.perf_counter()
    T = abstract_torus()
    m = boundary_atmodel(T)
    betti_ok = m.betti() == (1, 2, 1)

    keys = {q: sorted(T.cell_key(c) for c in m.generators_of_dim(q))
            for q in range(3)}
    # deterministic tie-breaks pin the generator cells; the representative
    # cycles below match the published ones exactly
    gens_ok = (keys[0] == [(0,)] and keys[1] == [(1, 2), (3, 4)]
               and keys[2] == [(5, 6, 7, 8)])
    a1, a2 = m.generators_of_dim(1)
    cyc1 = {T.cell_key(c) for c in m.g(a1).cells}
    cyc2 = {T.cell_key(c) for c in m.g(a2).cells}
    cycles_ok = (cyc1 == {(0, 1), (1, 2), (0, 2)}
                 and cyc2 == {(0, 3), (3, 4), (0, 4)})
    beta = m.generators_of_dim(2)[0]
    cavity_ok = m.g(beta).cells == set(T.cells(2))

    prod = cup_product_cubical(m, a1, a2)
    prod_ok = prod.cells == {beta}

    vi, vj, vk, vl = T.cell_key(beta)
    bits = [int(a1 in m.f(T.cell_of((vi, vj))).cells),
            int(a2 in m.f(T.cell_of((vj, vl))).cells),
            int(a1 in m.f(T.cell_of((vi, vk))).cells),
            int(a2 in m.f(T.cell_of((vk, vl))).cells)]
    eval_ok = bits == [1, 1, 0, 0]

    elapsed = time.perf_counter() - t0
    ok = all([betti_ok, gens_ok, cycles_ok, cavity_ok, prod_ok, eval_ok,
              elapsed < 1.0])
    _verdict(1, ok,
             f"torus: betti {m.betti()}, product = cavity generator, "
             f"evaluation {bits[0]}*{bits[1]} + {bits[2]}*{bits[3]} = 1 "
             f"({elapsed:.3f}s)")


# ---------------------------------------------------------------------- 2

def test_criterion_2_hollow_cube():
    t0 = time.perf_counter()
    dQ = boundary_subcomplex(complex_from_voxels({(0, 0, 0)}))
    forest = build_spanning_forest(dQ)
    m = boundary_atmodel(dQ, forest)
    h_ok = m.betti() == (1, 0, 1)
    two = m.generators_of_dim(2)[0]
    g_ok = m.g(two).cells == set(dQ.cells(2)) and len(m.g(two)) == 6
    elapsed = time.perf_counter() - t0
    ok = h_ok and g_ok and elapsed < 1.0
    _verdict(2, ok, f"hollow cube: |H| = {m.betti()}, g(2-generator) is the "
                    f"sum of all six squares ({elapsed:.3f}s)")


# ---------------------------------------------------------------------- 3

def _ring_shells(state):
    """Square sets of the two non-outer boundary components."""
    dQ = state.dQ
    forest = build_spanning_forest(dQ)
    root_of = {r: r for r in forest.roots}

    def resolve(v):
        trail = []
        while v not in root_of:
            trail.append(v)
            v = forest.parent[v][1]
        for t in trail:
            root_of[t] = root_of[v]
        return root_of[v]

    comp = {}
    for sq in dQ.cells(2):
        v0 = min(dQ.cell_of(f) for f in dQ.cube(sq).faces() if f.extent == 0)
        comp.setdefault(resolve(v0), set()).add(sq)
    outer = min(comp)
    return [comp[c] for c in sorted(comp) if c != outer]


def test_criterion_3_linked_circle_discrimination():
    results = {}
    for name, vox in (("unlinked", unlinked_rings()), ("linked", linked_rings())):
        t0 = time.perf_counter()
        pic = picture_from_voxels(vox)
        report, state = analyze_picture(pic, complement=True, padding=1,
                                        want_cup=True)
        elapsed = time.perf_counter() - t0
        results[name] = (report, state, elapsed)

    rep_u, _, t_u = results["unlinked"]
    rep_l, state_l, t_l = results["linked"]
    unlinked_ok = (rep_u.betti == (1, 2, 2) and rep_u.cup.rank == 0
                   and not rep_u.cup.nonzero_pairs)

    a1, a2 = state_l.model.generators_of_dim(1)
    mixed_only = rep_l.cup.nonzero_pairs == ((a1, a2),)
    shells = _ring_shells(state_l)
    shell_bits = [cup_evaluate(state_l.model, a1, a2, Chain(2, s), state_l.Q)
                  for s in shells]
    linked_ok = (rep_l.betti == (1, 2, 2) and rep_l.cup.rank == 1
                 and mixed_only and len(shells) == 2 and shell_bits == [1, 1])

    ok = unlinked_ok and linked_ok and t_u < 10 and t_l < 10
    _verdict(3, ok,
             f"complement rank 0 (unlinked, {t_u:.2f}s) vs rank 1 (linked, "
             f"{t_l:.2f}s); mixed pair only, product hits both cavities "
             f"(shell bits {shell_bits})")


# ---------------------------------------------------------------------- 4

def test_criterion_4_subdivision_equivalence():
    t0 = time.perf_counter()
    T = abstract_torus()
    rep = cup_equivalence_2d(T, boundary_atmodel(T), verify_each=True)
    assert rep.ok and len(rep.comparisons) == 3

    rng = random.Random(SEED)
    total_products = len(rep.comparisons)
    mismatches = len(rep.mismatches())
    n_complexes = 1
    while n_complexes < 51:
        if n_complexes % 4 == 0:
            cx = torus_with_sphere(rng)  # guaranteed nontrivial products
        else:
            cx = random_abstract_2complex(rng, max_squares=20)
        m = incremental_atmodel(cx)
        r = cup_equivalence_2d(cx, m, verify_each=True)
        mismatches += len(r.mismatches())
        total_products += len(r.comparisons)
        assert r.ok, r.mismatches()
        n_complexes += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and n_complexes >= 51 and elapsed < 30
    _verdict(4, ok,
             f"direct vs subdivided products equal on the torus and "
             f"{n_complexes - 1} random 2-complexes ({total_products} "
             f"products, {mismatches} mismatches, {elapsed:.1f}s); every "
             f"subdivision step re-verified")


# ------------------------------------------------------------------- 5 + 6

FIXTURE_VOXELS = {
    "single_voxel": {(0, 0, 0)},
    "block_2x2x2": solid_box(2, 2, 2),
    "block_5x5x5": solid_box(5, 5, 5),
    "shell_3x3x3": shell_3x3x3(),
    "ring": voxel_ring(),
    "rings_linked": linked_rings(),
    "rings_unlinked": unlinked_rings(),
    "rings_chain3": chained_rings(),
}


def _model_suite(vox):
    """Build every model the pipeline can produce for a voxel set and
    verify each; returns (oracle betti, list of model betti)."""
    Q = complex_from_voxels(vox)
    oracle = betti_numbers(Q)
    dQ = boundary_subcomplex(Q)
    oracle_dq = betti_numbers(dQ)

    mi = incremental_atmodel(Q)
    assert verify_atmodel(Q, mi).ok
    mb = boundary_atmodel(dQ)
    assert verify_atmodel(dQ, mb).ok
    K = face_reduction(Q, dQ)
    mk = extend_atmodel(mb, K)
    assert verify_atmodel(K, mk).ok
    assert mk.flags == ()
    assert mb.betti() == oracle_dq
    return oracle, [mi.betti(), mk.betti()]


def test_criterion_5_and_6_axioms_and_oracle_agreement():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 1)
    n_pictures = 0
    for vox in FIXTURE_VOXELS.values():
        oracle, models = _model_suite(vox)
        assert all(b == oracle for b in models)
        n_pictures += 1
    while n_pictures < 108:
        vox = random_voxels(rng, max_side=4)
        oracle, models = _model_suite(vox)
        assert all(b == oracle for b in models)
        n_pictures += 1
    elapsed = time.perf_counter() - t0
    ok = n_pictures >= 108 and elapsed < 60
    _verdict(5, ok,
             f"all seven identities hold for every model over "
             f"{n_pictures} pictures (fixtures + 100 random <=4x4x4), "
             f"{elapsed:.1f}s")
    _verdict(6, ok, f"model generator counts equal rank-based Betti numbers "
                    f"on all {n_pictures} pictures")


def test_criterion_6_rank_crosscheck_small_fixtures():
    t0 = time.perf_counter()
    names = []
    for name, vox in FIXTURE_VOXELS.items():
        pic = picture_from_voxels(vox)
        if max(pic.dims) > 5:
            continue
        cc = cup_rank_crosscheck(complex_from_voxels(vox))
        assert cc.ok, (name, cc)
        names.append(name)
    elapsed = time.perf_counter() - t0
    _verdict(6, bool(names),
             f"triangulated pipeline agrees (betti + cup rank) on "
             f"{names} ({elapsed:.1f}s)")


# ---------------------------------------------------------------------- 7

def test_criterion_7_face_reduction_effectiveness():
    Q = complex_from_voxels(solid_box(5, 5, 5))
    dQ = boundary_subcomplex(Q)
    K = face_reduction(Q, dQ)
    interior_after = K.n_cells() - dQ.n_cells()
    ratio = interior_after / Q.n_cells()
    betti_ok = betti_numbers(K) == betti_numbers(Q) == (1, 0, 0)
    # |K| includes the untouched boundary complex (602 of 1331 cells here),
    # so the reduction is measured on the cells it is allowed to remove
    ok = interior_after < 0.2 * Q.n_cells() and betti_ok
    _verdict(7, ok,
             f"5x5x5: interior shrinks {Q.n_cells() - dQ.n_cells()} -> "
             f"{interior_after} cells ({ratio:.4f} of |Q|={Q.n_cells()}; "
             f"|K|={K.n_cells()} incl. untouchable |dQ|={dQ.n_cells()}), "
             f"betti preserved")


# ---------------------------------------------------------------------- 8

def test_criterion_8_ring_chain_fixture():
    t0 = time.perf_counter()
    pic = picture_from_voxels(chained_rings())
    report, state = analyze_picture(pic, complement=True, padding=1,
                                    want_cup=True)
    oracle = betti_numbers(state.Q)
    betti_ok = report.betti == oracle == (1, 3, 3)

    # independent route: generic incremental model on the same complex
    mi = incremental_atmodel(state.Q)
    independent = cup_product_matrix(mi, state.Q)
    rank_ok = report.cup.rank == independent.rank == 2
    pairs_ok = len(report.cup.nonzero_pairs) == 2
    elapsed = time.perf_counter() - t0
    ok = betti_ok and rank_ok and pairs_ok
    _verdict(8, ok,
             f"3-ring chain complement: betti {report.betti} = oracle, "
             f"cup rank {report.cup.rank} via both routes, "
             f"{len(report.cup.nonzero_pairs)} linked pairs ({elapsed:.1f}s)")
