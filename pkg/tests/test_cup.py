import pytest

from conftest import (abstract_from_cubical_2complex, random_abstract_2complex,
                      random_voxels)
from voxring.atmodel import boundary_atmodel, incremental_atmodel
from voxring.chains import Chain
from voxring.cubical import (boundary_subcomplex, complex_from_voxels,
                             solid_box)
from voxring.cup import (SimplicialComplex, cup_equivalence_2d, cup_evaluate,
                         cup_product, cup_product_cubical,
                         cup_product_matrix, cup_product_simplicial,
                         cup_rank_crosscheck, discriminate_by_rank,
                         triangulate)
from voxring.errors import UsageError
from voxring.fixtures import abstract_torus, shell_3x3x3, voxel_ring
from voxring.oracle import betti_numbers


def torus_model():
    T = abstract_torus()
    return T, boundary_atmodel(T)


# ------------------------------------------------------------ cup products

def test_torus_cup_product_is_the_cavity():
    T, m = torus_model()
    a1, a2 = m.generators_of_dim(1)
    beta = m.generators_of_dim(2)[0]
    assert cup_product_cubical(m, a1, a2).cells == {beta}


def test_torus_cup_evaluation_bits():
    # on the generator square the product evaluates as 1*1 + 0*0
    T, m = torus_model()
    a1, a2 = m.generators_of_dim(1)
    beta = m.generators_of_dim(2)[0]
    vi, vj, vk, vl = T.cell_key(beta)
    first = (T.cell_of((vi, vj)), T.cell_of((vj, vl)))
    second = (T.cell_of((vi, vk)), T.cell_of((vk, vl)))
    bits = [int(a1 in m.f(first[0]).cells), int(a2 in m.f(first[1]).cells),
            int(a1 in m.f(second[0]).cells), int(a2 in m.f(second[1]).cells)]
    assert bits == [1, 1, 0, 0]
    assert cup_evaluate(m, a1, a2, Chain(2, [beta]), T) == 1


def test_cup_requires_one_generators():
    T, m = torus_model()
    v = m.generators_of_dim(0)[0]
    a1, _ = m.generators_of_dim(1)
    with pytest.raises(UsageError):
        cup_product(m, v, a1)


def test_cup_product_contractible_complex_is_zero():
    Q = complex_from_voxels(solid_box(2, 2, 1))
    m = incremental_atmodel(Q)
    M = cup_product_matrix(m)
    assert M.pairs == () and M.rank == 0


def test_cup_matrix_torus():
    T, m = torus_model()
    M = cup_product_matrix(m)
    a1, a2 = m.generators_of_dim(1)
    assert M.pairs == ((a1, a1), (a1, a2), (a2, a2))
    assert M.entries == ((0,), (1,), (0,))
    assert M.rank == 1
    assert M.asymmetric_pairs == ()
    assert M.nonzero_pairs == ((a1, a2),)


def test_cup_evaluate_is_linear(rng):
    T, m = torus_model()
    a1, a2 = m.generators_of_dim(1)
    squares = list(T.cells(2))
    for _ in range(20):
        c1 = Chain(2, rng.sample(squares, rng.randint(0, 9)))
        c2 = Chain(2, rng.sample(squares, rng.randint(0, 9)))
        lhs = cup_evaluate(m, a1, a2, c1 + c2, T)
        rhs = cup_evaluate(m, a1, a2, c1, T) ^ cup_evaluate(m, a1, a2, c2, T)
        assert lhs == rhs


def test_tetrahedron_boundary_sphere_has_no_products():
    sphere = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert betti_numbers(sphere) == (1, 0, 1)
    m = incremental_atmodel(sphere)
    M = cup_product_matrix(m)
    assert M.pairs == () and M.rank == 0


def test_simplicial_cup_type_checks():
    T, m = torus_model()
    a1, a2 = m.generators_of_dim(1)
    with pytest.raises(UsageError):
        cup_product_simplicial(m, a1, a2)


# ----------------------------------------------------------- triangulation

def test_triangulate_single_square():
    from voxring.cubical import CubicalComplex, ElementaryCube
    sq = ElementaryCube((0, 0, 0), 3)
    K = triangulate(CubicalComplex(sq.faces()))
    assert [K.n_cells(q) for q in range(3)] == [4, 5, 2]


def test_triangulate_single_voxel():
    K = triangulate(complex_from_voxels({(0, 0, 0)}))
    assert [K.n_cells(q) for q in range(4)] == [8, 19, 18, 6]
    assert K.n_cells(0) - K.n_cells(1) + K.n_cells(2) - K.n_cells(3) == 1
    assert K.check_boundary_squared() is None


def test_triangulate_preserves_betti(rng):
    for _ in range(6):
        Q = complex_from_voxels(random_voxels(rng, max_side=3))
        assert betti_numbers(triangulate(Q)) == betti_numbers(Q)


def test_triangulation_square_triangles_use_complex_edges():
    # a triangle cut from a square must have its two non-diagonal sides
    # among the original complex's edges
    Q = complex_from_voxels({(0, 0, 0), (1, 0, 0)})
    K = triangulate(Q)

    def step(u, v):
        return sum(abs(a - b) for a, b in zip(u, v))

    found = 0
    for cell in K.cells(2):
        vp, vq, vr = K.cell_key(cell)
        if step(vp, vq) == 1 and step(vq, vr) == 1:
            found += 1
            assert Q.edge_cell_between(vp, vq) is not None
            assert Q.edge_cell_between(vq, vr) is not None
    assert found == 2 * Q.n_cells(2)


# ----------------------------------------------------- equivalence checking

def test_equivalence_torus():
    T, m = torus_model()
    rep = cup_equivalence_2d(T, m, verify_each=True)
    assert rep.ok
    assert len(rep.comparisons) == 3
    assert sum(c.cubical_bit for c in rep.comparisons) == 1


def test_equivalence_hollow_cube_vacuous():
    dQ = boundary_subcomplex(complex_from_voxels({(0, 0, 0)}))
    abs_cx = abstract_from_cubical_2complex(dQ)
    m = boundary_atmodel(abs_cx)
    rep = cup_equivalence_2d(abs_cx, m)
    assert rep.ok and rep.comparisons == ()


def test_equivalence_random_complexes(rng):
    for _ in range(12):
        cx = random_abstract_2complex(rng)
        m = incremental_atmodel(cx)
        rep = cup_equivalence_2d(cx, m)
        assert rep.ok, rep.mismatches()


def test_equivalence_generator_map_is_bijection():
    T, m = torus_model()
    rep = cup_equivalence_2d(T, m)
    assert sorted(rep.generator_map) == sorted(m.generators)
    assert len(set(rep.generator_map.values())) == len(m.generators)


# ------------------------------------------------------ rank cross-checking

def test_rank_crosscheck_contractible():
    cc = cup_rank_crosscheck(complex_from_voxels(solid_box(2, 2, 2)))
    assert cc.ok and cc.cubical_rank == 0


def test_rank_crosscheck_fixtures():
    for vox in ({(0, 0, 0)}, voxel_ring(), shell_3x3x3()):
        cc = cup_rank_crosscheck(complex_from_voxels(vox))
        assert cc.ok, cc


def test_rank_crosscheck_random(rng):
    for _ in range(4):
        cc = cup_rank_crosscheck(complex_from_voxels(random_voxels(rng, max_side=3)))
        assert cc.ok, cc


def test_rank_discrimination_verdict():
    from voxring.cup import discriminate_by_rank
    from voxring.fixtures import linked_rings, unlinked_rings, picture_from_voxels
    from voxring.pipeline import analyze_picture

    tables = {}
    for name, vox in (("linked", linked_rings()), ("unlinked", unlinked_rings())):
        rep, _ = analyze_picture(picture_from_voxels(vox), complement=True)
        tables[name] = rep.cup
    assert discriminate_by_rank(tables["linked"], tables["unlinked"]) == \
        "not homotopy equivalent"
    assert discriminate_by_rank(tables["linked"], tables["linked"]) is None


def test_seven_vertex_torus_simplicial_ring():
    # the classical 7-vertex triangulated torus: the two tunnel classes
    # multiply to the cavity class
    faces = []
    for i in range(7):
        faces.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        faces.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    K = SimplicialComplex(faces)
    assert [K.n_cells(q) for q in range(3)] == [7, 21, 14]
    assert betti_numbers(K) == (1, 2, 1)
    m = incremental_atmodel(K)
    a1, a2 = m.generators_of_dim(1)
    beta = m.generators_of_dim(2)[0]
    assert cup_product_simplicial(m, a1, a2).cells == {beta}
    M = cup_product_matrix(m)
    assert M.rank == 1 and M.entries == ((0,), (1,), (0,))


def test_contractible_simplicial_cone_has_empty_table():
    # cone over a square ring: contractible, so no 1-generators at all
    cone = SimplicialComplex([(0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)])
    assert betti_numbers(cone) == (1, 0, 0)
    M = cup_product_matrix(incremental_atmodel(cone))
    assert M.pairs == () and M.cavities == () and M.rank == 0


def test_cup_order_symmetry_recorded_across_corpus(rng):
    # both argument orders must give the same cohomology class; the matrix
    # records any counterexample instead of assuming it
    for _ in range(8):
        cx = random_abstract_2complex(rng)
        M = cup_product_matrix(incremental_atmodel(cx))
        assert M.asymmetric_pairs == ()
