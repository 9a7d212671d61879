"""Moment-angle and colouring constructions, censuses, preimages, cusps."""

import pytest

from cuspforge.chains import chain_complex_of, homology
from cuspforge.errors import ValidationError
from cuspforge.filling import dehn_fill, enumerate_filling_choices
from cuspforge.isomorphism import cubical_isomorphism
from cuspforge.lattice import cube_lattice, polygon_lattice
from cuspforge.moment_angle import (
    Colouring,
    colour_manifold,
    cusp_census,
    manifold_check,
    preimage_components,
    real_moment_angle,
    truncated_quotient,
)
from cuspforge.polytopes import gosset, ideal_dual
from cuspforge.simplicial import (
    build_simplicial,
    boundary_of_simplex,
    octahedron_boundary,
    two_points,
)


def test_two_points_give_the_square_boundary():
    Z = real_moment_angle(two_points())
    assert Z.cell_counts() == (4, 4)
    assert homology(chain_complex_of(Z, "Z")).betti == (1, 1)


def test_triangle_boundary_gives_cube_surface():
    Z = real_moment_angle(boundary_of_simplex(2))
    assert Z.num_cells() == 26
    assert homology(chain_complex_of(Z, "Z")).betti == (1, 0, 1)


def test_octahedron_gives_3_torus():
    Z = real_moment_angle(octahedron_boundary())
    assert len(Z.vertices()) == 64
    assert len(Z.cells_of_dim(3)) == 64
    assert homology(chain_complex_of(Z, "Z2")).betti == (1, 3, 3, 1)


def test_colouring_validation():
    with pytest.raises(ValidationError):
        Colouring(2, (0, 1))
    sq = polygon_lattice(4)
    bad = Colouring(2, (1, 1, 2, 2))  # adjacent facets share a colour
    assert not bad.proper_for(sq)
    with pytest.raises(ValidationError):
        colour_manifold(sq, bad)


def test_distinct_coloured_cube_is_t3():
    C = cube_lattice(3)
    Z = colour_manifold(C, Colouring.distinct(6))
    assert len(Z.vertices()) == 64  # 2^6 copies of the cube
    T3 = real_moment_angle(octahedron_boundary())
    assert cubical_isomorphism(Z, T3) is not None


def test_distinct_coloured_square_is_t2():
    Z = colour_manifold(polygon_lattice(4), Colouring.distinct(4))
    assert Z.cell_counts() == (16, 32, 16)
    assert homology(chain_complex_of(Z, "Z")).betti == (1, 2, 1)


def test_klein_bottle_colouring():
    Z = colour_manifold(polygon_lattice(4), Colouring(2, (0b01, 0b10, 0b11, 0b10)))
    h = homology(chain_complex_of(Z, "Z"))
    assert h.betti == (1, 1, 0)
    assert h.torsion[1] == (2,)


def test_manifold_check_passes_on_torus():
    K = octahedron_boundary()
    report = manifold_check(real_moment_angle(K), K)
    assert report.passed
    assert len(report.vertex_results) == 64


def test_manifold_check_fails_on_disc():
    K = build_simplicial([(0, 1)])  # a single edge: RZ is the solid square
    Z = real_moment_angle(K)
    report = manifold_check(Z, K)
    assert not report.passed
    assert not report.target_closed
    assert any("sphere" in f for f in report.failures)


def test_census_small_cases():
    P3 = ideal_dual(gosset(3))
    census = cusp_census(P3)
    assert census.total == 12
    assert [e.components for e in census.entries] == [4, 4, 4]
    assert all(e.incident_facets == 4 for e in census.entries)
    assert all(e.section == "2-torus" for e in census.entries)

    P4 = ideal_dual(gosset(4))
    census4 = cusp_census(P4)
    assert census4.total == 80
    assert all(e.components == 16 for e in census4.entries)


def test_census_symbolic_p8():
    P8 = ideal_dual(gosset(8))
    census = cusp_census(P8)
    assert census.total == 2160 * 2 ** 226
    assert all(e.incident_facets == 14 for e in census.entries)
    assert census.magnitude() == "2.32e71"


def test_census_with_non_distinct_colouring():
    P3 = ideal_dual(gosset(3))
    # colour the six facets into (Z/2)^3 properly: use vertex-disjoint
    # structure of the bipyramid dual; fall back to explicit span counts
    colouring = Colouring(6, tuple(1 << i for i in range(6)))
    assert cusp_census(P3, colouring).total == 12
    small = Colouring(4, (0b0001, 0b0010, 0b0100, 0b1000, 0b0111, 0b1011))
    census = cusp_census(P3, small)
    for e in census.entries:
        assert e.components == 1  # spans are full at every ideal vertex


def test_preimage_components_match_formula():
    for n in (3, 4):
        G = gosset(n)
        P = ideal_dual(G)
        choice = next(enumerate_filling_choices(P))
        filled = dehn_fill(P, choice)
        Z = colour_manifold(filled.lattice, Colouring.distinct(P.num_facets))
        pairs = list(filled.filling_faces.values())
        f = P.num_facets
        total = 0
        for pr in pairs:
            rep = preimage_components(Z, tuple(sorted(pr)), pairs)
            assert rep.copies == 1 << (f - 2)
            assert all(c == 1 << (2 * n - 4) for c in rep.cells_per_component)
            total += rep.components
        assert total == cusp_census(P).total


def test_preimage_rejects_non_filling_face():
    G = gosset(3)
    P = ideal_dual(G)
    choice = next(enumerate_filling_choices(P))
    filled = dehn_fill(P, choice)
    Z = colour_manifold(filled.lattice, Colouring.distinct(6))
    pairs = list(filled.filling_faces.values())
    ordinary_ridge = next(
        tuple(sorted(s)) for k, s in filled.lattice.faces
        if k == 1 and s not in set(map(frozenset, pairs))
    )
    with pytest.raises(ValidationError):
        preimage_components(Z, ordinary_ridge, pairs)


def test_truncated_quotient_structure():
    P = ideal_dual(gosset(3))
    cusped = truncated_quotient(P)
    Q = cusped.quotient
    assert Q.euler_characteristic() == 0
    assert len(cusped.components) == 12
    data = chain_complex_of(Q, "Z")
    from cuspforge.chains import subcomplex_selection

    for comp in cusped.components[:3]:
        sel = subcomplex_selection(data, comp.keys_per_dim)
        h = homology(sel.data)
        assert h.betti == (1, 2, 1)
        assert all(not t for t in h.torsion)


def test_quotient_matches_moment_angle_in_dimension_4():
    from cuspforge.filling import diagonals_from_filling, subdivide_cross_facets

    G = gosset(4)
    P = ideal_dual(G)
    choice = next(enumerate_filling_choices(P))
    filled = dehn_fill(P, choice)
    K = subdivide_cross_facets(G, diagonals_from_filling(G, choice))
    Z1 = colour_manifold(filled.lattice, Colouring.distinct(10))
    Z2 = real_moment_angle(K)
    assert Z1.num_cells() == Z2.num_cells() == 23104
    assert cubical_isomorphism(Z1, Z2) is not None


def test_orientability_agrees_with_top_integral_homology():
    from cuspforge.characteristic import orientability

    cases = [
        (real_moment_angle(boundary_of_simplex(2)), True),
        (colour_manifold(polygon_lattice(4), Colouring.distinct(4)), True),
        (colour_manifold(polygon_lattice(4), Colouring(2, (0b01, 0b10, 0b11, 0b10))), False),
        (colour_manifold(polygon_lattice(3), Colouring(2, (0b01, 0b10, 0b11))), False),
    ]
    for Z, expect in cases:
        data = chain_complex_of(Z, "Z")
        assert orientability(Z, data).orientable == expect
        h = homology(data)
        assert (h.betti[-1] == 1) == expect  # H_top = Z exactly when orientable


def test_proposition_isomorphism_holds_even_after_relabelling():
    from cuspforge.filling import diagonals_from_filling, subdivide_cross_facets

    G = gosset(3)
    P = ideal_dual(G)
    choice = next(enumerate_filling_choices(P))
    filled = dehn_fill(P, choice)
    K = subdivide_cross_facets(G, diagonals_from_filling(G, choice))
    Z1 = colour_manifold(filled.lattice, Colouring.distinct(6))
    Z2 = real_moment_angle(K)
    assert cubical_isomorphism(Z1, Z2) is not None
    shuffled = Z2.relabel({5: 0, 0: 5, 1: 1, 2: 2, 3: 3, 4: 4})
    assert cubical_isomorphism(Z1, shuffled) is not None
