"""Dehn filling, cross-facet subdivision, and the duality consistency check."""

from fractions import Fraction
from itertools import product

import pytest

from cuspforge.errors import ValidationError
from cuspforge.filling import (
    DiagonalChoice,
    FillingChoice,
    auto_diagonals,
    dehn_fill,
    diagonals_from_filling,
    duality_check,
    enumerate_filling_choices,
    is_simple,
    subdivide_cross_facets,
)
from cuspforge.isomorphism import find_isomorphism
from cuspforge.lattice import dualize
from cuspforge.polytopes import gosset, ideal_dual
from cuspforge.simplicial import octahedron_boundary


def test_bipyramid_has_eight_choices_two_cubes():
    G = gosset(3)
    P = ideal_dual(G)
    choices = list(enumerate_filling_choices(P))
    assert len(choices) == 8
    oct_b = octahedron_boundary()
    cubes = 0
    for c in choices:
        filled = dehn_fill(P, c)
        assert is_simple(filled.lattice)
        assert filled.lattice.num_facets == 6
        assert filled.lattice.f_vector() == (8, 12, 6)
        if find_isomorphism(dualize(filled.lattice), oct_b) is not None:
            cubes += 1
    assert cubes == 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_per_vertex_choice_count_is_n_minus_one(n):
    P = ideal_dual(gosset(n))
    assert all(len(P.axes_of(v)) == n - 1 for v in P.ideal_vertices)


def test_filling_preserves_untouched_faces_and_adds_cubes():
    P = ideal_dual(gosset(4))
    choice = next(enumerate_filling_choices(P))
    filled = dehn_fill(P, choice)
    ideal = set(P.ideal_vertices)
    old_faces = {s for k, s in P.lattice.faces if not (k == 0 and s in ideal)}
    new_faces = {s for k, s in filled.lattice.faces} - old_faces
    assert old_faces <= {s for _, s in filled.lattice.faces}
    ranks = sorted(filled.lattice.rank_of(s) for s in filled.filling_faces.values())
    assert ranks == [P.n - 2] * len(P.ideal_vertices)
    assert set(filled.filling_faces.values()) <= new_faces


def test_missing_and_invalid_choices_rejected():
    P = ideal_dual(gosset(3))
    with pytest.raises(ValidationError):
        dehn_fill(P, FillingChoice({}))
    bad = FillingChoice({frozenset(v): 99 for v in P.ideal_vertices})
    with pytest.raises(ValidationError):
        dehn_fill(P, bad)


def cross_subdivision_tops(G, facet_id, pair_idx):
    d = DiagonalChoice({i: (pair_idx if i == facet_id else 0) for i in G.cross_facet_ids()})
    K = subdivide_cross_facets(G, d)
    fv = G.facet_vertex_sets[facet_id]
    return [f for f in K.facets if set(f) <= fv]


def test_square_splits_into_two_triangles():
    G = gosset(3)
    facet = G.cross_facet_ids()[0]
    tris = cross_subdivision_tops(G, facet, 0)
    assert len(tris) == 2
    assert all(len(t) == 3 for t in tris)


def test_octahedron_splits_into_four_tetrahedra():
    G = gosset(4)
    facet = G.cross_facet_ids()[0]
    tets = cross_subdivision_tops(G, facet, 0)
    assert len(tets) == 4
    assert all(len(t) == 4 for t in tets)


def simplex_volume(points):
    base = points[0]
    mat = [[Fraction(x - b) for x, b in zip(p, base)] for p in points[1:]]
    n = len(mat)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            f = mat[r][col] * inv
            if f:
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    return abs(det) / fact


def test_16_cell_splits_into_eight_simplexes_volume_oracle():
    # cross-polytope in R^4 on +-e_i; diagonal +-e_1; independent check
    # that the 2^(4-2)... times-two sign patterns of the remaining axes
    # tile the full volume 2^4/4!
    d = 4
    coords = {}
    for i in range(d):
        plus = tuple(1 if j == i else 0 for j in range(d))
        minus = tuple(-1 if j == i else 0 for j in range(d))
        coords[2 * i] = plus
        coords[2 * i + 1] = minus
    pieces = []
    for signs in product((0, 1), repeat=d - 1):
        verts = [coords[0], coords[1]]
        verts += [coords[2 * (i + 1) + s] for i, s in enumerate(signs)]
        pieces.append(verts)
    assert len(pieces) == 8
    total = sum(simplex_volume(p) for p in pieces)
    assert total == Fraction(2 ** d, 24)
    assert len({frozenset(p) for p in pieces}) == 8
    # the library's subdivision of a 16-cell facet of G^5 gives 8 simplexes
    G = gosset(5)
    facet = G.cross_facet_ids()[0]
    tops = cross_subdivision_tops(G, facet, 0)
    assert len(tops) == 8
    assert all(len(t) == 5 for t in tops)


def test_subdivision_shares_chosen_diagonal():
    G = gosset(4)
    for facet in G.cross_facet_ids():
        for idx in range(3):
            tops = cross_subdivision_tops(G, facet, idx)
            diag = set(G.antipodal_pairs[facet][idx])
            assert all(diag <= set(t) for t in tops)


def test_duality_grid_for_bipyramid():
    G = gosset(3)
    P = ideal_dual(G)
    choices = list(enumerate_filling_choices(P))
    hits = 0
    for c in choices:
        filled = dehn_fill(P, c)
        for combo in product(range(2), repeat=3):
            d = DiagonalChoice(dict(zip(sorted(G.cross_facet_ids()), combo)))
            K = subdivide_cross_facets(G, d)
            if duality_check(filled.lattice, K):
                hits += 1
    assert hits == 8  # exactly the corresponding pairs


def test_duality_vertex_facet_count_identity():
    G = gosset(4)
    P = ideal_dual(G)
    c = next(enumerate_filling_choices(P))
    filled = dehn_fill(P, c)
    K = subdivide_cross_facets(G, diagonals_from_filling(G, c))
    assert duality_check(filled.lattice, K)
    assert len(dualize(filled.lattice).facets) == len(K.facets)
    assert dualize(filled.lattice).vertex_count == K.vertex_count


@pytest.mark.parametrize("n", [4, 5])
def test_duality_holds_in_higher_dimensions(n):
    G = gosset(n)
    P = ideal_dual(G)
    choice = FillingChoice({frozenset(v): (n - 2) for v in P.ideal_vertices})
    filled = dehn_fill(P, choice)
    assert is_simple(filled.lattice)
    K = subdivide_cross_facets(G, diagonals_from_filling(G, choice))
    assert duality_check(filled.lattice, K)


def test_all_p4_fillings_simple():
    P = ideal_dual(gosset(4))
    count = 0
    for c in enumerate_filling_choices(P):
        assert is_simple(dehn_fill(P, c).lattice)
        count += 1
    assert count == 3 ** 5


def test_auto_diagonals_cover_cross_facets():
    G = gosset(4)
    d = auto_diagonals(G)
    assert sorted(d.pair_index) == G.cross_facet_ids()
    subdivide_cross_facets(G, d)
    bad = DiagonalChoice({G.simplex_facet_ids()[0]: 0})
    with pytest.raises(ValidationError):
        subdivide_cross_facets(G, bad)
