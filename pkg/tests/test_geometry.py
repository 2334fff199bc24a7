from fractions import Fraction as F
from itertools import combinations, combinations_with_replacement, permutations, product

import pytest
import sympy

from permix.core import DomainError, FamilySpec, embed_config
from permix.geometry import (HPolytope, UnboundedPolytopeError, VPolytope, _body_of,
                             _FaceLattice, build_hrep, enumerate_vertices, family_polytope,
                             make_hpolytope, metric_gram_determinants, minkowski_sum,
                             mixed_volume, mixed_volume_of, normalizer_V, scaled_sum_volume,
                             superaffine_check, superaffine_gap, volume)

H4 = FamilySpec(4, 1, 3)
G4 = FamilySpec(4, 1, 2)
H3 = FamilySpec(3, 1, 2)


def det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def box(d):
    cons = [(tuple(int(i == k) for i in range(d)), 0) for k in range(d)]
    cons += [(tuple(-int(i == k) for i in range(d)), -1) for k in range(d)]
    return make_hpolytope(d, cons)


def octahedron():
    # sum(v) = 0 and -1 <= v_i <= 1 in R^4, in the coordinates v1..v3
    cons = [((1, 0, 0), -1), ((0, 1, 0), -1), ((0, 0, 1), -1),
            ((-1, 0, 0), -1), ((0, -1, 0), -1), ((0, 0, -1), -1),
            ((-1, -1, -1), -1), ((1, 1, 1), -1)]
    return make_hpolytope(3, cons)


# -- build_hrep / vertices -----------------------------------------------------

def test_build_hrep_simplex():
    p = build_hrep(H4, embed_config(H4, F(3, 4)))
    assert p.dim == 3
    # -1/2 <= v_i and v_i <= 3/2 for all four coordinates
    offsets = dict(p.constraints)
    assert offsets[(1, 0, 0)] == F(-1, 2)
    assert offsets[(-1, -1, -1)] == F(-1, 2)
    assert offsets[(-1, 0, 0)] == F(-3, 2)
    assert offsets[(1, 1, 1)] == F(-3, 2)
    verts = enumerate_vertices(p).vertices
    assert len(verts) == 4
    assert (F(3, 2), F(-1, 2), F(-1, 2)) in verts


@pytest.mark.parametrize("u", [0, 1])
def test_endpoint_polytopes_are_points(u):
    for fam in (H4, G4, FamilySpec(5, 2, 3)):
        verts = enumerate_vertices(family_polytope(fam, u)).vertices
        assert verts == ((0,) * fam.m,)


@pytest.mark.parametrize("family, u, count", [
    (H4, F(1, 4), 4), (H4, F(3, 4), 4), (H4, F(1, 2), 6),
    (G4, F(1, 2), 8), (G4, F(3, 4), 4), (G4, F(1, 4), 8), (G4, F(5, 8), 16),
])
def test_vertex_counts(family, u, count):
    assert len(enumerate_vertices(family_polytope(family, u)).vertices) == count


def test_vertices_satisfy_constraints_and_are_extreme():
    p = family_polytope(G4, F(5, 8))
    verts = enumerate_vertices(p).vertices
    for v in verts:
        assert p.contains(v)
        tight = [g for g, b in p.constraints if sum(x * y for x, y in zip(g, v)) == b]
        assert sympy.Matrix(tight).rank() == 3


def test_unbounded_is_reported():
    p = make_hpolytope(2, [((1, 0), 0), ((0, 1), 0)])
    with pytest.raises(UnboundedPolytopeError):
        enumerate_vertices(p)


def test_empty_polytope():
    y = {T: F(-1) for T in H3.facets}
    p = build_hrep(H3, y)
    assert p.is_empty
    assert volume(p) == 0


def test_build_hrep_missing_facet():
    y = embed_config(H4, F(1, 2))
    y.pop(next(iter(y)))
    with pytest.raises(DomainError):
        build_hrep(H4, y)


# -- minkowski sums --------------------------------------------------------------

def test_minkowski_single_summand():
    p = family_polytope(G4, F(5, 8))
    s = minkowski_sum([p])
    assert set(enumerate_vertices(s).vertices) == set(enumerate_vertices(p).vertices)
    assert volume(s) == volume(p)


def test_minkowski_with_point_translates():
    p = family_polytope(H4, F(1, 2))
    t = (F(1, 3), F(-2), F(5, 7))
    s = minkowski_sum([p, VPolytope((t,))])
    shifted = {tuple(a + b for a, b in zip(v, t)) for v in enumerate_vertices(p).vertices}
    assert set(enumerate_vertices(s).vertices) == shifted


def test_minkowski_simplex_plus_dual_is_cuboctahedron():
    s = minkowski_sum([family_polytope(H4, F(1, 4)), family_polytope(H4, F(3, 4))])
    verts = enumerate_vertices(s).vertices
    assert len(verts) == 12
    lat = _FaceLattice(list(verts), s.constraints)
    facets = lat.facets(frozenset(range(12)), 3)
    # 8 triangles and 6 squares; the squares have normals outside H
    assert sorted(len(f) for f in facets) == [3] * 8 + [4] * 6


def test_minkowski_hrep_matches_vertex_sum_hull():
    # every vertex of the sum is a sum of vertices, and every pairwise sum lies inside
    a, b = family_polytope(G4, F(1, 4)), family_polytope(G4, F(5, 8))
    s = minkowski_sum([a, b])
    pair_sums = {tuple(x + y for x, y in zip(p, q))
                 for p in enumerate_vertices(a).vertices for q in enumerate_vertices(b).vertices}
    verts = set(enumerate_vertices(s).vertices)
    assert verts <= pair_sums
    assert all(s.contains(w) for w in pair_sums)


def test_minkowski_of_vpolytopes():
    sq = VPolytope(((0, 0), (1, 0), (0, 1), (1, 1)))
    tri = VPolytope(((0, 0), (2, 0), (0, 2)))
    s = minkowski_sum([sq, tri])
    # area(P+Q) = area P + area Q + 2 V(P,Q); V(square, triangle) = 2 here
    assert volume(s) == 1 + 2 + 2 * 2


def test_minkowski_dimension_mismatch():
    with pytest.raises(DomainError):
        minkowski_sum([box(2), box(3)])


# -- volume -------------------------------------------------------------------

def test_volume_of_point_and_box():
    assert volume(family_polytope(H4, 0)) == 0
    for d in (1, 2, 3, 4):
        assert volume(box(d)) == 1
        assert volume(box(d), "boundary") == 1


def test_octahedron_volume_three_ways():
    p = octahedron()
    verts = enumerate_vertices(p).vertices
    assert len(verts) == 6
    # fan of four tetrahedra around the axis between two opposite vertices
    top = (F(1), F(1), F(-1))
    bottom = tuple(-x for x in top)
    ring = [(1, -1, 1), (-1, 1, 1), (-1, 1, -1), (1, -1, -1)]
    assert all(tuple(F(x) for x in r) in verts for r in ring)
    by_hand = F(0)
    for a, b in zip(ring, ring[1:] + ring[:1]):
        rows = [[x - y for x, y in zip(pt, bottom)] for pt in (top, a, b)]
        by_hand += abs(det3(*rows))
    by_hand /= 6
    assert volume(p) == by_hand
    assert volume(p, "boundary") == by_hand
    assert by_hand == F(16, 3)


def test_volume_rejects_unknown_method():
    with pytest.raises(ValueError):
        volume(box(2), "monte-carlo")


def _encountered_polytopes():
    cfgs = [(F(1, 4), F(1, 2), F(3, 4)), (F(1, 8), F(1, 2), F(7, 8)), (F(3, 8), F(5, 8), F(5, 8))]
    for fam in (H4, G4, FamilySpec(4, 2, 3)):
        for cfg in cfgs:
            polys = [family_polytope(fam, u) for u in cfg]
            for k in (1, 2, 3):
                for sub in combinations(polys, k):
                    yield minkowski_sum(list(sub))


def test_two_volume_paths_agree_on_encountered_polytopes():
    for p in _encountered_polytopes():
        assert volume(p, "cone") == volume(p, "boundary")


def test_two_volume_paths_agree_n5():
    fam = FamilySpec(5, 1, 2)
    polys = [family_polytope(fam, u) for u in (F(1, 3), F(3, 5), F(4, 5))]
    for k in (1, 3):
        for sub in combinations(polys, k):
            s = minkowski_sum(list(sub))
            assert volume(s, "cone") == volume(s, "boundary")


# -- mixed volumes -------------------------------------------------------------

@pytest.mark.parametrize("cfg, ratio", [
    ((F(1, 4), F(2, 4), F(3, 4)), F(1)),
    ((F(2, 4), F(2, 4), F(2, 4)), F(4, 6)),
])
def test_mixed_volume_examples(cfg, ratio):
    assert mixed_volume(H4, cfg).ratio == ratio


@pytest.mark.parametrize("a, b", [(F(1, 4), F(1, 2)), (F(1, 3), F(5, 7)), (F(1), F(1, 2))])
def test_mixed_volume_with_endpoint_is_zero(a, b):
    for fam in (H4, G4):
        assert mixed_volume(fam, (0, a, b)).value == 0
        assert mixed_volume(fam, (a, b, 1)).value == 0


def test_normalizers():
    assert normalizer_V(H4) == 8
    # n=3: the two triangles at 1/3 and 2/3 have area 2 each and their sum, a
    # hexagon, has area 12, so V = (12 - 2 - 2) / 2
    assert normalizer_V(H3) == 4
    assert normalizer_V(G4) == F(125, 24)


def test_normalizer_metric_scale():
    grams = metric_gram_determinants(H4)
    assert grams == {"hyperplane": 4, "facet_embedding": 32}
    # in the facet embedding metric: V0 * sqrt(32) = 8 * 4 * sqrt(2) = 32 sqrt(2)
    v0 = normalizer_V(H4)
    assert (v0 ** 2) * grams["facet_embedding"] == 32 ** 2 * 2


def test_mixed_volume_symmetric_in_argument_order():
    polys = [family_polytope(G4, u) for u in (F(1, 4), F(5, 8), F(7, 8))]
    values = {mixed_volume_of(list(p)) for p in permutations(polys)}
    assert len(values) == 1


def test_mixed_volume_ratio_in_unit_interval_on_grid():
    for fam in (H4, G4, H3):
        grid = [F(k, 8) for k in range(9)]
        for cfg in combinations_with_replacement(grid, fam.m):
            r = mixed_volume(fam, cfg).ratio
            assert 0 <= r <= 1


def _fit_homogeneous(polys):
    """Fit vol(sum l_i P_i) on {1..m+1}^m by a degree-m form with sympy."""
    m = len(polys)
    monomials = [e for e in product(range(m + 1), repeat=m) if sum(e) == m]
    rows, rhs = [], []
    for lam in product(range(1, m + 2), repeat=m):
        rows.append([sympy.prod([sympy.Integer(l) ** k for l, k in zip(lam, e)])
                     for e in monomials])
        v = scaled_sum_volume(polys, lam)
        rhs.append(sympy.Rational(v.numerator, v.denominator))
    sol, params = sympy.Matrix(rows).gauss_jordan_solve(sympy.Matrix(rhs))
    assert params.shape[0] == 0
    return dict(zip(monomials, sol))


@pytest.mark.parametrize("family, cfg", [
    (H4, (F(1, 4), F(1, 2), F(3, 4))),
    (G4, (F(1, 4), F(5, 8), F(7, 8))),
    (H3, (F(1, 5), F(2, 3))),
])
def test_volume_polynomial_coefficient_matches_inclusion_exclusion(family, cfg):
    polys = [family_polytope(family, u) for u in cfg]
    coeffs = _fit_homogeneous(polys)
    m = family.m
    mixed = coeffs[(1,) * m] / sympy.factorial(m)
    expected = mixed_volume(family, cfg).value
    assert mixed == sympy.Rational(expected.numerator, expected.denominator)


# -- superaffinity ------------------------------------------------------------

def test_superaffine_examples():
    assert superaffine_check(H4, F(1, 4), F(3, 4), 1)
    assert superaffine_check(H4, F(1, 4), F(3, 4), F(1, 2))
    combo, target = superaffine_gap(H4, F(1, 4), F(3, 4), F(1, 2))
    assert combo < target
    assert superaffine_check(G4, F(1, 2), F(3, 4), F(1, 3))


def test_superaffine_alpha_one_is_equality():
    combo, target = superaffine_gap(G4, F(3, 8), F(7, 8), 1)
    assert combo == target


def test_superaffine_rejects_bad_alpha():
    with pytest.raises(DomainError):
        superaffine_check(H4, F(1, 4), F(3, 4), F(3, 2))


def test_oracle_refuses_large_n():
    with pytest.raises(DomainError):
        family_polytope(FamilySpec(8, 1, 7), F(1, 2))
