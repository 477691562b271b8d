import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q, interval, square, vertex_set
from polyconvex.polyhedra import (
    EmptySetError,
    HPolyhedron,
    affine_image,
    affine_image_by_generators,
    affine_preimage,
    conic_hull,
    contains,
    difference_position,
    h_to_v,
    is_empty,
    is_subspace,
    minkowski_diff,
    minkowski_sum,
    minkowski_sum_by_projection,
    origin_in_interior,
    polyhedron_from_generators,
    product,
    project,
    set_equal,
    set_subset,
    v_to_h,
)
from polyconvex.rational_lp import DimensionError


class TestContains:
    def test_square(self):
        P = square(-1, 1)
        assert contains(P, Q(0, 0))
        assert not contains(P, Q(2, 0))

    def test_line(self):
        assert contains(HPolyhedron(2, (), (((1, 0), 0),)), Q(0, 5))


class TestCanonicalForm:
    def test_redundant_rows_collapse(self):
        a = HPolyhedron(1, (((2,), 4), ((1,), 2), ((1,), 3)))
        assert a == HPolyhedron(1, (((1,), 2),))

    def test_json_roundtrip(self):
        P = HPolyhedron(2, (((1, 2), mpq(1, 3)),), (((1, 1), 1),))
        assert HPolyhedron.from_json(P.to_json()) == P

    def test_bad_row_length(self):
        with pytest.raises(DimensionError):
            HPolyhedron.from_json({"dim": 2, "ineq": [["1", "2"]]})


class TestProject:
    def test_triangle(self):
        T = HPolyhedron(2, (((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)))
        assert set_equal(project(T, [0]), interval(0, 1))

    def test_product_shadow(self):
        P, R = interval(-1, 2), square(0, 3)
        assert set_equal(project(product(P, R), [0]), P)

    def test_equality_eliminates(self):
        # y >= 2x and y <= 2x together leave x free
        P = HPolyhedron(2, (((2, -1), 0), ((-2, 1), 0)))
        assert set_equal(project(P, [0]), HPolyhedron.universe(1))

    def test_bad_indices(self):
        with pytest.raises(DimensionError):
            project(square(0, 1), [0, 0])


class TestMinkowski:
    def test_interval_difference(self):
        assert set_equal(minkowski_diff(interval(0, 1), interval(0, 1)), interval(-1, 1))

    def test_translation(self):
        D = minkowski_diff(square(0, 1), HPolyhedron.point(Q(2, 2)))
        assert set_equal(D, square(-2, -1))

    def test_point_minus_ray(self):
        ray = HPolyhedron(1, (((-1,), 0),))
        assert set_equal(minkowski_diff(HPolyhedron.point(Q(0)), ray), HPolyhedron(1, (((1,), 0),)))

    def test_sum_of_squares(self):
        assert set_equal(minkowski_sum(square(0, 1), square(-1, 1)), square(-1, 2))


class TestInteriorAndCones:
    def test_origin_interior(self):
        assert origin_in_interior(square(-1, 1))
        assert not origin_in_interior(interval(0, 1))
        assert not origin_in_interior(HPolyhedron.point(Q(0)))

    def test_conic_hull_point(self):
        K = conic_hull(HPolyhedron.point(Q(1, 1)))
        g = h_to_v(K)
        assert g.rays == ((1, 1),) and not g.lineality

    def test_conic_hull_symmetric_interval(self):
        assert set_equal(conic_hull(interval(-1, 1)), HPolyhedron.universe(1))

    def test_conic_hull_positive_interval(self):
        assert set_equal(conic_hull(interval(1, 2)), HPolyhedron(1, (((-1,), 0),)))

    def test_conic_hull_of_empty(self):
        with pytest.raises(EmptySetError):
            conic_hull(HPolyhedron.empty(2))

    @pytest.mark.parametrize(
        "K, expected",
        [
            (HPolyhedron.universe(2), True),
            (HPolyhedron(1, (((-1,), 0),)), False),
            (HPolyhedron.point(Q(0, 0)), True),
        ],
    )
    def test_is_subspace(self, K, expected):
        assert is_subspace(K) is expected


class TestDoubleDescription:
    def test_unit_square(self, unit_square):
        g = h_to_v(unit_square)
        assert set(g.vertices) == {Q(0, 0), Q(1, 0), Q(0, 1), Q(1, 1)}
        assert not g.rays

    def test_half_line(self):
        g = h_to_v(HPolyhedron(1, (((-1,), 0),)))
        assert g.vertices == (Q(0),) and g.rays == (Q(1),)

    def test_abs_epigraph(self):
        g = h_to_v(HPolyhedron(2, (((1, -1), 0), ((-1, -1), 0))))
        assert g.vertices == (Q(0, 0),)
        assert set(g.rays) == {Q(1, 1), Q(-1, 1)}

    def test_empty_raises(self):
        with pytest.raises(EmptySetError):
            h_to_v(HPolyhedron.empty(2))

    def test_cube_roundtrip(self):
        C = square(-1, 1, 3)
        assert set_equal(v_to_h(h_to_v(C)), C)

    def test_from_generators(self):
        P = polyhedron_from_generators([Q(0, 0)], [Q(1, 0)], [Q(0, 1)])
        assert set_equal(P, HPolyhedron(2, (((-1, 0), 0),)))


class TestAffine:
    def test_image(self):
        assert set_equal(affine_image(interval(0, 1), [[2]], [1]), interval(1, 3))

    def test_preimage(self):
        assert set_equal(affine_preimage(interval(0, 1), [[2]]), interval(0, mpq(1, 2)))

    def test_sum_map(self, unit_square):
        assert set_equal(affine_image(unit_square, [[1, 1]]), interval(0, 2))


class TestInclusion:
    def test_subset(self):
        assert set_subset(interval(0, 1), interval(0, 2))
        assert not set_subset(interval(0, 2), interval(0, 1))

    def test_two_forms_of_a_square(self, unit_square):
        other = HPolyhedron(2, (((1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((0, -1), 0), ((1, 1), 2)))
        assert set_equal(unit_square, other)

    def test_empty_subset_of_anything(self):
        assert set_subset(HPolyhedron.empty(1), interval(5, 6))


# ---------------------------------------------------------------------------
# properties on random small polyhedra


coef = st.integers(-3, 3)


@st.composite
def polytopes(draw, dim=2):
    """The box of radius 3 around the origin cut by a few random halfspaces that keep the origin."""
    rows = [(tuple(s * int(j == i) for j in range(dim)), 3) for i in range(dim) for s in (1, -1)]
    for _ in range(draw(st.integers(0, 3))):
        a = tuple(draw(coef) for _ in range(dim))
        rows.append((a, draw(st.integers(0, 4))))
    return HPolyhedron(dim, tuple(rows))


@settings(max_examples=40, deadline=None)
@given(polytopes(2))
def test_h_v_h_roundtrip(P):
    assert set_equal(v_to_h(h_to_v(P)), P)


@settings(max_examples=40, deadline=None)
@given(polytopes(2))
def test_vertices_belong_and_are_tight(P):
    for v in vertex_set(P):
        assert contains(P, v)
        tight = [a for a, b in P.ineq if sum(x * y for x, y in zip(a, v)) == b]
        assert len(tight) >= 2


@settings(max_examples=25, deadline=None)
@given(polytopes(2), polytopes(1))
def test_projection_of_product(P, R):
    assert set_equal(project(product(P, R), [0, 1]), P)
    assert set_equal(project(product(P, R), [2]), R)


@settings(max_examples=25, deadline=None)
@given(polytopes(2), polytopes(2))
def test_minkowski_sum_vertices(P, R):
    """Every pairwise vertex sum lies in the sum, and every vertex of the sum is a pairwise sum."""
    S = minkowski_sum(P, R)
    pv, rv = vertex_set(P), vertex_set(R)
    sums = {tuple(a + b for a, b in zip(u, v)) for u in pv for v in rv}
    assert all(contains(S, s) for s in sums)
    assert vertex_set(S) <= sums


@settings(max_examples=25, deadline=None)
@given(polytopes(2))
def test_conic_hull_idempotent(P):
    if is_empty(P):
        return
    K = conic_hull(P)
    assert set_equal(conic_hull(K), K)


@st.composite
def degenerate_polytopes(draw, dim=4):
    """A box with many extra rows tight at one planted integer point, so vertices are highly degenerate."""
    p = [draw(st.integers(-2, 2)) for _ in range(dim)]
    rows = [(tuple(s * int(j == i) for j in range(dim)), 3 + s * p[i]) for i in range(dim) for s in (1, -1)]
    for _ in range(draw(st.integers(6, 14))):
        a = tuple(draw(coef) for _ in range(dim))
        rows.append((a, sum(x * y for x, y in zip(a, p)) + draw(st.sampled_from((0, 0, 0, 1)))))
    return HPolyhedron(dim, tuple(rows))


def shadow_of_generators(P, keep):
    g = h_to_v(P)
    pick = lambda vs: [tuple(v[k] for k in keep) for v in vs]
    return polyhedron_from_generators(pick(g.vertices), pick(g.rays), pick(g.lineality), dim=len(keep))


@settings(max_examples=60, deadline=None)
@given(degenerate_polytopes(), st.sampled_from([(0,), (0, 3), (1, 2), (2, 0, 3)]))
def test_projection_matches_projected_generators(P, keep):
    assert set_equal(project(P, keep), shadow_of_generators(P, keep))


def test_projection_of_degenerate_point_keeps_every_side():
    """All fourteen rows are tight at one point; the shadow must still pin x to -2."""
    rows = [
        ((-3, 1, 3, 0), 1), ((-2, 0, -3, -1), 0), ((-1, -1, -3, -1), 3), ((-1, 0, 0, 0), 3),
        ((-1, 2, -3, 0), 10), ((0, -1, 0, 0), 0), ((0, 0, -1, 0), 3), ((0, 0, 1, 0), -1),
        ((0, 1, 0, 0), 2), ((0, 3, -2, 0), 7), ((1, 0, 0, 0), -1), ((2, -3, 2, 0), -11),
        ((2, 1, 2, 0), -5), ((3, -1, -1, 0), -5),
    ]
    P = HPolyhedron(4, tuple(rows))
    expected = HPolyhedron(2, (((1, 0), -2), ((-1, 0), 2), ((0, -1), -10)))
    assert set_equal(project(P, [0, 3]), expected)


@settings(max_examples=30, deadline=None)
@given(degenerate_polytopes(3), polytopes(3))
def test_minkowski_sum_routes_agree(P, R):
    assert set_equal(minkowski_sum(P, R), minkowski_sum_by_projection(P, R))


def test_minkowski_sum_with_unbounded_summand():
    half = HPolyhedron(2, (((0, -1), 0),), (((1, 0), 0),))  # x = 0, y >= 0
    S = minkowski_sum(square(0, 1), half)
    assert set_equal(S, HPolyhedron(2, (((1, 0), 1), ((-1, 0), 0), ((0, -1), 0))))
    assert set_equal(S, minkowski_sum_by_projection(square(0, 1), half))


@settings(max_examples=30, deadline=None)
@given(degenerate_polytopes(4), st.lists(st.lists(coef, min_size=4, max_size=4), min_size=1, max_size=3))
def test_affine_image_routes_agree(P, A):
    assert set_equal(affine_image_by_generators(P, A, [1] * len(A)), affine_image(P, A, [1] * len(A)))


@st.composite
def touching_sets(draw, dim=2):
    """Boxes that may be flat or open on a side, cut by a row through a lattice point; pairs of these often touch."""
    rows = []
    for i in range(dim):
        lo = draw(st.integers(-2, 1))
        hi = lo + draw(st.integers(0, 2))
        e = tuple(int(j == i) for j in range(dim))
        if draw(st.integers(0, 4)):
            rows.append((e, hi))
        rows.append((tuple(-v for v in e), -lo))
    if draw(st.booleans()):
        a = tuple(draw(coef) for _ in range(dim))
        rows.append((a, draw(st.integers(-1, 1))))
    return HPolyhedron(dim, tuple(rows))


@settings(max_examples=80, deadline=None)
@given(touching_sets(2), touching_sets(2))
def test_difference_position_matches_h_form(P, R):
    D = minkowski_diff(P, R)
    in_ri = not is_empty(D) and is_subspace(conic_hull(D))
    assert difference_position(P, R) == (in_ri, origin_in_interior(D))
