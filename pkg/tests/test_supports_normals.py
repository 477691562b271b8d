import pytest
from gmpy2 import mpq

from conftest import Q, interval, square
from polyconvex.errors import EmptyIntersection, NotExtremal, NotInSet
from polyconvex.polyhedra import HPolyhedron, contains, h_to_v, intersect, is_empty, set_equal
from polyconvex.supports_normals import (
    check_qualification,
    is_extremal_system,
    normal_cone,
    normal_intersection_rule,
    separate,
    support,
    support_conv_conjugate_check,
    support_epigraph,
    support_intersection,
    support_value,
)
from polyconvex.rational_lp import INF, NEG_INF

LOWER_HALF = HPolyhedron(2, (((0, 1), 0),))  # y <= 0
LEFT_HALF = HPolyhedron(2, (((1, 0), 0),))  # x <= 0
QUADRANT = HPolyhedron(2, (((-1, 0), 0), ((0, -1), 0)))


class TestSupport:
    def test_square(self):
        s = support(square(-1, 1), Q(3, 4))
        assert s.value == 7 and s.kind == "maximizer" and s.vector == Q(1, 1)

    def test_half_line(self):
        s = support(HPolyhedron(1, (((-1,), 0),)), Q(1))
        assert s.value == INF and s.kind == "ray" and s.vector[0] > 0

    def test_simplex(self):
        simplex = HPolyhedron(3, (((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0)), (((1, 1, 1), 1),))
        s = support(simplex, Q(5, 1, 2))
        assert s.value == 5 and s.vector == Q(1, 0, 0)

    def test_empty_set(self):
        assert support_value(HPolyhedron.empty(2), Q(1, 0)) == NEG_INF

    def test_epigraph_of_support(self):
        E = support_epigraph(square(0, 1))
        # sigma(1, 1) = 2, so (1, 1, 2) is on the boundary and (1, 1, 3/2) is outside
        assert contains(E, Q(1, 1, 2)) and not contains(E, (mpq(1), mpq(1), mpq(3, 2)))


class TestNormalCone:
    def test_interior(self):
        assert set_equal(normal_cone(square(-1, 1), Q(0, 0)), HPolyhedron.point(Q(0, 0)))

    def test_corner(self):
        K = normal_cone(square(-1, 1), Q(1, 1))
        assert set(h_to_v(K).rays) == {Q(1, 0), Q(0, 1)}

    def test_outside(self):
        with pytest.raises(NotInSet):
            normal_cone(square(-1, 1), Q(2, 2))


class TestExtremal:
    @pytest.mark.parametrize(
        "a, b, expected",
        [((-1, 0), (0, 1), True), ((-1, 1), (0, 2), False), ((0, 1), (3, 4), True)],
    )
    def test_intervals(self, a, b, expected):
        assert is_extremal_system(interval(*a), interval(*b)) is expected

    def test_separator_of_touching_boxes(self):
        O1 = HPolyhedron.box([-1, -1], [0, 1])
        O2 = HPolyhedron.box([0, -1], [1, 1])
        w = separate(O1, O2)
        assert w.separator == Q(1, 0)
        assert w.sup_value == 0 == w.inf_value
        assert w.translation == Q(-1, 0)
        moved = HPolyhedron.box([-2, -1], [-1, 1])  # O1 + a
        assert is_empty(intersect(moved, O2))

    def test_point_and_interval(self):
        w = separate(HPolyhedron.point(Q(0)), interval(1, 2))
        assert w.separator[0] > 0 and w.sup_value <= w.inf_value

    def test_overlapping_boxes_rejected(self):
        with pytest.raises(NotExtremal):
            separate(square(-1, 1), square(0, 2))


class TestQualification:
    def test_overlapping_squares(self):
        qc = check_qualification(square(-1, 1), square(0, 2))
        assert qc.difference_interiority and qc.interiority_1_meets_2 and qc.attouch_brezis

    def test_touching_intervals(self):
        # conic hull of [-2, 0] is a half-line, not a subspace
        qc = check_qualification(interval(-1, 0), interval(0, 1))
        assert not qc.difference_interiority
        assert not qc.attouch_brezis

    def test_points(self):
        qc = check_qualification(HPolyhedron.point(Q(0)), HPolyhedron.point(Q(0)))
        assert qc.attouch_brezis and not qc.difference_interiority


class TestIntersectionSupport:
    def test_squares(self):
        r = support_intersection(square(-1, 1), square(0, 2), Q(-1, -1))
        assert r.value == 0
        assert support_value(square(-1, 1), r.x1star) + support_value(square(0, 2), r.x2star) == 0
        assert tuple(a + b for a, b in zip(r.x1star, r.x2star)) == Q(-1, -1)

    def test_same_set(self):
        P = square(0, 3)
        r = support_intersection(P, P, Q(1, 2))
        assert r.value == support_value(P, Q(1, 2)) == 9

    def test_half_planes(self):
        r = support_intersection(LOWER_HALF, LEFT_HALF, Q(1, 1))
        assert r.value == 0
        assert r.x1star == Q(0, 1) and r.x2star == Q(1, 0)

    @pytest.mark.parametrize(
        "x, expected",
        [((mpq(3, 2),), (0, 0)), ((mpq(1, 2),), (INF, INF)), ((mpq(5),), (INF, INF))],
    )
    def test_convolution_conjugate(self, x, expected):
        assert support_conv_conjugate_check(interval(0, 2), interval(1, 3), x) == expected

    def test_convolution_needs_overlap(self):
        with pytest.raises(EmptyIntersection):
            support_conv_conjugate_check(interval(0, 1), interval(2, 3), Q(0))


class TestNormalIntersectionRule:
    def test_half_planes(self):
        r = normal_intersection_rule(LOWER_HALF, LEFT_HALF, Q(0, 0))
        assert r.equal and set_equal(r.lhs, QUADRANT)

    def test_interior_point(self):
        r = normal_intersection_rule(square(-1, 1), square(-2, 2), Q(0, 0))
        assert r.equal and set_equal(r.rhs, HPolyhedron.point(Q(0, 0)))

    def test_shared_edge(self):
        O1 = square(0, 1)
        O2 = HPolyhedron.box([1, 0], [2, 1])
        r = normal_intersection_rule(O1, O2, Q(1, 0))
        assert r.equal
        assert set_equal(r.lhs, HPolyhedron(2, (((0, 1), 0),)))
        assert set_equal(intersect(O1, O2), HPolyhedron.box([1, 0], [1, 1]))
