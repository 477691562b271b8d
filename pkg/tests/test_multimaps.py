import pytest
from gmpy2 import mpq

from conftest import Q, interval
from polyconvex.checks import adjoint_law, positive_homogeneity
from polyconvex.errors import NotInGraph
from polyconvex.multimaps import (
    Multimap,
    coderivative,
    coderivative_chain_rule,
    coderivative_intersection_rule,
    coderivative_sum_rule,
    compose,
    intersect,
    sum_decompositions,
    sum_maps,
    sum_maps_near,
)
from polyconvex.instances import dec_vec, decode_payload, generate
from polyconvex.oracles import decomposition_sampler
from polyconvex.polyhedra import HPolyhedron, h_to_v, is_empty, set_equal

ABOVE_DIAGONAL = Multimap(1, 1, HPolyhedron(2, (((1, -1), 0),)))  # y >= x
ABOVE_ANTIDIAGONAL = Multimap(1, 1, HPolyhedron(2, (((-1, -1), 0),)))  # y >= -x
ZERO_MAP = Multimap(1, 1, HPolyhedron(2, (), (((0, 1), 0),)))  # F(x) = {0}


def point(*xs):
    return HPolyhedron.point(Q(*xs))


class TestCoderivative:
    def test_half_plane_graph(self):
        assert set_equal(coderivative(ABOVE_DIAGONAL, Q(0), Q(0), Q(1)), point(1))
        assert is_empty(coderivative(ABOVE_DIAGONAL, Q(0), Q(0), Q(-1)))

    def test_linear_map(self):
        F = Multimap.linear([[1, 2]])
        assert set_equal(coderivative(F, Q(0, 0), Q(0), Q(1)), point(1, 2))

    def test_interior_point(self):
        F = Multimap(1, 1, HPolyhedron.box([-1, -1], [1, 1]))
        assert set_equal(coderivative(F, Q(0), Q(0), Q(0)), point(0))
        assert is_empty(coderivative(F, Q(0), Q(0), Q(1)))

    def test_off_graph(self):
        with pytest.raises(NotInGraph):
            coderivative(ABOVE_DIAGONAL, Q(1), Q(0), Q(1))

    def test_json(self):
        F = Multimap.from_json({"linear": {"A": [["2"]], "b": ["1"]}})
        assert set_equal(F.image(Q(3)), point(7))
        assert Multimap.from_json(F.to_json()) == F


class TestSum:
    def test_graph_and_decompositions(self):
        S = sum_maps(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL)
        for x in (-2, 0, 3):
            assert set_equal(S.image(Q(x)), HPolyhedron(1, (((-1,), 0),)))
        assert set_equal(sum_decompositions(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL, Q(0), Q(0)), point(0, 0))

    def test_zero_summand(self):
        S = sum_decompositions(ABOVE_DIAGONAL, ZERO_MAP, Q(0), Q(2))
        assert set_equal(S, point(2, 0))

    def test_linear_maps(self):
        S = sum_maps(Multimap.linear([[1, 2]]), Multimap.linear([[3, -1]]))
        assert set_equal(S.graph, Multimap.linear([[4, 1]]).graph)

    @pytest.mark.parametrize("index", range(12))
    def test_local_graph_has_the_same_coderivatives(self, index):
        inst = generate("cod_sum", 3, index, dims=(1, 2))
        p = decode_payload(inst)
        F1, F2 = p["F1"], p["F2"]
        for probe in inst["probes"]:
            xb, yb, ys = dec_vec(probe["x"]), dec_vec(probe["y"]), dec_vec(probe["ystar"])
            S = sum_decompositions(F1, F2, xb, yb)
            if is_empty(S):
                continue
            split = h_to_v(S).vertices[0]
            near = sum_maps_near(F1, F2, xb, split[: F1.m], split[F1.m :])
            assert set_equal(coderivative(near, xb, yb, ys), coderivative(sum_maps(F1, F2), xb, yb, ys))

    def test_rule_half_planes(self):
        r = coderivative_sum_rule(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL, Q(0), Q(0), Q(0), Q(0), Q(1))
        assert r.equal and set_equal(r.lhs, point(0))

    def test_rule_zero_summand(self):
        r = coderivative_sum_rule(ABOVE_DIAGONAL, ZERO_MAP, Q(0), Q(0), Q(0), Q(0), Q(1))
        assert r.equal and set_equal(r.lhs, coderivative(ABOVE_DIAGONAL, Q(0), Q(0), Q(1)))

    def test_rule_linear(self):
        A, B = Multimap.linear([[1, 2]]), Multimap.linear([[0, 5]])
        r = coderivative_sum_rule(A, B, Q(1, 1), Q(8), Q(3), Q(5), Q(2))
        assert r.equal and set_equal(r.rhs, point(2, 14))


class TestChain:
    def test_linear(self):
        A = Multimap.linear([[1, 2], [0, 1]])
        B = Multimap.linear([[3, 1]])
        r = coderivative_chain_rule(A, B, Q(0, 0), Q(0, 0), Q(0), Q(1))
        # A^T B^T z* = A^T (3, 1) = (3, 7)
        assert r.equal and set_equal(r.lhs, point(3, 7))

    def test_composition_of_orders(self):
        G = Multimap(1, 1, HPolyhedron(2, (((1, -1), 0),)))  # z >= y
        GF = compose(G, ABOVE_DIAGONAL)
        assert set_equal(GF.graph, ABOVE_DIAGONAL.graph)
        r = coderivative_chain_rule(ABOVE_DIAGONAL, G, Q(0), Q(0), Q(0), Q(1))
        assert r.equal and set_equal(r.lhs, point(1))

    def test_interior_zero(self):
        F = Multimap(1, 1, HPolyhedron.box([-1, -1], [1, 1]))
        r = coderivative_chain_rule(F, F, Q(0), Q(0), Q(0), Q(0))
        assert r.equal and set_equal(r.lhs, point(0))


class TestIntersection:
    def test_same_map(self):
        r = coderivative_intersection_rule(ABOVE_DIAGONAL, ABOVE_DIAGONAL, Q(0), Q(0), Q(1))
        assert r.equal

    def test_half_planes(self):
        r = coderivative_intersection_rule(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL, Q(0), Q(0), Q(2))
        assert r.equal and set_equal(r.lhs, interval(-2, 2))
        assert set_equal(intersect(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL).image(Q(-1)), HPolyhedron(1, (((-1,), -1),)))

    def test_sampler_on_rule_output(self):
        r = coderivative_intersection_rule(ABOVE_DIAGONAL, ABOVE_ANTIDIAGONAL, Q(0), Q(0), Q(2))
        # the preimage lives in (x*, x1*, y1*); x* is its first coordinate
        rep = decomposition_sampler(r.rhs, r.preimage, [[1, 0, 0]], seed=0, count=100)
        assert rep.ok and rep.checked >= 100

    def test_interior_zero(self):
        F = Multimap(1, 1, HPolyhedron.box([-1, -1], [1, 1]))
        r = coderivative_intersection_rule(F, F, Q(0), Q(0), Q(0))
        assert r.equal and set_equal(r.lhs, point(0))


@pytest.mark.parametrize("t", [mpq(1, 3), mpq(2), mpq(7, 2)])
def test_positive_homogeneity(t):
    assert positive_homogeneity(ABOVE_DIAGONAL, Q(0), Q(0), Q(1), t)
    assert positive_homogeneity(ABOVE_DIAGONAL, Q(0), Q(0), Q(-1), t)


def test_adjoint_law():
    assert adjoint_law([[1, 2], [3, -1], [0, 4]], Q(1, 1), Q(1, 0, -2))
