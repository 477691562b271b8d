import pytest
from gmpy2 import mpq

from conftest import Q, interval
from polyconvex.errors import MinusInfinityDetected, MonotonicityViolation, NotASolution, NotASubgradient
from polyconvex.marginals import (
    MarginalProblem,
    OrderedChainProblem,
    dual_cone_check,
    epigraphical_coderivative_check,
    marginal_closed_form,
    marginal_conjugate,
    marginal_subdifferential,
    marginal_value,
    ordered_chain_rule,
    parameter_independent_problem,
    parameter_independent_rhs,
    solution_map,
)
from polyconvex.multimaps import Multimap
from polyconvex.pl_functions import PLFunction, functions_equal
from polyconvex.polyhedra import HPolyhedron, as_cone, set_equal
from polyconvex.rational_lp import INF
from polyconvex.supports_normals import support_value

# F(x) = [x, x + 1]
BAND = Multimap(1, 1, HPolyhedron(2, (((1, -1), 0), ((-1, 1), 1))))
# phi(x, y) = y
PHI_Y = PLFunction.linear([0, 1])
SHIFT = MarginalProblem(PHI_Y, BAND)


class TestValue:
    def test_band(self):
        assert marginal_value(SHIFT, Q(3)) == 3
        assert functions_equal(marginal_closed_form(SHIFT), PLFunction.linear([1]))

    def test_constant_map(self):
        F = Multimap(1, 1, HPolyhedron.box([None, -1], [None, 2]))
        P = MarginalProblem(PLFunction.max_affine([([0, 1], 0), ([0, -2], 0)]), F)
        assert functions_equal(marginal_closed_form(P), PLFunction.zero(1))

    def test_zero_cost_is_domain_indicator(self):
        F = Multimap(1, 1, HPolyhedron.box([0, 0], [2, 1]))
        P = MarginalProblem(PLFunction.zero(2), F)
        assert functions_equal(marginal_closed_form(P), PLFunction.indicator(interval(0, 2)))
        assert marginal_value(P, Q(5)) == INF

    def test_unbounded_inner_problem(self):
        F = Multimap(1, 1, HPolyhedron(2, (((-1, 1), 0),)))  # y <= x
        with pytest.raises(MinusInfinityDetected):
            MarginalProblem(PHI_Y, F)


class TestSolutionMap:
    def test_unique(self):
        assert set_equal(solution_map(SHIFT, Q(2)), HPolyhedron.point(Q(2)))

    def test_flat_cost(self):
        F = Multimap(1, 1, HPolyhedron.box([None, 0], [None, 1]))
        P = MarginalProblem(PLFunction.zero(2), F)
        assert set_equal(solution_map(P, Q(7)), interval(0, 1))


class TestConjugate:
    def test_band(self):
        one = marginal_conjugate(SHIFT, Q(1))
        assert one.mu_star == one.via_sum == one.via_convolution == 0
        two = marginal_conjugate(SHIFT, Q(2))
        assert two.mu_star == two.via_sum == two.via_convolution == INF

    def test_zero_cost_gives_support_of_domain(self):
        F = Multimap(1, 1, HPolyhedron.box([-1, 0], [3, 1]))
        P = MarginalProblem(PLFunction.zero(2), F)
        for xs in (-2, 0, 5):
            r = marginal_conjugate(P, Q(xs))
            assert r.mu_star == r.via_sum == r.via_convolution == support_value(interval(-1, 3), Q(xs))

    def test_origin_valued_map(self):
        F = Multimap(1, 1, HPolyhedron(2, (), (((0, 1), 0),)))
        phi = PLFunction.max_affine([([1, 5], 0), ([-1, 2], 1)])
        P = MarginalProblem(phi, F)
        r = marginal_conjugate(P, (mpq(1, 2),))
        assert r.mu_star == r.via_sum == r.via_convolution


class TestSubdifferential:
    def test_band(self):
        r = marginal_subdifferential(SHIFT, Q(0), Q(0))
        assert r.equal and set_equal(r.lhs, HPolyhedron.point(Q(1)))

    def test_parameter_independent(self):
        phi_y = PLFunction.linear([1])
        P = parameter_independent_problem(phi_y, BAND)
        r = marginal_subdifferential(P, Q(0), Q(0))
        assert set_equal(parameter_independent_rhs(phi_y, BAND, Q(0), Q(0)), r.lhs)

    def test_not_a_solution(self):
        with pytest.raises(NotASolution):
            marginal_subdifferential(SHIFT, Q(0), Q(1))


HALF_LINE = as_cone(HPolyhedron(1, (((-1,), 0),)))
RELU = PLFunction.max_affine([([1], 0), ([0], 0)])


class TestOrderedChain:
    def test_relu_of_double(self):
        Q_ = OrderedChainProblem(HALF_LINE, [[2]], [0], RELU)
        r = ordered_chain_rule(Q_, Q(0))
        assert r.equal and set_equal(r.lhs, interval(0, 2))

    def test_linear_nondecreasing(self):
        K = as_cone(HPolyhedron(2, (((-1, 0), 0), ((0, -1), 0))))
        Q_ = OrderedChainProblem(K, [[1, 0], [2, 1]], [0, 0], PLFunction.linear([1, 3]))
        r = ordered_chain_rule(Q_, Q(1, 1))
        assert r.equal and set_equal(r.lhs, HPolyhedron.point(Q(7, 3)))

    def test_dual_cone(self):
        assert dual_cone_check(RELU, HALF_LINE, Q(0))

    def test_epigraphical_coderivative(self):
        Q_ = OrderedChainProblem(HALF_LINE, [[2]], [0], RELU)
        lhs, rhs, equal = epigraphical_coderivative_check(Q_, Q(0), (mpq(1, 2),))
        assert equal and set_equal(rhs, HPolyhedron.point(Q(1)))
        with pytest.raises(NotASubgradient):
            epigraphical_coderivative_check(Q_, Q(0), Q(2))

    def test_decreasing_cost_rejected(self):
        with pytest.raises(MonotonicityViolation):
            OrderedChainProblem(HALF_LINE, [[1]], [0], PLFunction.linear([-1]))
