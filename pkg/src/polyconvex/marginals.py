"""Optimal value functions ``mu(x) = inf{phi(x, y) : y in F(x)}`` and the ordered-space chain rule."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from gmpy2 import mpq

from .errors import (
    DimensionError,
    MinusInfinityDetected,
    MonotonicityViolation,
    NotASolution,
    NotASubgradient,
    NotInDomain,
)
from .multimaps import Multimap, coderivative
from .pl_functions import (
    PLFunction,
    compose,
    conjugate_closed_form,
    conjugate_sum_rule,
    conjugate_value,
    evaluate,
    inf_convolution_value,
    subdifferential,
    transpose,
)
from .polyhedra import (
    HPolyhedron,
    PolyhedralCone,
    affine_image,
    affine_preimage,
    contains,
    h_to_v,
    intersect,
    is_empty,
    lift,
    project,
    set_equal,
    set_subset,
)
from .rational_lp import INF, ZERO, Infeasible, Optimal, Unbounded, dot, lp_maximize, qvec
from .supports_normals import normal_cone, support_epigraph


def _eye(k):
    return [[mpq(int(i == j)) for j in range(k)] for i in range(k)]


@dataclass(frozen=True)
class MarginalProblem:
    """Cost ``phi`` on ``Q^(n+m)`` and constraint map ``F: Q^n =>> Q^m``."""

    phi: PLFunction
    F: Multimap

    def __post_init__(self):
        if self.phi.dim != self.F.n + self.F.m:
            raise DimensionError("phi must live on the product of the input and output spaces of F")
        if is_empty(self.joint):
            raise NotInDomain("dom phi misses gph F, so mu is identically +inf")
        if _descends(self.joint, self.F.n, self.F.m):
            raise MinusInfinityDetected("the inner infimum is -inf")

    @property
    def n(self):
        return self.F.n

    @property
    def m(self):
        return self.F.m

    @cached_property
    def joint(self) -> HPolyhedron:
        """``epi(phi + delta_gph F)`` in ``(x, y, t)``."""
        k = self.n + self.m
        return intersect(self.phi.epi, lift(self.F.graph, k + 1, range(k)))

    @cached_property
    def closed_form(self) -> PLFunction:
        """``mu`` itself, as the shadow of ``joint`` on ``(x, t)``."""
        n, m = self.n, self.m
        return PLFunction(n, project(self.joint, list(range(n)) + [n + m]))

    @cached_property
    def sum_function(self) -> PLFunction:
        return PLFunction(self.n + self.m, self.joint)

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "F": self.F.to_json()}


def _descends(H: HPolyhedron, n: int, m: int) -> bool:
    """Whether ``rec H`` has a direction ``(0, dy, dt)`` with ``dt < 0``."""
    tot = n + m + 1
    A = [a for a, _ in H.ineq]
    b = [ZERO] * len(A)
    E = [e for e, _ in H.eq]
    d = [ZERO] * len(E)
    for i in range(n):
        E.append(tuple(mpq(int(j == i)) for j in range(tot)))
        d.append(ZERO)
    # -dt <= 1
    A.append(tuple([ZERO] * (tot - 1)) + (mpq(-1),))
    b.append(mpq(1))
    res = lp_maximize(tuple([ZERO] * (tot - 1)) + (mpq(-1),), A, b, E, d)
    return isinstance(res, Optimal) and res.value > 0


def marginal_closed_form(P: MarginalProblem) -> PLFunction:
    return P.closed_form


def marginal_value(P: MarginalProblem, x: Sequence):
    """``mu(x)`` by one LP over the section of ``epi(phi + delta_gph F)``."""
    n, m = P.n, P.m
    x = qvec(x)
    tot = n + m + 1
    E = [e for e, _ in P.joint.eq]
    d = [c for _, c in P.joint.eq]
    for i in range(n):
        E.append(tuple(mpq(int(j == i)) for j in range(tot)))
        d.append(x[i])
    res = lp_maximize(tuple([ZERO] * (tot - 1)) + (mpq(-1),), P.joint.A, P.joint.b, E, d)
    if isinstance(res, Infeasible):
        return INF
    if isinstance(res, Unbounded):
        raise MinusInfinityDetected("the inner infimum is -inf")
    return -res.value


def solution_map(P: MarginalProblem, x: Sequence) -> HPolyhedron:
    """``M(x) = {y in F(x) : phi(x, y) = mu(x)}``."""
    mu = marginal_value(P, x)
    if mu == INF:
        raise NotInDomain("x is outside dom mu")
    n, m = P.n, P.m
    M = [[ZERO] * m for _ in range(n)] + _eye(m) + [[ZERO] * m]
    return affine_preimage(P.joint, M, tuple(qvec(x)) + tuple([ZERO] * m) + (mu,))


# ---------------------------------------------------------------------------
# conjugates


@dataclass(frozen=True)
class MarginalConjugateResult:
    mu_star: object
    via_sum: object
    via_convolution: object
    x1star: Optional[tuple]
    x2star: Optional[tuple]


def marginal_conjugate(P: MarginalProblem, xstar: Sequence) -> MarginalConjugateResult:
    """``mu*(x*)`` three ways.

    1. LP on the closed-form ``mu``.
    2. ``(phi + delta_gph F)*(x*, 0)``.
    3. ``(phi* (+) sigma_gph F)(x*, 0)`` using the closed-form ``phi*``, with an
       attaining split taken from the conjugate sum machinery.
    """
    n, m = P.n, P.m
    xs = tuple(qvec(xstar))
    probe = xs + tuple([ZERO] * m)
    mu_star = conjugate_value(marginal_closed_form(P), xs)
    via_sum = conjugate_value(P.sum_function, probe)
    sigma = PLFunction(n + m, support_epigraph(P.F.graph))
    via_conv = inf_convolution_value(conjugate_closed_form(P.phi), sigma, probe)
    split = conjugate_sum_rule(P.phi, PLFunction.indicator(P.F.graph), probe)
    return MarginalConjugateResult(mu_star, via_sum, via_conv, split.x1star, split.x2star)


# ---------------------------------------------------------------------------
# subdifferentials


@dataclass(frozen=True)
class MarginalSubdiffResult:
    lhs: HPolyhedron
    rhs: HPolyhedron
    sum_rep: HPolyhedron
    equal: bool
    preimage: HPolyhedron


def _check_solution(P: MarginalProblem, xbar, ybar):
    xy = tuple(qvec(xbar)) + tuple(qvec(ybar))
    mu = marginal_value(P, xbar)
    if mu == INF or not contains(P.F.graph, xy) or evaluate(P.phi, xy) != mu:
        raise NotASolution("ybar is not in M(xbar)")
    return xy


def coderivative_union(dphi: HPolyhedron, N: HPolyhedron, n: int, m: int):
    """Image under ``x* + u*`` of ``{(x*, y*, u*) : (x*, y*) in dphi, (u*, -y*) in N}``."""
    tot = 2 * n + m
    P1 = affine_preimage(dphi, _eye(tot)[: n + m])
    M2 = [[mpq(int(j == n + m + i)) for j in range(tot)] for i in range(n)]
    M2 += [[-mpq(int(j == n + i)) for j in range(tot)] for i in range(m)]
    P2 = affine_preimage(N, M2)
    pre = intersect(P1, P2)
    img = [[mpq(int(j == i)) + mpq(int(j == n + m + i)) for j in range(tot)] for i in range(n)]
    return affine_image(pre, img), pre


def marginal_subdifferential(P: MarginalProblem, xbar: Sequence, ybar: Sequence) -> MarginalSubdiffResult:
    n, m = P.n, P.m
    xy = _check_solution(P, xbar, ybar)
    lhs = subdifferential(marginal_closed_form(P), xbar)
    dh = subdifferential(P.sum_function, xy)
    sum_rep = affine_preimage(dh, _eye(n) + [[ZERO] * n for _ in range(m)])
    rhs, pre = coderivative_union(subdifferential(P.phi, xy), normal_cone(P.F.graph, xy), n, m)
    equal = set_equal(lhs, rhs) and set_equal(lhs, sum_rep)
    return MarginalSubdiffResult(lhs, rhs, sum_rep, equal, pre)


def parameter_independent_problem(phi_y: PLFunction, F: Multimap) -> MarginalProblem:
    """Marginal problem whose cost ``phi(x, y) = phi_y(y)`` ignores ``x``."""
    n, m = F.n, F.m
    M = [[ZERO] * n + [mpq(int(j == i)) for j in range(m)] for i in range(m)]
    return MarginalProblem(compose(phi_y, M), F)


def parameter_independent_rhs(phi_y: PLFunction, F: Multimap, xbar, ybar) -> HPolyhedron:
    """``union_{y* in d phi(ybar)} D*F(xbar, ybar)(y*)`` as a projection."""
    n, m = F.n, F.m
    xy = tuple(qvec(xbar)) + tuple(qvec(ybar))
    N = normal_cone(F.graph, xy)
    tot = n + m  # (u*, y*)
    P1 = affine_preimage(subdifferential(phi_y, ybar), [[mpq(int(j == n + i)) for j in range(tot)] for i in range(m)])
    M2 = [[mpq(int(j == i)) for j in range(tot)] for i in range(n)]
    M2 += [[-mpq(int(j == n + i)) for j in range(tot)] for i in range(m)]
    P2 = affine_preimage(N, M2)
    return project(intersect(P1, P2), range(n))


# ---------------------------------------------------------------------------
# ordered spaces


@dataclass(frozen=True)
class OrderedChainProblem:
    """``phi(A x + b)`` where ``phi`` is nondecreasing for the order of the cone ``Yplus``."""

    Yplus: PolyhedralCone
    A: tuple
    b: tuple
    phi: PLFunction

    def __post_init__(self):
        A = tuple(tuple(qvec(r)) for r in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(qvec(self.b)))
        m = len(A)
        if self.Yplus.dim != m or self.phi.dim != m or len(self.b) != m:
            raise DimensionError("Yplus, phi and the map output must share one dimension")
        if not is_monotone(self.phi, self.Yplus):
            raise MonotonicityViolation("phi is not nondecreasing for the given order")

    @property
    def n(self):
        return len(self.A[0])

    @property
    def m(self):
        return len(self.A)

    def f(self, x):
        x = qvec(x)
        return tuple(dot(r, x) + c for r, c in zip(self.A, self.b))

    @cached_property
    def order_map(self) -> Multimap:
        """``F(x) = {y : f(x) <= y}``, i.e. ``y - A x - b in Yplus``."""
        n, m = self.n, self.m
        M = [[-v for v in self.A[i]] + [mpq(int(j == i)) for j in range(m)] for i in range(m)]
        return Multimap(n, m, affine_preimage(self.Yplus, M, tuple(-v for v in self.b)))

    @cached_property
    def composite(self) -> PLFunction:
        return compose(self.phi, self.A, self.b)


def is_monotone(phi: PLFunction, K: HPolyhedron) -> bool:
    """``phi(y - z) <= phi(y)`` for all ``z in K``, i.e. ``K`` lies in ``{z : (-z, 0) in rec epi phi}``."""
    m = phi.dim
    rec = HPolyhedron(m + 1, tuple((a, ZERO) for a, _ in phi.epi.ineq), tuple((e, ZERO) for e, _ in phi.epi.eq))
    M = [[-mpq(int(i == j)) for j in range(m)] for i in range(m)] + [[ZERO] * m]
    return set_subset(K, affine_preimage(rec, M))


def dual_cone_check(phi: PLFunction, K: HPolyhedron, ybar: Sequence) -> bool:
    """Every generator ``y*`` of ``d phi(ybar)`` has ``<y*, z> >= 0`` on the generators ``z`` of ``K``."""
    S = h_to_v(subdifferential(phi, ybar))
    C = h_to_v(K)
    zs = list(C.rays) + list(C.vertices)
    ok = all(dot(v, z) >= 0 for v in S.vertices for z in zs)
    ok = ok and all(dot(r, z) >= 0 for r in S.rays for z in zs)
    ok = ok and all(dot(l, z) == 0 for l in S.lineality for z in zs)
    ok = ok and all(dot(v, l) == 0 for v in S.vertices + S.rays for l in C.lineality)
    return ok


@dataclass(frozen=True)
class OrderedChainResult:
    lhs: HPolyhedron
    rhs: HPolyhedron
    adjoint_form: HPolyhedron
    equal: bool


def ordered_chain_rule(Q: OrderedChainProblem, xbar: Sequence) -> OrderedChainResult:
    n, m = Q.n, Q.m
    ybar = Q.f(xbar)
    lhs = subdifferential(Q.composite, xbar)
    dphi = subdifferential(Q.phi, ybar)
    N = normal_cone(Q.order_map.graph, tuple(qvec(xbar)) + ybar)
    tot = n + m  # (x*, y*)
    P1 = affine_preimage(dphi, [[mpq(int(j == n + i)) for j in range(tot)] for i in range(m)])
    M2 = [[mpq(int(j == i)) for j in range(tot)] for i in range(n)]
    M2 += [[-mpq(int(j == n + i)) for j in range(tot)] for i in range(m)]
    rhs = project(intersect(P1, affine_preimage(N, M2)), range(n))
    adj = affine_image(dphi, transpose([list(r) for r in Q.A]))
    return OrderedChainResult(lhs, rhs, adj, set_equal(lhs, rhs) and set_equal(lhs, adj))


def epigraphical_coderivative_check(Q: OrderedChainProblem, xbar: Sequence, ystar: Sequence):
    """``D*F(xbar, f(xbar))(y*)`` against ``d(y* o f)(xbar) = {A^T y*}``; returns ``(lhs, rhs, equal)``."""
    ybar = Q.f(xbar)
    ys = qvec(ystar)
    if not contains(subdifferential(Q.phi, ybar), ys):
        raise NotASubgradient("y* is not a subgradient of phi at f(xbar)")
    lhs = coderivative(Q.order_map, xbar, ybar, ys)
    rhs = HPolyhedron.point([dot(col, ys) for col in zip(*Q.A)])
    return lhs, rhs, set_equal(lhs, rhs)
