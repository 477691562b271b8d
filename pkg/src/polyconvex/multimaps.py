"""Set-valued maps with convex polyhedral graphs and their coderivative calculus."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from gmpy2 import mpq

from .errors import (
    BadIntermediatePoint,
    DimensionError,
    EmptyDomainIntersection,
    NotADecomposition,
    NotInBothGraphs,
    NotInGraph,
)
from .polyhedra import (
    HPolyhedron,
    affine_image_by_generators,
    affine_preimage,
    contains,
    feasible_point,
    interior_meets,
    intersect as intersect_sets,
    is_empty,
    lift,
    minkowski_sum,
    project,
    set_equal,
)
from .rational_lp import ZERO, Unbounded, dot, qvec
from .supports_normals import QCReport, check_qualification, normal_cone


@dataclass(frozen=True)
class Multimap:
    """``F: Q^n =>> Q^m`` given by its graph in ``n + m`` variables."""

    n: int
    m: int
    graph: HPolyhedron

    def __post_init__(self):
        if self.graph.dim != self.n + self.m:
            raise DimensionError(f"graph dim {self.graph.dim} != {self.n} + {self.m}")
        if is_empty(self.graph):
            raise ValueError("a multimap needs a nonempty graph")

    @classmethod
    def linear(cls, A: Sequence[Sequence], shift: Optional[Sequence] = None) -> "Multimap":
        """Graph of ``x -> A x + shift``."""
        A = [list(qvec(r)) for r in A]
        m, n = len(A), len(A[0])
        s = qvec(shift) if shift is not None else tuple([ZERO] * m)
        rows = []
        for i in range(m):
            row = [-v for v in A[i]] + [mpq(int(j == i)) for j in range(m)]
            rows.append((tuple(row), s[i]))
        return cls(n, m, HPolyhedron(n + m, (), tuple(rows)))

    @cached_property
    def dom(self) -> HPolyhedron:
        return project(self.graph, range(self.n))

    @cached_property
    def rge(self) -> HPolyhedron:
        return project(self.graph, range(self.n, self.n + self.m))

    def image(self, x: Sequence) -> HPolyhedron:
        """``F(x)`` as a polyhedron in ``m`` variables."""
        x = qvec(x)
        M = [[ZERO] * self.m for _ in range(self.n)] + [[mpq(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        return affine_preimage(self.graph, M, tuple(x) + tuple([ZERO] * self.m))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "graph": self.graph.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Multimap":
        if "linear" in obj:
            return cls.linear(obj["linear"]["A"], obj["linear"].get("b"))
        return cls(int(obj["n"]), int(obj["m"]), HPolyhedron.from_json(obj["graph"]))


def coderivative(F: Multimap, xbar: Sequence, ybar: Sequence, ystar: Sequence) -> HPolyhedron:
    """``D*F(xbar, ybar)(y*) = {x* : (x*, -y*) in N((xbar, ybar); gph F)}``; may be empty."""
    pt = tuple(qvec(xbar)) + tuple(qvec(ybar))
    if len(pt) != F.n + F.m or not contains(F.graph, pt):
        raise NotInGraph("base point is not on the graph")
    N = normal_cone(F.graph, pt)
    n, m = F.n, F.m
    M = [[mpq(int(i == j)) for j in range(n)] for i in range(n)] + [[ZERO] * n for _ in range(m)]
    return affine_preimage(N, M, tuple([ZERO] * n) + tuple(-v for v in qvec(ystar)))


@dataclass(frozen=True)
class CodRuleResult:
    lhs: HPolyhedron
    rhs: HPolyhedron
    equal: bool
    qc: QCReport
    preimage: Optional[HPolyhedron] = None


# ---------------------------------------------------------------------------
# sums


@lru_cache(maxsize=256)
def sum_maps(F1: Multimap, F2: Multimap) -> Multimap:
    """``(F1 + F2)(x) = F1(x) + F2(x)``: the fibre product over ``x`` mapped by ``(x, y1, y2) -> (x, y1 + y2)``."""
    if (F1.n, F1.m) != (F2.n, F2.m):
        raise DimensionError("sum needs equal shapes")
    n, m = F1.n, F1.m
    tot = n + 2 * m
    G1 = lift(F1.graph, tot, range(n + m))
    G2 = lift(F2.graph, tot, list(range(n)) + list(range(n + m, tot)))
    joint = intersect_sets(G1, G2)
    if is_empty(joint):
        raise EmptyDomainIntersection("the domains do not meet")
    A = [[int(j == i) for j in range(tot)] for i in range(n)]
    A += [[int(j == n + i or j == n + m + i) for j in range(tot)] for i in range(m)]
    return Multimap(n, m, affine_image_by_generators(joint, A))


def sum_maps_near(F1: Multimap, F2: Multimap, xbar: Sequence, y1bar: Sequence, y2bar: Sequence) -> Multimap:
    """A map whose graph agrees with that of ``F1 + F2`` near ``(xbar, y1bar + y2bar)``.

    The fibre product is replaced by its tangent cone at ``(xbar, y1bar, y2bar)``
    (only the active rows), so the image needs far fewer generators than the
    full graph while every normal cone at that point is unchanged.
    """
    n, m = F1.n, F1.m
    tot = n + 2 * m
    G1 = lift(F1.graph, tot, range(n + m))
    G2 = lift(F2.graph, tot, list(range(n)) + list(range(n + m, tot)))
    joint = intersect_sets(G1, G2)
    z = tuple(qvec(xbar)) + tuple(qvec(y1bar)) + tuple(qvec(y2bar))
    if not contains(joint, z):
        raise NotADecomposition("(xbar, y1, y2) is not in the fibre product")
    active = tuple((a, ZERO) for a, b in joint.ineq if dot(a, z) == b)
    cone = HPolyhedron(tot, active, tuple((e, ZERO) for e, _ in joint.eq))
    A = [[int(j == i) for j in range(tot)] for i in range(n)]
    A += [[int(j == n + i or j == n + m + i) for j in range(tot)] for i in range(m)]
    shift = z[:n] + tuple(u + v for u, v in zip(z[n : n + m], z[n + m :]))
    return Multimap(n, m, affine_image_by_generators(cone, A, shift))


def sum_decompositions(F1: Multimap, F2: Multimap, xbar: Sequence, ybar: Sequence) -> HPolyhedron:
    """``S(xbar, ybar) = {(y1, y2) : y1 in F1(xbar), y2 in F2(xbar), y1 + y2 = ybar}``."""
    m = F1.m
    P = intersect_sets(
        lift(F1.image(xbar), 2 * m, range(m)),
        lift(F2.image(xbar), 2 * m, range(m, 2 * m)),
        HPolyhedron(
            2 * m,
            (),
            tuple((tuple(mpq(int(j == i or j == m + i)) for j in range(2 * m)), v) for i, v in enumerate(qvec(ybar))),
        ),
    )
    return P


def lexmin_point(P: HPolyhedron):
    """Lexicographically least point of ``P``; falls back to any point once a coordinate is unbounded below."""
    if is_empty(P):
        return None
    cur = P
    for i in range(P.dim):
        c = [ZERO] * P.dim
        c[i] = mpq(-1)
        res = cur.maximize(c)
        if isinstance(res, Unbounded):
            return feasible_point(cur)
        e = [ZERO] * P.dim
        e[i] = mpq(1)
        cur = intersect_sets(cur, HPolyhedron(P.dim, (), ((tuple(e), -res.value),)))
    return feasible_point(cur)


def coderivative_sum_rule(F1, F2, xbar, ybar, y1bar, y2bar, ystar) -> CodRuleResult:
    S = sum_decompositions(F1, F2, xbar, ybar)
    if not contains(S, tuple(qvec(y1bar)) + tuple(qvec(y2bar))):
        raise NotADecomposition("(y1, y2) is not in S(xbar, ybar)")
    lhs = coderivative(sum_maps_near(F1, F2, xbar, y1bar, y2bar), xbar, ybar, ystar)
    rhs = minkowski_sum(coderivative(F1, xbar, y1bar, ystar), coderivative(F2, xbar, y2bar, ystar))
    qc = check_qualification(F1.dom, F2.dom)
    full = HPolyhedron.universe(F1.n + F1.m)
    solid1 = interior_meets(F1.graph, full)
    solid2 = interior_meets(F2.graph, full)
    qc = replace(qc, any_holds=(solid1 and qc.interiority_1_meets_2) or (solid2 and qc.interiority_2_meets_1) or qc.attouch_brezis)
    return CodRuleResult(lhs, rhs, set_equal(lhs, rhs), qc)


# ---------------------------------------------------------------------------
# composition


def compose(G: Multimap, F: Multimap) -> Multimap:
    """``G o F`` for ``F: Q^n =>> Q^m`` and ``G: Q^m =>> Q^p``."""
    if G.n != F.m:
        raise DimensionError("inner output must match outer input")
    n, m, p = F.n, F.m, G.m
    tot = n + m + p
    joint = intersect_sets(lift(F.graph, tot, range(n + m)), lift(G.graph, tot, range(n, tot)))
    if is_empty(joint):
        raise EmptyDomainIntersection("rge F misses dom G")
    return Multimap(n, p, project(joint, list(range(n)) + list(range(n + m, tot))))


def _ident_block(k, tot, offset, sign=1):
    return [[mpq(sign * int(j == offset + i)) for j in range(tot)] for i in range(k)]


def coderivative_chain_rule(F: Multimap, G: Multimap, xbar, ybar, zbar, zstar) -> CodRuleResult:
    n, m, p = F.n, F.m, G.m
    if not contains(F.graph, tuple(qvec(xbar)) + tuple(qvec(ybar))) or not contains(
        G.graph, tuple(qvec(ybar)) + tuple(qvec(zbar))
    ):
        raise BadIntermediatePoint("ybar is not in F(xbar) and G^{-1}(zbar)")
    lhs = coderivative(compose(G, F), xbar, zbar, zstar)
    NF = normal_cone(F.graph, tuple(qvec(xbar)) + tuple(qvec(ybar)))
    NG = normal_cone(G.graph, tuple(qvec(ybar)) + tuple(qvec(zbar)))
    tot = n + m  # (x*, y*)
    P1 = affine_preimage(NF, _ident_block(n, tot, 0) + _ident_block(m, tot, n, -1))
    P2 = affine_preimage(
        NG,
        _ident_block(m, tot, n) + [[ZERO] * tot for _ in range(p)],
        tuple([ZERO] * m) + tuple(-v for v in qvec(zstar)),
    )
    pre = intersect_sets(P1, P2)
    rhs = project(pre, range(n))
    qc = check_qualification(F.rge, G.dom)
    solid = interior_meets(F.graph, HPolyhedron.universe(n + m))
    qc = replace(qc, any_holds=(solid and (qc.interiority_1_meets_2 or qc.interiority_2_meets_1)) or qc.attouch_brezis)
    return CodRuleResult(lhs, rhs, set_equal(lhs, rhs), qc, pre)


# ---------------------------------------------------------------------------
# intersection


def intersect(F1: Multimap, F2: Multimap) -> Multimap:
    if (F1.n, F1.m) != (F2.n, F2.m):
        raise DimensionError("intersection needs equal shapes")
    G = intersect_sets(F1.graph, F2.graph)
    if is_empty(G):
        raise EmptyDomainIntersection("the graphs do not meet")
    return Multimap(F1.n, F1.m, G)


def coderivative_intersection_rule(F1: Multimap, F2: Multimap, xbar, ybar, ystar) -> CodRuleResult:
    """Both sides of the intersection rule.

    The union over splits ``y1* + y2* = y*`` is the projection onto ``x`` of
    ``{(x, x1*, y1*) : (x1*, -y1*) in N1, (x - x1*, -(y* - y1*)) in N2}``;
    that polyhedron is kept in ``preimage`` for witness extraction.
    """
    n, m = F1.n, F1.m
    pt = tuple(qvec(xbar)) + tuple(qvec(ybar))
    if not contains(F1.graph, pt) or not contains(F2.graph, pt):
        raise NotInBothGraphs("base point must be on both graphs")
    lhs = coderivative(intersect(F1, F2), xbar, ybar, ystar)
    N1 = normal_cone(F1.graph, pt)
    N2 = normal_cone(F2.graph, pt)
    tot = 2 * n + m
    P1 = affine_preimage(N1, _ident_block(n, tot, n) + _ident_block(m, tot, 2 * n, -1))
    M2 = [[mpq(int(j == i)) - mpq(int(j == n + i)) for j in range(tot)] for i in range(n)]
    M2 += _ident_block(m, tot, 2 * n)
    P2 = affine_preimage(N2, M2, tuple([ZERO] * n) + tuple(-v for v in qvec(ystar)))
    pre = intersect_sets(P1, P2)
    rhs = project(pre, range(n))
    qc = check_qualification(F1.graph, F2.graph)
    qc = replace(qc, any_holds=qc.interiority_1_meets_2 or qc.interiority_2_meets_1 or qc.attouch_brezis)
    return CodRuleResult(lhs, rhs, set_equal(lhs, rhs), qc, pre)
