"""Support functions, normal cones, extremality, separation and qualification checks."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Sequence

from gmpy2 import mpq

from .errors import DimensionError, EmptyIntersection, InternalError, NotExtremal, NotInSet, NotSolid
from .polyhedra import (
    EmptySetError,
    HPolyhedron,
    PolyhedralCone,
    as_cone,
    contains,
    difference_position,
    h_to_v,
    interior_meets,
    intersect,
    is_empty,
    minkowski_diff,
    minkowski_sum,
    origin_in_interior,
    project,
    set_equal,
)
from .rational_lp import INF, NEG_INF, ZERO, Infeasible, Unbounded, dot, lp_maximize, qvec


@dataclass(frozen=True)
class SupportValue:
    """``value`` with a witness: ``kind`` is ``"maximizer"``, ``"ray"`` or ``"empty"``."""

    value: object
    kind: str
    vector: Optional[tuple] = None


def support(P: HPolyhedron, xstar: Sequence) -> SupportValue:
    if len(xstar) != P.dim:
        raise DimensionError(f"x* has length {len(xstar)}, set dim {P.dim}")
    res = P.maximize(xstar)
    if isinstance(res, Infeasible):
        return SupportValue(NEG_INF, "empty")
    if isinstance(res, Unbounded):
        return SupportValue(INF, "ray", res.ray)
    return SupportValue(res.value, "maximizer", res.point)


def support_value(P: HPolyhedron, xstar: Sequence):
    return support(P, xstar).value


# ---------------------------------------------------------------------------
# normal cones


def normal_cone(P: HPolyhedron, xbar: Sequence) -> PolyhedralCone:
    """Cone spanned by the active inequality normals and both signs of the equality normals."""
    if not contains(P, xbar):
        raise NotInSet(f"{tuple(map(str, xbar))} is not in the set")
    xbar = qvec(xbar)
    n = P.dim
    active = [a for a, b in P.ineq if dot(a, xbar) == b]
    eqs = [e for e, _ in P.eq]
    k, m = len(active), len(eqs)
    if k + m == 0:
        return PolyhedralCone(n, (), tuple((tuple(mpq(int(i == j)) for j in range(n)), ZERO) for i in range(n)))
    tot = n + k + m
    rows_eq = []
    for i in range(n):
        row = [ZERO] * tot
        row[i] = mpq(1)
        for j, a in enumerate(active):
            row[n + j] = -a[i]
        for j, e in enumerate(eqs):
            row[n + k + j] = -e[i]
        rows_eq.append((tuple(row), ZERO))
    rows_in = []
    for j in range(k):
        row = [ZERO] * tot
        row[n + j] = mpq(-1)
        rows_in.append((tuple(row), ZERO))
    return as_cone(project(HPolyhedron(tot, tuple(rows_in), tuple(rows_eq)), range(n)))


# ---------------------------------------------------------------------------
# extremality and separation


def _require_nonempty(*sets):
    for S in sets:
        if is_empty(S):
            raise EmptySetError("extremality needs nonempty sets")


def is_extremal_system(O1: HPolyhedron, O2: HPolyhedron) -> bool:
    _require_nonempty(O1, O2)
    return not difference_position(O1, O2)[1]


@dataclass(frozen=True)
class ExtremalWitness:
    translation: tuple
    separator: tuple
    sup_value: object
    inf_value: object
    k: int


def _translate(P: HPolyhedron, a) -> HPolyhedron:
    """``P + a``."""
    return HPolyhedron(P.dim, tuple((r, b + dot(r, a)) for r, b in P.ineq), tuple((e, c + dot(e, a)) for e, c in P.eq))


def separate(O1: HPolyhedron, O2: HPolyhedron, max_k: int = 64) -> ExtremalWitness:
    """Separator ``x*`` and a translation ``a = -c/k`` pulling ``O1`` off ``O2``.

    ``x*`` is the first canonical row of ``O1 - O2`` whose bound is nonpositive;
    ``c = x*`` so that ``<x*, c> > 0``, and ``k`` is the least integer for
    which the translated sets are certified disjoint by an LP.
    """
    _require_nonempty(O1, O2)
    D = minkowski_diff(O1, O2)
    if origin_in_interior(D):
        raise NotExtremal("0 is interior to the difference")
    if not interior_meets(D, HPolyhedron.universe(D.dim)):
        raise NotSolid("the difference has empty interior")
    xstar = next(a for a, b in D.ineq if b <= 0)
    sup1 = support(O1, xstar)
    inf2 = support(O2, [-v for v in xstar])
    if sup1.kind != "maximizer" or inf2.kind != "maximizer":
        raise InternalError("separation values must be finite for extremal sets")
    sup_v, inf_v = sup1.value, -inf2.value
    if sup_v > inf_v:
        raise InternalError("separator violates sup <= inf")
    c = xstar
    for k in range(1, max_k + 1):
        a = tuple(-v / k for v in c)
        if is_empty(intersect(_translate(O1, a), O2)):
            return ExtremalWitness(a, tuple(xstar), sup_v, inf_v, k)
    raise InternalError("no translation certified disjointness")


# ---------------------------------------------------------------------------
# qualification conditions


@dataclass(frozen=True)
class QCReport:
    difference_interiority: bool
    omega2_bounded: bool
    interiority_1_meets_2: bool
    interiority_2_meets_1: bool
    attouch_brezis: bool
    localized: Optional[bool] = None
    any_holds: bool = False

    def to_json(self) -> dict:
        return {
            "difference_interiority": self.difference_interiority,
            "omega2_bounded": self.omega2_bounded,
            "interiority_1_meets_2": self.interiority_1_meets_2,
            "interiority_2_meets_1": self.interiority_2_meets_1,
            "attouch_brezis": self.attouch_brezis,
            "localized": self.localized,
            "any_holds": self.any_holds,
        }


def is_bounded(P: HPolyhedron) -> bool:
    if is_empty(P):
        return True
    g = h_to_v(P)
    return not g.rays and not g.lineality


def attouch_brezis(O1: HPolyhedron, O2: HPolyhedron) -> bool:
    # the closed cone over O1 - O2 is a subspace exactly when 0 is in ri(O1 - O2)
    return difference_position(O1, O2)[0]


def check_qualification(O1: HPolyhedron, O2: HPolyhedron, xbar: Optional[Sequence] = None) -> QCReport:
    """Evaluate every qualification flag exactly.

    ``any_holds`` here accepts the support-intersection variants: difference
    interiority with a bounded second set, either interiority condition, or
    Attouch-Brezis, plus the localized condition when ``xbar`` is given.
    """
    ab, di = difference_position(O1, O2)
    bounded = is_bounded(O2)
    i12 = interior_meets(O1, O2)
    i21 = interior_meets(O2, O1)
    loc = None
    if xbar is not None:
        xb = qvec(xbar)
        V = HPolyhedron.box([v - 1 for v in xb], [v + 1 for v in xb])
        loc = difference_position(O1, intersect(O2, V))[1]
    anyh = (di and bounded) or i12 or i21 or ab or bool(loc)
    return QCReport(di, bounded, i12, i21, ab, loc, anyh)


# ---------------------------------------------------------------------------
# support of an intersection


@dataclass(frozen=True)
class IntersectionSupport:
    value: object
    x1star: Optional[tuple]
    x2star: Optional[tuple]


def support_intersection(O1: HPolyhedron, O2: HPolyhedron, xstar: Sequence) -> IntersectionSupport:
    """``sigma_{O1 cap O2}(x*)`` with an attaining split ``x* = x1* + x2*`` read off LP duals."""
    n = O1.dim
    c = qvec(xstar)
    A = list(O1.A) + list(O2.A)
    b = list(O1.b) + list(O2.b)
    E = list(O1.E) + list(O2.E)
    d = list(O1.d) + list(O2.d)
    res = lp_maximize(c, A, b, E, d)
    if isinstance(res, Infeasible):
        raise EmptyIntersection("the two sets do not meet")
    if isinstance(res, Unbounded):
        return IntersectionSupport(INF, None, None)
    m1, e1 = len(O1.ineq), len(O1.eq)
    lam, mu = res.ineq_duals, res.eq_duals
    x1 = [ZERO] * n
    x2 = [ZERO] * n
    for j, (a, _) in enumerate(O1.ineq):
        for i in range(n):
            x1[i] += lam[j] * a[i]
    for j, (a, _) in enumerate(O2.ineq):
        for i in range(n):
            x2[i] += lam[m1 + j] * a[i]
    for j, (e, _) in enumerate(O1.eq):
        for i in range(n):
            x1[i] += mu[j] * e[i]
    for j, (e, _) in enumerate(O2.eq):
        for i in range(n):
            x2[i] += mu[e1 + j] * e[i]
    x1, x2 = tuple(x1), tuple(x2)
    s1, s2 = support_value(O1, x1), support_value(O2, x2)
    if s1 + s2 != res.value:
        raise InternalError("dual split does not attain the intersection support")
    return IntersectionSupport(res.value, x1, x2)


@lru_cache(maxsize=256)
def support_epigraph(P: HPolyhedron) -> HPolyhedron:
    """``epi sigma_P`` in ``dim+1`` variables for nonempty ``P``.

    Each vertex ``v`` contributes ``<x*, v> <= t``; rays and lines of ``P``
    cut out the domain of ``sigma_P`` (its barrier cone).
    """
    n = P.dim
    g = h_to_v(P)
    rows = [(tuple(v) + (mpq(-1),), ZERO) for v in g.vertices]
    rows += [(tuple(r) + (ZERO,), ZERO) for r in g.rays]
    eqs = [(tuple(l) + (ZERO,), ZERO) for l in g.lineality]
    return HPolyhedron(n + 1, tuple(rows), tuple(eqs))


def support_conv_conjugate_check(O1: HPolyhedron, O2: HPolyhedron, x: Sequence):
    """``((sigma_1 (+) sigma_2)^*(x), delta_{O1 cap O2}(x))``.

    The left side maximizes ``<x, y> - s`` over the generators of
    ``epi sigma_1 + epi sigma_2``.
    """
    if is_empty(intersect(O1, O2)):
        raise EmptyIntersection("the two sets do not meet")
    x = qvec(x)
    epi = minkowski_sum(support_epigraph(O1), support_epigraph(O2))
    g = h_to_v(epi)
    n = O1.dim

    def val(v):
        return dot(x, v[:n]) - v[n]

    lhs = max(val(v) for v in g.vertices)
    if any(val(r) > 0 for r in g.rays) or any(val(l) != 0 for l in g.lineality):
        lhs = INF
    rhs = ZERO if contains(intersect(O1, O2), x) else INF
    return lhs, rhs


# ---------------------------------------------------------------------------
# normal cone of an intersection


@dataclass(frozen=True)
class ConeRuleResult:
    lhs: HPolyhedron
    rhs: HPolyhedron
    equal: bool
    qc: Optional[QCReport] = None


def normal_intersection_rule(O1: HPolyhedron, O2: HPolyhedron, xbar: Sequence) -> ConeRuleResult:
    if not contains(O1, xbar) or not contains(O2, xbar):
        raise NotInSet("base point must lie in both sets")
    lhs = normal_cone(intersect(O1, O2), xbar)
    rhs = as_cone(minkowski_sum(normal_cone(O1, xbar), normal_cone(O2, xbar)))
    qc = check_qualification(O1, O2, xbar)
    qc = replace(
        qc,
        any_holds=bool(qc.localized) or qc.interiority_1_meets_2 or qc.interiority_2_meets_1 or qc.attouch_brezis,
    )
    return ConeRuleResult(lhs, rhs, set_equal(lhs, rhs), qc)
