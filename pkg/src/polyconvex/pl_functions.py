"""Proper piecewise-linear convex functions stored by their epigraphs, with conjugate and subdifferential calculus."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product as iproduct
from typing import Optional, Sequence

from gmpy2 import mpq

from .errors import (
    DimensionError,
    EmptyCommonDomain,
    ImproperFunction,
    ImproperResult,
    InfeasibleComposition,
    InternalError,
    NotInDomain,
)
from .polyhedra import (
    Generators,
    HPolyhedron,
    affine_image,
    affine_preimage,
    contains,
    h_to_v,
    hull_of_union,
    interior_meets,
    intersect,
    is_empty,
    lift,
    minkowski_sum,
    project,
    set_equal,
)
from .rational_lp import INF, ZERO, Infeasible, Unbounded, dot, lp_maximize, parse_rational, q, qvec
from .supports_normals import QCReport, check_qualification, normal_cone, support, support_intersection


@dataclass(frozen=True)
class PLFunction:
    """A proper PL convex function on ``Q^dim``; ``epi`` lives in ``dim + 1`` variables, height last."""

    dim: int
    epi: HPolyhedron

    def __post_init__(self):
        n = self.dim
        if self.epi.dim != n + 1:
            raise DimensionError(f"epigraph must have dim {n + 1}, got {self.epi.dim}")
        if is_empty(self.epi):
            raise ImproperFunction("empty epigraph (the function is identically +inf)")
        if any(e[n] != 0 for e, _ in self.epi.eq):
            raise ImproperFunction("equality rows may not involve the height coordinate")
        if any(a[n] > 0 for a, _ in self.epi.ineq):
            raise ImproperFunction("an inequality bounds the height from above, so this is no epigraph")
        if not any(a[n] < 0 for a, _ in self.epi.ineq):
            raise ImproperFunction("the function is unbounded below (takes the value -inf)")

    # -- constructors ------------------------------------------------------

    @classmethod
    def max_affine(cls, pieces: Sequence, domain: Optional[HPolyhedron] = None, dim: Optional[int] = None):
        """``max_i <a_i, x> + c_i`` restricted to ``domain``; pieces are ``(a_i, c_i)``."""
        if not pieces:
            raise ImproperFunction("at least one affine piece is needed")
        if dim is None:
            dim = len(pieces[0][0])
        rows = [(tuple(qvec(a)) + (mpq(-1),), -q(c)) for a, c in pieces]
        epi = HPolyhedron(dim + 1, tuple(rows))
        if domain is not None:
            if domain.dim != dim:
                raise DimensionError("domain dimension differs from the pieces")
            epi = intersect(epi, lift(domain, dim + 1, range(dim)))
        return cls(dim, epi)

    @classmethod
    def indicator(cls, P: HPolyhedron):
        n = P.dim
        epi = intersect(lift(P, n + 1, range(n)), HPolyhedron(n + 1, ((tuple([ZERO] * n) + (mpq(-1),), ZERO),)))
        return cls(n, epi)

    @classmethod
    def linear(cls, c: Sequence, const=0):
        return cls.max_affine([(c, const)])

    @classmethod
    def zero(cls, dim: int):
        return cls.max_affine([([0] * dim, 0)])

    @classmethod
    def abs(cls):
        return cls.max_affine([([1], 0), ([-1], 0)])

    @classmethod
    def l1_norm(cls, dim: int):
        return cls.max_affine([(s, 0) for s in iproduct((1, -1), repeat=dim)])

    # -- derived -----------------------------------------------------------

    @cached_property
    def domain(self) -> HPolyhedron:
        return project(self.epi, range(self.dim))

    def to_json(self) -> dict:
        return {"dim": self.dim, "epi": self.epi.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "PLFunction":
        if "epi" in obj:
            return cls(int(obj["dim"]), HPolyhedron.from_json(obj["epi"]))
        if "max_affine" in obj:
            pieces = []
            for r in obj["max_affine"]:
                vals = [parse_rational(v) if isinstance(v, str) else q(v) for v in r]
                pieces.append((vals[:-1], vals[-1]))
            dom = HPolyhedron.from_json(obj["domain"]) if obj.get("domain") else None
            dim = obj.get("dim")
            return cls.max_affine(pieces, dom, dim)
        if "indicator" in obj:
            return cls.indicator(HPolyhedron.from_json(obj["indicator"]))
        raise ValueError("a function needs 'epi', 'max_affine' or 'indicator'")


# ---------------------------------------------------------------------------
# evaluation and conjugates


def evaluate(f: PLFunction, x: Sequence):
    """``f(x)`` in closed form from the epigraph rows, ``+inf`` off the domain."""
    if len(x) != f.dim:
        raise DimensionError(f"point has length {len(x)}, function dim {f.dim}")
    x = qvec(x)
    n = f.dim
    val = max((b - dot(a[:n], x)) / a[n] for a, b in f.epi.ineq if a[n] < 0)
    if not contains(f.epi, tuple(x) + (val,)):
        return INF
    return val


def in_domain(f: PLFunction, x: Sequence) -> bool:
    return evaluate(f, x) != INF


def conjugate_value(f: PLFunction, xstar: Sequence):
    """``f*(x*) = sigma_{epi f}(x*, -1)``, solved as an LP."""
    if len(xstar) != f.dim:
        raise DimensionError("x* length differs from the function dimension")
    return support(f.epi, tuple(qvec(xstar)) + (mpq(-1),)).value


def conjugate_from_generators(n: int, g: Generators) -> PLFunction:
    rows, eqs = [], []
    for v in g.vertices:
        rows.append((tuple(v[:n]) + (mpq(-1),), v[n]))
    for r in g.rays:
        rows.append((tuple(r[:n]) + (ZERO,), r[n]))
    for l in g.lineality:
        eqs.append((tuple(l[:n]) + (ZERO,), l[n]))
    return PLFunction(n, HPolyhedron(n + 1, tuple(rows), tuple(eqs)))


def conjugate_closed_form(f: PLFunction) -> PLFunction:
    """``f*`` as a PL function: one affine piece per vertex of ``epi f``, domain cut by rays and lines."""
    return conjugate_from_generators(f.dim, h_to_v(f.epi))


def biconjugate(f: PLFunction) -> PLFunction:
    return conjugate_closed_form(conjugate_closed_form(f))


def functions_equal(f: PLFunction, g: PLFunction) -> bool:
    return f.dim == g.dim and set_equal(f.epi, g.epi)


# ---------------------------------------------------------------------------
# constructions


def _wrap(n: int, epi: HPolyhedron, exc=ImproperResult) -> PLFunction:
    try:
        return PLFunction(n, epi)
    except ImproperFunction as err:
        raise exc(str(err)) from err


def inf_convolution(f: PLFunction, g: PLFunction) -> PLFunction:
    """``f (+) g``: its epigraph is ``epi f + epi g``."""
    if f.dim != g.dim:
        raise DimensionError("dimension mismatch")
    return _wrap(f.dim, minkowski_sum(f.epi, g.epi))


def inf_convolution_value(f: PLFunction, g: PLFunction, x: Sequence):
    """``inf_u f(u) + g(x - u)`` by one LP in ``(u, t1, t2)``."""
    n = f.dim
    x = qvec(x)
    A, b, E, d = [], [], [], []
    for a, bb in f.epi.ineq:
        A.append(tuple(a[:n]) + (a[n], ZERO))
        b.append(bb)
    for e, c in f.epi.eq:
        E.append(tuple(e[:n]) + (ZERO, ZERO))
        d.append(c)
    # (x - u, t2) in epi g
    for a, bb in g.epi.ineq:
        A.append(tuple(-v for v in a[:n]) + (ZERO, a[n]))
        b.append(bb - dot(a[:n], x))
    for e, c in g.epi.eq:
        E.append(tuple(-v for v in e[:n]) + (ZERO, ZERO))
        d.append(c - dot(e[:n], x))
    obj = tuple([ZERO] * n) + (mpq(-1), mpq(-1))
    res = lp_maximize(obj, A, b, E, d)
    if isinstance(res, Infeasible):
        return INF
    if isinstance(res, Unbounded):
        raise ImproperResult("the infimal convolution is -inf here")
    return -res.value


def add(f: PLFunction, g: PLFunction) -> PLFunction:
    if f.dim != g.dim:
        raise DimensionError("dimension mismatch")
    n = f.dim
    tot = n + 3  # x, t, t1, t2
    P1 = lift(f.epi, tot, list(range(n)) + [n + 1])
    P2 = lift(g.epi, tot, list(range(n)) + [n + 2])
    link = HPolyhedron(tot, (), ((tuple([ZERO] * n) + (mpq(1), mpq(-1), mpq(-1)), ZERO),))
    joint = intersect(P1, P2, link)
    if is_empty(joint):
        raise EmptyCommonDomain("the domains do not meet")
    return PLFunction(n, project(joint, range(n + 1)))


def scale(f: PLFunction, lam) -> PLFunction:
    """``lam * f`` for ``lam >= 0``, with ``0 * f`` read as the indicator of ``dom f``."""
    lam = q(lam)
    if lam < 0:
        raise ValueError("scaling factor must be nonnegative")
    if lam == 0:
        return PLFunction.indicator(f.domain)
    n = f.dim
    M = [[mpq(int(i == j)) if i < n else ZERO for j in range(n + 1)] for i in range(n + 1)]
    M[n][n] = 1 / lam
    return PLFunction(n, affine_preimage(f.epi, M))


def compose(g: PLFunction, A: Sequence[Sequence], shift: Optional[Sequence] = None) -> PLFunction:
    """``x -> g(A x + shift)`` with ``A`` of shape ``g.dim x n``."""
    A = [list(qvec(r)) for r in A]
    if len(A) != g.dim:
        raise DimensionError("map output dimension differs from g")
    n = len(A[0])
    M = [r + [ZERO] for r in A] + [[ZERO] * n + [mpq(1)]]
    s = (tuple(qvec(shift)) if shift is not None else tuple([ZERO] * g.dim)) + (ZERO,)
    epi = affine_preimage(g.epi, M, s)
    if is_empty(epi):
        raise InfeasibleComposition("the range of the map misses dom g")
    return PLFunction(n, epi)


def maximum(f: PLFunction, g: PLFunction) -> PLFunction:
    epi = intersect(f.epi, g.epi)
    if is_empty(epi):
        raise EmptyCommonDomain("the domains do not meet")
    return PLFunction(f.dim, epi)


def transpose(A):
    return [list(col) for col in zip(*A)]


# ---------------------------------------------------------------------------
# subdifferential


def subdifferential(f: PLFunction, xbar: Sequence) -> HPolyhedron:
    """``{x* : (x*, -1) in N((xbar, f(xbar)); epi f)}``."""
    val = evaluate(f, xbar)
    if val == INF:
        raise NotInDomain("base point outside dom f")
    n = f.dim
    N = normal_cone(f.epi, tuple(qvec(xbar)) + (val,))
    M = [[mpq(int(i == j)) for j in range(n)] for i in range(n)] + [[ZERO] * n]
    S = affine_preimage(N, M, tuple([ZERO] * n) + (mpq(-1),))
    if is_empty(S):
        raise InternalError("empty subdifferential at a point of the domain")
    return S


# ---------------------------------------------------------------------------
# conjugate calculus


@dataclass(frozen=True)
class ConjugateSumResult:
    lhs: object
    x1star: Optional[tuple]
    x2star: Optional[tuple]
    rhs: object
    qc: QCReport


def _function_qc(D1: HPolyhedron, D2: HPolyhedron) -> QCReport:
    qc = check_qualification(D1, D2)
    return replace(qc, any_holds=qc.interiority_1_meets_2 or qc.interiority_2_meets_1 or qc.attouch_brezis)


def conjugate_sum_rule(f: PLFunction, g: PLFunction, xstar: Sequence) -> ConjugateSumResult:
    """``(f+g)*(x*)`` directly and as ``f*(x1*) + g*(x2*)`` for an attaining split."""
    n = f.dim
    if is_empty(intersect(f.domain, g.domain)):
        raise EmptyCommonDomain("the domains do not meet")
    xstar = qvec(xstar)
    lhs = conjugate_value(add(f, g), xstar)
    # Omega_1 = {(x, l1, l2) : l1 >= f(x)}, Omega_2 = {(x, l1, l2) : l2 >= g(x)}
    O1 = lift(f.epi, n + 2, list(range(n)) + [n])
    O2 = lift(g.epi, n + 2, list(range(n)) + [n + 1])
    res = support_intersection(O1, O2, tuple(xstar) + (mpq(-1), mpq(-1)))
    qc = _function_qc(f.domain, g.domain)
    if res.value != lhs:
        raise InternalError("support of the epigraph intersection differs from (f+g)*")
    if lhs == INF:
        return ConjugateSumResult(lhs, None, None, INF, qc)
    x1, x2 = res.x1star[:n], res.x2star[:n]
    if res.x1star[n + 1] != 0 or res.x2star[n] != 0 or res.x1star[n] != -1 or res.x2star[n + 1] != -1:
        raise InternalError("split does not respect the product structure")
    rhs = conjugate_value(f, x1) + conjugate_value(g, x2)
    return ConjugateSumResult(lhs, x1, x2, rhs, qc)


@dataclass(frozen=True)
class ConjugateChainResult:
    lhs: object
    ystar: Optional[tuple]
    rhs: object
    qc: QCReport


def conjugate_chain_rule(g: PLFunction, A: Sequence[Sequence], xstar: Sequence) -> ConjugateChainResult:
    """``(g o A)*(x*)`` and a ``y*`` with ``A^T y* = x*`` attaining ``inf g*(y*)``."""
    A = [list(qvec(r)) for r in A]
    m, n = g.dim, len(A[0])
    xstar = qvec(xstar)
    comp = compose(g, A)
    lhs = conjugate_value(comp, xstar)
    tot = n + m + 1
    # gph A x R in (x, y, t)
    gph_rows = []
    for i in range(m):
        row = [ZERO] * tot
        for j in range(n):
            row[j] = A[i][j]
        row[n + i] = mpq(-1)
        gph_rows.append((tuple(row), ZERO))
    O1 = HPolyhedron(tot, (), tuple(gph_rows))
    O2 = lift(g.epi, tot, list(range(n, tot)))
    res = support_intersection(O1, O2, tuple(xstar) + tuple([ZERO] * m) + (mpq(-1),))
    if res.value != lhs:
        raise InternalError("support of the stacked sets differs from (g o A)*")
    rangeA = affine_image(HPolyhedron.universe(n), A)
    qc = check_qualification(g.domain, rangeA)
    qc = replace(qc, any_holds=qc.interiority_1_meets_2 or qc.attouch_brezis)
    if lhs == INF:
        return ConjugateChainResult(lhs, None, INF, qc)
    ystar = res.x2star[n : n + m]
    if any(v != 0 for v in res.x2star[:n]) or res.x2star[n + m] != -1:
        raise InternalError("split does not respect the product structure")
    At = transpose(A)
    if tuple(dot(row, ystar) for row in At) != tuple(xstar):
        raise InternalError("witness y* does not solve A^T y* = x*")
    return ConjugateChainResult(lhs, ystar, conjugate_value(g, ystar), qc)


def chain_rhs_value(g: PLFunction, A: Sequence[Sequence], xstar: Sequence):
    """``inf{g*(y*) : A^T y* = x*}`` computed from the closed-form conjugate of ``g``."""
    A = [list(qvec(r)) for r in A]
    gs = conjugate_closed_form(g)
    m = g.dim
    At = transpose(A)
    rows = tuple((tuple(r) + (ZERO,), xs) for r, xs in zip(At, qvec(xstar)))
    P = intersect(gs.epi, HPolyhedron(m + 1, (), rows))
    res = P.maximize(tuple([ZERO] * m) + (mpq(-1),))
    if isinstance(res, Infeasible):
        return INF
    if isinstance(res, Unbounded):
        raise ImproperResult("the infimum is -inf")
    return -res.value


@dataclass(frozen=True)
class ConjugateMaxResult:
    lhs: object
    lam: Optional[object]
    x1star: Optional[tuple]
    x2star: Optional[tuple]
    rhs: object


def convex_combination(f: PLFunction, g: PLFunction, lam) -> PLFunction:
    """``lam f + (1 - lam) g`` with the endpoint convention ``0 h = delta_{dom h}``."""
    lam = q(lam)
    return add(scale(f, lam), scale(g, 1 - lam))


def conjugate_max_rule(f: PLFunction, g: PLFunction, xstar: Sequence) -> ConjugateMaxResult:
    """``(f v g)*(x*)`` together with the attaining weight ``lam`` in ``[0, 1]``."""
    n = f.dim
    if is_empty(intersect(f.domain, g.domain)):
        raise EmptyCommonDomain("the domains do not meet")
    xstar = qvec(xstar)
    res = support_intersection(f.epi, g.epi, tuple(xstar) + (mpq(-1),))
    lhs = res.value
    if lhs == INF:
        return ConjugateMaxResult(lhs, None, None, None, INF)
    lam1, lam2 = -res.x1star[n], -res.x2star[n]
    if lam1 < 0 or lam2 < 0 or lam1 + lam2 != 1:
        raise InternalError("weights read off the split are not a convex combination")
    rhs = conjugate_value(convex_combination(f, g, lam1), xstar)
    return ConjugateMaxResult(lhs, lam1, res.x1star[:n], res.x2star[:n], rhs)


# ---------------------------------------------------------------------------
# subdifferential calculus


@dataclass(frozen=True)
class SetRuleResult:
    lhs: HPolyhedron
    rhs: HPolyhedron
    equal: bool


def subdiff_sum_rule(f: PLFunction, g: PLFunction, xbar: Sequence) -> SetRuleResult:
    if not in_domain(f, xbar) or not in_domain(g, xbar):
        raise NotInDomain("base point must be in both domains")
    lhs = subdifferential(add(f, g), xbar)
    rhs = minkowski_sum(subdifferential(f, xbar), subdifferential(g, xbar))
    return SetRuleResult(lhs, rhs, set_equal(lhs, rhs))


def subdiff_chain_rule(g: PLFunction, A: Sequence[Sequence], xbar: Sequence) -> SetRuleResult:
    A = [list(qvec(r)) for r in A]
    xbar = qvec(xbar)
    Ax = [dot(r, xbar) for r in A]
    if not in_domain(g, Ax):
        raise NotInDomain("A xbar outside dom g")
    lhs = subdifferential(compose(g, A), xbar)
    rhs = affine_image(subdifferential(g, Ax), transpose(A))
    return SetRuleResult(lhs, rhs, set_equal(lhs, rhs))


@dataclass(frozen=True)
class SubdiffMaxResult:
    case: str
    lhs: HPolyhedron
    rhs: HPolyhedron
    equal: bool
    usc_ok: bool


def subdiff_max_rule(f: PLFunction, g: PLFunction, xbar: Sequence) -> SubdiffMaxResult:
    """Case split on ``f(xbar)`` versus ``g(xbar)``.

    In cases a and b the inactive function must be upper semicontinuous at
    ``xbar``; for a PL function that means ``xbar`` is interior to its domain.
    ``usc_ok`` reports whether that hypothesis holds.
    """
    fx, gx = evaluate(f, xbar), evaluate(g, xbar)
    if fx == INF or gx == INF:
        raise NotInDomain("base point must be in both domains")
    lhs = subdifferential(maximum(f, g), xbar)
    pt = HPolyhedron.point(xbar)
    if fx > gx:
        case, rhs, usc = "a", subdifferential(f, xbar), interior_meets(g.domain, pt)
    elif fx < gx:
        case, rhs, usc = "b", subdifferential(g, xbar), interior_meets(f.domain, pt)
    else:
        case, usc = "c", True
        rhs = hull_of_union(subdifferential(f, xbar), subdifferential(g, xbar))
    return SubdiffMaxResult(case, lhs, rhs, set_equal(lhs, rhs), usc)
