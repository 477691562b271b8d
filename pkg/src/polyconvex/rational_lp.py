"""Exact rational scalars and a two-phase simplex solver.

Scalars are ``gmpy2.mpq`` values.  The two infinities of the extended reals
are the float constants :data:`INF` and :data:`NEG_INF`; they compare
correctly against ``mpq`` but must only be combined through :func:`ext_add`.

The solver handles ``max c.x  s.t.  A x <= b, E x = d`` with ``x`` free, by
splitting ``x = x+ - x-`` and running the textbook tableau with Bland's rule.
Every result carries an exact certificate that :func:`verify` re-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from gmpy2 import mpq

Rational = type(mpq())
ExtReal = Union[Rational, float]

INF = math.inf
NEG_INF = -math.inf

ZERO = mpq(0)
ONE = mpq(1)


class ParseError(ValueError):
    """A rational or extended-real literal could not be parsed."""


class DimensionError(ValueError):
    pass


class InfinityArithmeticError(ArithmeticError):
    """Raised for +inf + -inf."""


def q(value) -> Rational:
    """Coerce ints, Fractions, mpq and strings like ``"3/4"`` to ``mpq``."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    if isinstance(value, str):
        return parse_rational(value)
    return mpq(value)


def qvec(values) -> tuple:
    return tuple(q(v) for v in values)


def parse_rational(text: str) -> Rational:
    s = text.strip()
    if not s:
        raise ParseError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return mpq(p, d)


def format_rational(value: Rational) -> str:
    return str(mpq(value))


def parse_ext(text) -> ExtReal:
    if isinstance(text, str) and text.strip() in ("+inf", "inf"):
        return INF
    if isinstance(text, str) and text.strip() == "-inf":
        return NEG_INF
    if isinstance(text, int):
        return mpq(text)
    return parse_rational(text)


def format_ext(value: ExtReal) -> str:
    if value == INF:
        return "+inf"
    if value == NEG_INF:
        return "-inf"
    return format_rational(value)


def is_finite(value: ExtReal) -> bool:
    return value != INF and value != NEG_INF


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    a_inf = not is_finite(a)
    b_inf = not is_finite(b)
    if a_inf and b_inf:
        if a != b:
            raise InfinityArithmeticError("+inf + -inf is undefined")
        return a
    if a_inf:
        return a
    if b_inf:
        return b
    return a + b


def dot(u, v) -> Rational:
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class Optimal:
    """Optimal LP solution.

    For ``sense="max"`` the multipliers satisfy ``A^T lam + E^T mu = c`` with
    ``lam >= 0`` and ``value = b.lam + d.mu``.  For ``sense="min"`` they are
    the multipliers of the equivalent ``max -c.x`` problem, so
    ``A^T lam + E^T mu = -c`` and ``value = -(b.lam + d.mu)``.
    """

    value: Rational
    point: tuple
    ineq_duals: tuple
    eq_duals: tuple


@dataclass(frozen=True)
class Unbounded:
    point: tuple
    ray: tuple


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate: ``y >= 0``, ``A^T y + E^T z = 0``, ``b.y + d.z < 0``."""

    ineq_mult: tuple
    eq_mult: tuple


LPResult = Union[Optimal, Unbounded, Infeasible]


class InternalError(AssertionError):
    """A certificate failed exact re-verification (a solver bug)."""


# ---------------------------------------------------------------------------
# tableau simplex


def _pivot(rows, rhs, obj, objval, p, col):
    prow = rows[p]
    piv = prow[col]
    if piv != 1:
        inv = 1 / piv
        prow = [v * inv if v else v for v in prow]
        rows[p] = prow
        rhs[p] = rhs[p] * inv
    pr = rhs[p]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i == p:
            continue
        f = row[col]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
            rhs[i] -= f * pr
    f = obj[col]
    if f:
        for j in nz:
            obj[j] -= f * prow[j]
        objval -= f * pr
    return objval


def _run(rows, rhs, obj, objval, basis, allowed):
    """Bland's-rule primal simplex for ``max``; ``obj`` holds reduced costs.

    Returns ``(objval, None)`` at optimum or ``(objval, entering_column)``
    when the entering column has no positive entry (unbounded).
    """
    m = len(rows)
    while True:
        col = -1
        for j in allowed:
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return objval, None
        best = -1
        best_ratio = None
        for i in range(m):
            a = rows[i][col]
            if a > 0:
                r = rhs[i] / a
                if best < 0 or r < best_ratio or (r == best_ratio and basis[i] < basis[best]):
                    best, best_ratio = i, r
        if best < 0:
            return objval, col
        objval = _pivot(rows, rhs, obj, objval, best, col)
        basis[best] = col


def _reduced_costs(rows, rhs, basis, cost):
    obj = [-c for c in cost]
    objval = ZERO
    for i, bcol in enumerate(basis):
        cb = cost[bcol]
        if cb:
            row = rows[i]
            for j, v in enumerate(row):
                if v:
                    obj[j] += cb * v
            objval += cb * rhs[i]
    return obj, objval


def _primal_route(c, A, b, E, d) -> LPResult:
    """Tableau on ``x = x+ - x-`` plus one slack per inequality; rows are the constraints."""
    n = len(c)
    m1, m2 = len(A), len(E)
    m = m1 + m2
    ncols = 2 * n + m1
    sign = []
    raw = []
    for i in range(m1):
        a = A[i]
        bi = mpq(b[i])
        row = [mpq(v) for v in a] + [-mpq(v) for v in a] + [ZERO] * m1
        row[2 * n + i] = ONE
        s = 1 if bi >= 0 else -1
        if s < 0:
            row = [-v for v in row]
            bi = -bi
        sign.append(s)
        raw.append((row, bi))
    for k in range(m2):
        e = E[k]
        dk = mpq(d[k])
        row = [mpq(v) for v in e] + [-mpq(v) for v in e] + [ZERO] * m1
        s = 1 if dk >= 0 else -1
        if s < 0:
            row = [-v for v in row]
            dk = -dk
        sign.append(s)
        raw.append((row, dk))
    art_rows = [i for i in range(m) if i >= m1 or sign[i] < 0]
    nart = len(art_rows)
    total = ncols + nart
    rows, rhs, basis = [], [], []
    readcol = [0] * m
    art_of = {}
    for k, i in enumerate(art_rows):
        art_of[i] = ncols + k
    for i, (row, bi) in enumerate(raw):
        row = row + [ZERO] * nart
        if i in art_of:
            row[art_of[i]] = ONE
            basis.append(art_of[i])
        else:
            basis.append(2 * n + i)
        readcol[i] = basis[-1]
        rows.append(row)
        rhs.append(bi)

    structural = list(range(ncols))
    if nart:
        cost1 = [ZERO] * ncols + [-ONE] * nart
        obj, objval = _reduced_costs(rows, rhs, basis, cost1)
        objval, _ = _run(rows, rhs, obj, objval, basis, list(range(total)))
        if objval < 0:
            y = [obj[readcol[i]] + cost1[readcol[i]] for i in range(m)]
            y = [sign[i] * y[i] for i in range(m)]
            return Infeasible(tuple(y[:m1]), tuple(y[m1:]))
        for i in range(m):
            if basis[i] >= ncols:
                for j in structural:
                    if rows[i][j]:
                        objval = _pivot(rows, rhs, obj, objval, i, j)
                        basis[i] = j
                        break

    cost2 = [mpq(v) for v in c] + [-mpq(v) for v in c] + [ZERO] * (m1 + nart)
    obj, objval = _reduced_costs(rows, rhs, basis, cost2)
    objval, entering = _run(rows, rhs, obj, objval, basis, structural)

    z = [ZERO] * total
    for i, bcol in enumerate(basis):
        z[bcol] = rhs[i]
    point = tuple(z[j] - z[n + j] for j in range(n))
    if entering is not None:
        dz = [ZERO] * total
        dz[entering] = ONE
        for i, bcol in enumerate(basis):
            dz[bcol] = -rows[i][entering]
        ray = tuple(dz[j] - dz[n + j] for j in range(n))
        return Unbounded(point, ray)
    y = [sign[i] * obj[readcol[i]] for i in range(m)]
    return Optimal(objval, point, tuple(y[:m1]), tuple(y[m1:]))



def _standard_simplex(M, r, cost):
    """``max cost.z`` over ``{M z = r, z >= 0}`` with one artificial per row.

    Returns one of ``("optimal", z, pi, value)``, ``("unbounded", z, dz)`` or
    ``("infeasible", pi)``.  ``pi`` are the row multipliers in the original
    row orientation; for the infeasible case they satisfy ``pi.M >= 0`` and
    ``pi.r < 0`` columnwise.
    """
    m = len(M)
    ncols = len(cost)
    total = ncols + m
    rows, rhs, basis, sign = [], [], [], []
    for i in range(m):
        row = [mpq(v) for v in M[i]] + [ZERO] * m
        ri = mpq(r[i])
        s = 1
        if ri < 0:
            row = [-v for v in row]
            ri = -ri
            s = -1
        row[ncols + i] = ONE
        rows.append(row)
        rhs.append(ri)
        basis.append(ncols + i)
        sign.append(s)
    art = [ncols + i for i in range(m)]

    cost1 = [ZERO] * ncols + [-ONE] * m
    obj, objval = _reduced_costs(rows, rhs, basis, cost1)
    objval, _ = _run(rows, rhs, obj, objval, basis, list(range(total)))
    if objval < 0:
        pi = [sign[i] * (obj[art[i]] + cost1[art[i]]) for i in range(m)]
        return ("infeasible", pi)
    for i in range(m):
        if basis[i] >= ncols:
            for j in range(ncols):
                if rows[i][j]:
                    objval = _pivot(rows, rhs, obj, objval, i, j)
                    basis[i] = j
                    break

    cost2 = [mpq(v) for v in cost] + [ZERO] * m
    obj, objval = _reduced_costs(rows, rhs, basis, cost2)
    objval, entering = _run(rows, rhs, obj, objval, basis, list(range(ncols)))
    z = [ZERO] * total
    for i, bcol in enumerate(basis):
        z[bcol] = rhs[i]
    if entering is not None:
        dz = [ZERO] * total
        dz[entering] = ONE
        for i, bcol in enumerate(basis):
            dz[bcol] = -rows[i][entering]
        return ("unbounded", z[:ncols], dz[:ncols])
    pi = [sign[i] * obj[art[i]] for i in range(m)]
    return ("optimal", z[:ncols], pi, objval)


def _dual_route(c, A, b, E, d) -> LPResult:
    """Solve ``min b.y + d.mu`` over ``{A^T y + E^T mu = c, y >= 0}`` and read the primal off its multipliers.

    The tableau has one row per variable of the original problem, which is
    much smaller than the primal tableau when there are many more
    inequalities than variables.
    """
    n, m1, m2 = len(c), len(A), len(E)
    M = [[A[j][i] for j in range(m1)] + [E[k][i] for k in range(m2)] + [-E[k][i] for k in range(m2)] for i in range(n)]
    cost = [-mpq(v) for v in b] + [-mpq(v) for v in d] + [mpq(v) for v in d]

    def split(w):
        return tuple(w[:m1]), tuple(w[m1 : m1 + m2][k] - w[m1 + m2 + k] for k in range(m2))

    def primal_point():
        """A feasible primal point, or a Farkas certificate when there is none."""
        out = _standard_simplex(M, [ZERO] * n, cost)
        if out[0] == "unbounded":
            y, mu = split(out[2])
            return Infeasible(y, mu)
        return tuple(-v for v in out[2])

    out = _standard_simplex(M, c, cost)
    if out[0] == "optimal":
        _, w, pi, val = out
        y, mu = split(w)
        return Optimal(-val, tuple(-v for v in pi), y, mu)
    if out[0] == "unbounded":
        y, mu = split(out[2])
        return Infeasible(y, mu)
    ray = tuple(-v for v in out[1])
    x = primal_point()
    if isinstance(x, Infeasible):
        return x
    return Unbounded(x, ray)


def lp_maximize(c, A, b, E=(), d=()) -> LPResult:
    """Solve ``max c.x`` over ``{A x <= b, E x = d}`` exactly.

    ``A``/``E`` are sequences of rows; all entries must already be ``mpq``
    (or ints).  Problems with more constraints than variables go through the
    dual tableau.  The returned certificate is verified before returning.
    """
    if len(A) + len(E) > len(c) > 0:
        res = _dual_route(c, A, b, E, d)
    else:
        res = _primal_route(c, A, b, E, d)
    if not verify(res, c, A, b, E, d):
        raise InternalError(f"{type(res).__name__} certificate failed verification")
    return res


# ---------------------------------------------------------------------------
# certificate checks


def _feasible(x, A, b, E, d) -> bool:
    return all(dot(a, x) <= bi for a, bi in zip(A, b)) and all(
        dot(e, x) == di for e, di in zip(E, d)
    )


def verify_optimal(res: Optimal, c, A, b, E, d) -> bool:
    n = len(c)
    lam, mu = res.ineq_duals, res.eq_duals
    if any(v < 0 for v in lam):
        return False
    if not _feasible(res.point, A, b, E, d):
        return False
    for j in range(n):
        s = sum((lam[i] * A[i][j] for i in range(len(A)) if lam[i]), ZERO)
        s += sum((mu[k] * E[k][j] for k in range(len(E)) if mu[k]), ZERO)
        if s != c[j]:
            return False
    if dot(lam, b) + dot(mu, d) != res.value or dot(c, res.point) != res.value:
        return False
    # complementary slackness
    return all(lam[i] == 0 or dot(A[i], res.point) == b[i] for i in range(len(A)))


def verify_unbounded(res: Unbounded, c, A, b, E, d) -> bool:
    x, r = res.point, res.ray
    return (
        _feasible(x, A, b, E, d)
        and all(dot(a, r) <= 0 for a in A)
        and all(dot(e, r) == 0 for e in E)
        and dot(c, r) > 0
    )


def verify_infeasible(cert: Infeasible, A, b, E, d) -> bool:
    y, z = cert.ineq_mult, cert.eq_mult
    if any(v < 0 for v in y):
        return False
    n = len(A[0]) if A else (len(E[0]) if E else 0)
    for j in range(n):
        s = sum((y[i] * A[i][j] for i in range(len(A)) if y[i]), ZERO)
        s += sum((z[k] * E[k][j] for k in range(len(E)) if z[k]), ZERO)
        if s != 0:
            return False
    return dot(y, b) + dot(z, d) < 0


def verify(res: LPResult, c, A, b, E=(), d=()) -> bool:
    if isinstance(res, Optimal):
        return verify_optimal(res, c, A, b, E, d)
    if isinstance(res, Unbounded):
        return verify_unbounded(res, c, A, b, E, d)
    return verify_infeasible(res, A, b, E, d)


def solve_lp(objective: Sequence, sense: str, P) -> LPResult:
    """Optimize a linear objective over an :class:`~polyconvex.polyhedra.HPolyhedron`."""
    if len(objective) != P.dim:
        raise DimensionError(f"objective has length {len(objective)}, polyhedron dim {P.dim}")
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    c = qvec(objective)
    A = [a for a, _ in P.ineq]
    b = [bi for _, bi in P.ineq]
    E = [e for e, _ in P.eq]
    d = [di for _, di in P.eq]
    if sense == "max":
        return lp_maximize(c, A, b, E, d)
    res = lp_maximize(tuple(-v for v in c), A, b, E, d)
    if isinstance(res, Optimal):
        return Optimal(-res.value, res.point, res.ineq_duals, res.eq_duals)
    return res
