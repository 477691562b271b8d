"""H-polyhedra over the rationals and the set algebra built on them.

Every :class:`HPolyhedron` is stored canonically: equalities in reduced row
echelon form, inequalities reduced modulo the equalities, scaled to primitive
integer normals, deduplicated by direction and sorted lexicographically.
Canonical form does *not* remove LP-redundant rows; use
:func:`remove_redundancy` for that.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq

from .rational_lp import (
    ZERO,
    DimensionError,
    Infeasible,
    Optimal,
    Unbounded,
    dot,
    format_rational,
    lp_maximize,
    parse_rational,
    q,
    qvec,
)


class EmptySetError(ValueError):
    """An operation that needs a nonempty polyhedron received an empty one."""


# ---------------------------------------------------------------------------
# row arithmetic


def _primitive(a: Sequence) -> tuple:
    """Positive scalar ``s`` making ``s*a`` a primitive integer vector; returns (s*a, s)."""
    den = 1
    for v in a:
        if v:
            den = gmpy2.lcm(den, mpq(v).denominator)
    ints = [int(mpq(v) * den) for v in a]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(mpq(0) for _ in a), mpq(0)
    return tuple(mpq(v // g) for v in ints), mpq(den, g)


def _rref(rows: list, ncols: int):
    """Gauss-Jordan on augmented rows (length ncols+1). Returns (rows, pivots) or None if inconsistent."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[col]
        pr = [v * inv for v in pr]
        rows[r] = pr
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols]:
            return None
    return rows[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Canonical basis of ``{x : R x = 0}`` from the RREF of ``R``."""
    if not rows:
        return [tuple(mpq(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, pivots = _rref([list(r) + [ZERO] for r in rows], ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = mpq(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(_primitive(v)[0])
    return basis


def _canonicalize(dim: int, ineq, eq):
    eq_rows = [list(qvec(e)) + [q(c)] for e, c in eq]
    for e, _ in eq:
        if len(e) != dim:
            raise DimensionError(f"equality row of length {len(e)} in dim {dim}")
    for a, _ in ineq:
        if len(a) != dim:
            raise DimensionError(f"inequality row of length {len(a)} in dim {dim}")
    red = _rref(eq_rows, dim) if eq_rows else ([], [])
    if red is None:
        return None
    eq_red, pivots = red
    best = {}
    for a, b in ineq:
        a = list(qvec(a))
        b = q(b)
        for row, p in zip(eq_red, pivots):
            f = a[p]
            if f:
                a = [x - f * y for x, y in zip(a, row[:dim])]
                b -= f * row[dim]
        if not any(a):
            if b < 0:
                return None
            continue
        prim, s = _primitive(a)
        b = b * s
        if prim not in best or b < best[prim]:
            best[prim] = b
    ineq_c = tuple(sorted(best.items()))
    eq_c = tuple((tuple(r[:dim]), r[dim]) for r in eq_red)
    return ineq_c, eq_c


@dataclass(frozen=True)
class HPolyhedron:
    """``{x in Q^dim : <a,x> <= b for (a,b) in ineq, <e,x> = c for (e,c) in eq}``."""

    dim: int
    ineq: tuple = ()
    eq: tuple = ()
    trivially_empty: bool = field(default=False, compare=False)

    def __post_init__(self):
        res = _canonicalize(self.dim, self.ineq, self.eq)
        if res is None:
            zero = tuple(mpq(0) for _ in range(self.dim))
            object.__setattr__(self, "ineq", ((zero, mpq(-1)),))
            object.__setattr__(self, "eq", ())
            object.__setattr__(self, "trivially_empty", True)
        else:
            object.__setattr__(self, "ineq", res[0])
            object.__setattr__(self, "eq", res[1])
            object.__setattr__(self, "trivially_empty", False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def universe(cls, dim: int) -> "HPolyhedron":
        return cls(dim)

    @classmethod
    def empty(cls, dim: int) -> "HPolyhedron":
        return cls(dim, ((tuple([0] * dim), -1),))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "HPolyhedron":
        n = len(lo)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            if hi[i] is not None:
                rows.append((tuple(e), hi[i]))
            e = [0] * n
            e[i] = -1
            if lo[i] is not None:
                rows.append((tuple(e), -q(lo[i])))
        return cls(n, tuple(rows))

    @classmethod
    def point(cls, x: Sequence) -> "HPolyhedron":
        n = len(x)
        rows = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append((tuple(e), x[i]))
        return cls(n, (), tuple(rows))

    @classmethod
    def from_matrix(cls, A=(), b=(), E=(), d=(), dim=None) -> "HPolyhedron":
        if dim is None:
            dim = len(A[0]) if A else len(E[0])
        return cls(dim, tuple(zip(map(tuple, A), b)), tuple(zip(map(tuple, E), d)))

    # -- views -------------------------------------------------------------

    @property
    def A(self):
        return [a for a, _ in self.ineq]

    @property
    def b(self):
        return [b for _, b in self.ineq]

    @property
    def E(self):
        return [e for e, _ in self.eq]

    @property
    def d(self):
        return [d for _, d in self.eq]

    def maximize(self, c):
        return lp_maximize(qvec(c), self.A, self.b, self.E, self.d)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "ineq": [[format_rational(v) for v in a] + [format_rational(b)] for a, b in self.ineq],
            "eq": [[format_rational(v) for v in e] + [format_rational(c)] for e, c in self.eq],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HPolyhedron":
        dim = int(obj["dim"])

        def rows(key):
            out = []
            for r in obj.get(key, []):
                vals = [parse_rational(v) if isinstance(v, str) else q(v) for v in r]
                if len(vals) != dim + 1:
                    raise DimensionError(f"{key} row has {len(vals)} entries, expected {dim + 1}")
                out.append((tuple(vals[:dim]), vals[dim]))
            return tuple(out)

        return cls(dim, rows("ineq"), rows("eq"))

    def __str__(self):
        parts = [f"HPolyhedron(dim={self.dim}"]
        for a, b in self.ineq:
            parts.append(f"  [{' '.join(map(str, a))}] . x <= {b}")
        for e, c in self.eq:
            parts.append(f"  [{' '.join(map(str, e))}] . x == {c}")
        return "\n".join(parts) + ")"


@dataclass(frozen=True)
class PolyhedralCone(HPolyhedron):
    """An H-polyhedron all of whose right-hand sides are zero."""

    def __post_init__(self):
        super().__post_init__()
        if self.trivially_empty or any(b != 0 for _, b in self.ineq) or any(c != 0 for _, c in self.eq):
            raise ValueError("a polyhedral cone needs zero right-hand sides")


def as_cone(P: HPolyhedron) -> PolyhedralCone:
    return PolyhedralCone(P.dim, P.ineq, P.eq)


@dataclass(frozen=True)
class Generators:
    """``conv(vertices) + cone(rays) + span(lineality)``."""

    dim: int
    vertices: tuple = ()
    rays: tuple = ()
    lineality: tuple = ()

    def to_json(self) -> dict:
        def enc(vs):
            return [[format_rational(v) for v in x] for x in vs]

        return {
            "dim": self.dim,
            "vertices": enc(self.vertices),
            "rays": enc(self.rays),
            "lineality": enc(self.lineality),
        }


# ---------------------------------------------------------------------------
# basic queries


def _check_dim(P: HPolyhedron, n: int):
    if P.dim != n:
        raise DimensionError(f"dimension mismatch: polyhedron dim {P.dim}, got {n}")


def contains(P: HPolyhedron, x: Sequence) -> bool:
    _check_dim(P, len(x))
    x = qvec(x)
    return all(dot(a, x) <= b for a, b in P.ineq) and all(dot(e, x) == c for e, c in P.eq)


def feasible_point(P: HPolyhedron):
    """Some point of ``P`` or ``None`` when ``P`` is empty."""
    if P.trivially_empty:
        return None
    res = P.maximize([0] * P.dim)
    if isinstance(res, Infeasible):
        return None
    return res.point


def is_empty(P: HPolyhedron) -> bool:
    return feasible_point(P) is None


def intersect(*polys: HPolyhedron) -> HPolyhedron:
    n = polys[0].dim
    for P in polys:
        _check_dim(P, n)
    return HPolyhedron(n, sum((P.ineq for P in polys), ()), sum((P.eq for P in polys), ()))


def lift(P: HPolyhedron, dim: int, positions: Sequence[int]) -> HPolyhedron:
    """Embed ``P`` into ``Q^dim`` with coordinate ``i`` of ``P`` placed at ``positions[i]``.

    The remaining coordinates are unconstrained, so the result is ``P``
    times a whole space, up to a coordinate permutation.
    """
    if len(positions) != P.dim:
        raise DimensionError("positions must list one slot per coordinate")

    def up(a):
        row = [ZERO] * dim
        for i, p in enumerate(positions):
            row[p] = a[i]
        return tuple(row)

    return HPolyhedron(dim, tuple((up(a), b) for a, b in P.ineq), tuple((up(e), c) for e, c in P.eq))


def product(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    n = P.dim + Q.dim
    return intersect(lift(P, n, range(P.dim)), lift(Q, n, range(P.dim, n)))


def reorder(P: HPolyhedron, order: Sequence[int]) -> HPolyhedron:
    """Coordinates permuted so that new coordinate ``i`` is old coordinate ``order[i]``."""
    inv = {old: new for new, old in enumerate(order)}
    return lift(P, P.dim, [inv[i] for i in range(P.dim)])


# ---------------------------------------------------------------------------
# redundancy and projection


def _redundant_mask(rows, eq_rows):
    """LP test per row; rows are (a, b). Removes redundant rows one at a time."""
    alive = list(range(len(rows)))
    E = [e for e, _ in eq_rows]
    d = [c for _, c in eq_rows]
    for i in range(len(rows)):
        others = [j for j in alive if j != i]
        A = [rows[j][0] for j in others]
        b = [rows[j][1] for j in others]
        res = lp_maximize(rows[i][0], A, b, E, d)
        if isinstance(res, Optimal) and res.value <= rows[i][1]:
            alive.remove(i)
    return alive


def remove_redundancy(P: HPolyhedron) -> HPolyhedron:
    if P.trivially_empty:
        return P
    if is_empty(P):
        return HPolyhedron.empty(P.dim)
    alive = _redundant_mask(list(P.ineq), P.eq)
    return HPolyhedron(P.dim, tuple(P.ineq[i] for i in alive), P.eq)


def _norm_aug(row):
    a = row[:-1]
    prim, s = _primitive(a)
    if s == 0:
        return None, row[-1]
    return list(prim) + [row[-1] * s], None


def project(P: HPolyhedron, keep: Sequence[int]) -> HPolyhedron:
    """Exact shadow of ``P`` on the coordinates ``keep`` (in the given order).

    Equalities eliminate variables by substitution first; the rest goes
    through Fourier-Motzkin with Chernikov's history rule and LP pruning.
    """
    keep = tuple(keep)
    n = P.dim
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"bad projection indices {list(keep)} for dim {n}")
    return _project(P, keep)


@lru_cache(maxsize=4096)
def _project(P: HPolyhedron, keep: tuple) -> HPolyhedron:
    n = P.dim
    elim = [j for j in range(n) if j not in set(keep)]
    if not elim:
        return reorder(P, keep)
    if is_empty(P):
        return HPolyhedron.empty(len(keep))

    ineq = [list(a) + [b] for a, b in P.ineq]
    eq = [list(e) + [c] for e, c in P.eq]
    remaining = []
    for v in elim:
        piv = next((r for r in eq if r[v]), None)
        if piv is None:
            remaining.append(v)
            continue
        eq.remove(piv)
        inv = 1 / piv[v]
        piv = [x * inv for x in piv]
        for group in (eq, ineq):
            for idx, r in enumerate(group):
                f = r[v]
                if f:
                    group[idx] = [x - f * y for x, y in zip(r, piv)]

    rows = []
    for i, r in enumerate(ineq):
        nr, _ = _norm_aug(r)
        if nr is not None:
            rows.append((nr, frozenset([i])))
    active = set(keep) | set(remaining)
    step = 0
    todo = list(remaining)
    while todo:
        def cost(v):
            p = sum(1 for r, _ in rows if r[v] > 0)
            m = sum(1 for r, _ in rows if r[v] < 0)
            return (p * m - p - m, v)

        v = min(todo, key=cost)
        todo.remove(v)
        active.discard(v)
        step += 1
        pos = [(r, h) for r, h in rows if r[v] > 0]
        neg = [(r, h) for r, h in rows if r[v] < 0]
        new = {}

        def add(r, h):
            nr, _ = _norm_aug(r)
            if nr is None:
                return
            key = tuple(nr[:-1])
            if key not in new or nr[-1] < new[key][0][-1]:
                new[key] = (nr, h)

        for r, h in rows:
            if r[v] == 0:
                add(r, h)
        for rp, hp in pos:
            for rn, hn in neg:
                h = hp | hn
                if len(h) > step + 1:
                    continue
                cp, cn = rp[v], rn[v]
                add([cp * y - cn * x for x, y in zip(rp, rn)], h)
        rows = list(new.values())
        cols = sorted(active)
        if len(rows) > 2 * len(cols) + 2:
            sub = [([r[c] for c in cols], r[-1]) for r, _ in rows]
            sub_eq = [([e[c] for c in cols], e[-1]) for e in eq]
            alive = _redundant_mask(sub, sub_eq)
            # the history bound is only valid relative to an unpruned system, so
            # restart the bookkeeping with the pruned rows as the new originals
            rows = [(rows[i][0], frozenset([k])) for k, i in enumerate(alive)]
            step = 0

    out_ineq = tuple((tuple(r[k] for k in keep), r[-1]) for r, _ in rows)
    out_eq = tuple((tuple(e[k] for k in keep), e[-1]) for e in eq)
    return remove_redundancy(HPolyhedron(len(keep), out_ineq, out_eq))


# ---------------------------------------------------------------------------
# affine maps and Minkowski operations


def _matrix(A) -> list:
    return [list(qvec(row)) for row in A]


def affine_preimage(P: HPolyhedron, A, shift=None) -> HPolyhedron:
    """``{x : A x + shift in P}`` with ``A`` of shape ``P.dim x n``."""
    A = _matrix(A)
    if len(A) != P.dim:
        raise DimensionError(f"map has {len(A)} rows, polyhedron dim {P.dim}")
    n = len(A[0]) if A else 0
    if any(len(r) != n for r in A):
        raise DimensionError("ragged matrix")
    s = qvec(shift) if shift is not None else tuple(ZERO for _ in range(P.dim))

    def pull(a, b):
        row = tuple(sum((a[i] * A[i][j] for i in range(P.dim) if a[i]), ZERO) for j in range(n))
        return row, b - dot(a, s)

    return HPolyhedron(n, tuple(pull(a, b) for a, b in P.ineq), tuple(pull(e, c) for e, c in P.eq))


def affine_image(P: HPolyhedron, A, shift=None) -> HPolyhedron:
    """``{A x + shift : x in P}`` with ``A`` of shape ``m x P.dim``."""
    A = _matrix(A)
    m = len(A)
    if any(len(r) != P.dim for r in A):
        raise DimensionError(f"map columns must equal polyhedron dim {P.dim}")
    s = qvec(shift) if shift is not None else tuple(ZERO for _ in range(m))
    n = P.dim
    tot = m + n
    rows = []
    for i in range(m):
        row = [ZERO] * tot
        row[i] = mpq(1)
        for j in range(n):
            row[m + j] = -A[i][j]
        rows.append((tuple(row), s[i]))
    base = lift(P, tot, range(m, tot))
    joint = HPolyhedron(tot, base.ineq, base.eq + tuple(rows))
    return project(joint, range(m))


def affine_image_by_generators(P: HPolyhedron, A, shift=None) -> HPolyhedron:
    """Same set as :func:`affine_image`, by mapping vertices, rays and lines and re-deriving the H-form.

    Much cheaper than Fourier-Motzkin when the source has many rows but a
    moderate number of generators.
    """
    A = _matrix(A)
    m = len(A)
    if any(len(r) != P.dim for r in A):
        raise DimensionError(f"map columns must equal polyhedron dim {P.dim}")
    if is_empty(P):
        return HPolyhedron.empty(m)
    s = qvec(shift) if shift is not None else tuple(ZERO for _ in range(m))
    g = h_to_v(P)

    def lin(v):
        return tuple(dot(r, v) for r in A)

    verts = sorted({tuple(a + b for a, b in zip(lin(v), s)) for v in g.vertices})
    return v_to_h(Generators(m, tuple(verts), tuple(lin(r) for r in g.rays), tuple(lin(l) for l in g.lineality)))


def negate(P: HPolyhedron) -> HPolyhedron:
    n = P.dim
    return affine_preimage(P, [[-1 if i == j else 0 for j in range(n)] for i in range(n)])


def minkowski_sum(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """``{u + v : u in P, v in Q}`` from the generators: pairwise vertex sums, pooled rays and lines."""
    _check_dim(Q, P.dim)
    n = P.dim
    if is_empty(P) or is_empty(Q):
        return HPolyhedron.empty(n)
    gp, gq = h_to_v(P), h_to_v(Q)
    verts = sorted({tuple(a + b for a, b in zip(u, v)) for u in gp.vertices for v in gq.vertices})
    return v_to_h(Generators(n, tuple(verts), gp.rays + gq.rays, gp.lineality + gq.lineality))


def minkowski_sum_by_projection(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """Same set as :func:`minkowski_sum`, as the shadow of ``{(z, u) : u in P, z - u in Q}``."""
    _check_dim(Q, P.dim)
    n = P.dim
    if P.trivially_empty or Q.trivially_empty:
        return HPolyhedron.empty(n)
    up = lift(P, 2 * n, range(n, 2 * n))
    zq = affine_preimage(
        Q,
        [[(1 if j == i else 0) - (1 if j == n + i else 0) for j in range(2 * n)] for i in range(n)],
    )
    return project(intersect(up, zq), range(n))


def minkowski_diff(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """``P - Q = {u - v : u in P, v in Q}``."""
    _check_dim(Q, P.dim)
    return minkowski_sum(P, negate(Q))


# ---------------------------------------------------------------------------
# interiority, cones, subspaces


def origin_in_interior(P: HPolyhedron) -> bool:
    """Whether some L-infinity ball of positive radius around 0 lies in ``P``.

    In canonical form this holds iff there are no equality rows and every
    inequality is strict at the origin.
    """
    if P.trivially_empty or P.eq:
        return False
    return all(b > 0 for _, b in P.ineq)


def implicit_equalities(P: HPolyhedron) -> list:
    """Indices of the inequality rows that hold with equality on all of the nonempty ``P``."""
    out = []
    A = [a for a, _ in P.ineq]
    b = [c for _, c in P.ineq]
    E = [e for e, _ in P.eq]
    d = [c for _, c in P.eq]
    for i, (a, bi) in enumerate(P.ineq):
        res = lp_maximize(tuple(-x for x in a), A, b, E, d)
        if isinstance(res, Optimal) and -res.value == bi:
            out.append(i)
    return out


def difference_position(P: HPolyhedron, Q: HPolyhedron) -> tuple:
    """``(0 in ri(P - Q), 0 in int(P - Q))`` decided on ``P x Q`` without forming ``P - Q``.

    With ``L(x1, x2) = x1 - x2`` we have ``ri(P - Q) = L(ri(P x Q))``, so the
    first flag asks for a point of ``P x Q`` strictly inside every row that is
    not an implicit equality and with ``x1 = x2``. The second flag adds that
    ``L`` maps the direction space of ``aff(P x Q)`` onto ``Q^n``.
    """
    _check_dim(Q, P.dim)
    n = P.dim
    Z = product(P, Q)
    if is_empty(Z):
        return False, False
    imp = set(implicit_equalities(Z))
    strict = [r for i, r in enumerate(Z.ineq) if i not in imp]
    eqs = list(Z.eq) + [Z.ineq[i] for i in sorted(imp)]
    link = [(tuple(mpq(int(j == i) - int(j == n + i)) for j in range(2 * n)), ZERO) for i in range(n)]
    # maximize t subject to a.z + t <= b on the strict rows, t <= 1
    A = [tuple(a) + (mpq(1),) for a, _ in strict] + [tuple([ZERO] * (2 * n)) + (mpq(1),)]
    b = [c for _, c in strict] + [mpq(1)]
    E = [tuple(e) + (ZERO,) for e, _ in eqs + link]
    d = [c for _, c in eqs + link]
    res = lp_maximize(tuple([ZERO] * (2 * n)) + (mpq(1),), A, b, E, d)
    if not (isinstance(res, Optimal) and res.value > 0):
        return False, False
    images = [[u - w for u, w in zip(v[:n], v[n:])] for v in nullspace([e for e, _ in eqs], 2 * n)]
    rank = len(_rref([row + [ZERO] for row in images], n)[1]) if images else 0
    return True, rank == n


def interior_meets(P: HPolyhedron, Q: HPolyhedron) -> bool:
    """Whether ``int P`` and ``Q`` intersect (interior taken in the ambient space)."""
    _check_dim(Q, P.dim)
    if P.trivially_empty or Q.trivially_empty or P.eq:
        return False
    n = P.dim
    # maximize s subject to a.x + s <= b on P's rows, x in Q, s <= 1
    A = [tuple(a) + (mpq(1),) for a, _ in P.ineq] + [tuple(a) + (ZERO,) for a, _ in Q.ineq]
    b = [b for _, b in P.ineq] + [b for _, b in Q.ineq]
    A.append(tuple([ZERO] * n) + (mpq(1),))
    b.append(mpq(1))
    E = [tuple(e) + (ZERO,) for e, _ in Q.eq]
    d = [c for _, c in Q.eq]
    res = lp_maximize(tuple([ZERO] * n) + (mpq(1),), A, b, E, d)
    return isinstance(res, Optimal) and res.value > 0


def conic_hull(P: HPolyhedron) -> PolyhedralCone:
    """Closure of ``{t v : t > 0, v in P}``: the shadow of the homogenization of ``P``."""
    if is_empty(P):
        raise EmptySetError("conic hull of an empty set")
    n = P.dim
    ineq = [(tuple(a) + (-b,), ZERO) for a, b in P.ineq]
    ineq.append((tuple([ZERO] * n) + (mpq(-1),), ZERO))
    eq = [(tuple(e) + (-c,), ZERO) for e, c in P.eq]
    return as_cone(project(HPolyhedron(n + 1, tuple(ineq), tuple(eq)), range(n)))


def is_subspace(K: HPolyhedron) -> bool:
    """``K == -K``; for a cone this is exactly being a linear subspace."""
    return set_subset(negate(K), K)


# ---------------------------------------------------------------------------
# inclusion and equality


def set_subset(P: HPolyhedron, Q: HPolyhedron) -> bool:
    _check_dim(Q, P.dim)
    if is_empty(P):
        return True
    if Q.trivially_empty:
        return False
    own = set(P.ineq)
    for a, b in Q.ineq:
        if (a, b) in own:
            continue
        res = P.maximize(a)
        if isinstance(res, Unbounded) or res.value > b:
            return False
    own_eq = set(P.eq)
    for e, c in Q.eq:
        if (e, c) in own_eq:
            continue
        hi = P.maximize(e)
        lo = P.maximize([-v for v in e])
        if isinstance(hi, Unbounded) or isinstance(lo, Unbounded):
            return False
        if hi.value != c or -lo.value != c:
            return False
    return True


def set_equal(P: HPolyhedron, Q: HPolyhedron) -> bool:
    if P == Q:
        return True
    return set_subset(P, Q) and set_subset(Q, P)


# ---------------------------------------------------------------------------
# double description


def _int_row(row) -> list:
    prim, _ = _primitive(row)
    return [int(v) for v in prim]


def _int_gcd_normalize(v: list) -> list:
    g = 0
    for x in v:
        g = gcd(g, x)
    return [x // g for x in v] if g > 1 else v


def cone_generators(G: Sequence[Sequence], H: Sequence[Sequence], d: int):
    """Lines and extreme rays of ``{z in Q^d : G z >= 0, H z = 0}``.

    Returns ``(lines, rays)`` as lists of primitive integer vectors (mpq
    entries); the rays generate the pointed part inside the orthogonal
    complement of the lineality space.
    """
    G = [list(qvec(g)) for g in G]
    H = [list(qvec(h)) for h in H]
    lines = nullspace(G + H, d)
    W = nullspace(H + [list(l) for l in lines], d)
    k = len(W)
    if k == 0:
        return lines, []
    Gp = []
    for g in G:
        row = [dot(g, w) for w in W]
        if any(row):
            Gp.append(_int_row(row))
    # initial simplicial cone from k independent rows
    chosen = []
    basis_rows = []
    for i, g in enumerate(Gp):
        trial = basis_rows + [[mpq(v) for v in g] + [ZERO]]
        red = _rref(trial, k)
        if red is not None and len(red[0]) == len(trial):
            basis_rows = trial
            chosen.append(i)
            if len(chosen) == k:
                break
    if len(chosen) != k:
        raise AssertionError("cone is not pointed after removing lineality")
    # columns of the inverse of Gp[chosen]
    M = [[mpq(v) for v in Gp[i]] for i in chosen]
    rays = []
    for j in range(k):
        aug = [M[r] + [mpq(int(r == j))] for r in range(k)]
        red, piv = _rref(aug, k)
        sol = [ZERO] * k
        for row, p in zip(red, piv):
            sol[p] = row[k]
        rays.append(_int_gcd_normalize(_int_row(sol)))
    zsets = [frozenset(ci for ci, i in enumerate(chosen) if ci != j) for j in range(k)]
    # row ids: use index into Gp
    zsets = [frozenset(chosen[ci] for ci in z) for z in zsets]
    for i, g in enumerate(Gp):
        if i in chosen:
            continue
        vals = [sum(x * y for x, y in zip(g, r)) for r in rays]
        plus = [t for t, v in enumerate(vals) if v > 0]
        minus = [t for t, v in enumerate(vals) if v < 0]
        zero = [t for t, v in enumerate(vals) if v == 0]
        new_rays = [rays[t] for t in plus] + [rays[t] for t in zero]
        new_z = [zsets[t] for t in plus] + [zsets[t] | {i} for t in zero]
        for p in plus:
            for m_ in minus:
                common = zsets[p] & zsets[m_]
                if len(common) < k - 2:
                    continue
                adjacent = True
                for t in range(len(rays)):
                    if t != p and t != m_ and common <= zsets[t]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vm = vals[p], vals[m_]
                r = [vp * a - vm * b for a, b in zip(rays[m_], rays[p])]
                new_rays.append(_int_gcd_normalize(r))
                new_z.append(common | {i})
        rays, zsets = new_rays, new_z
    out = []
    for r in rays:
        z = [sum((mpq(r[j]) * W[j][c] for j in range(k)), ZERO) for c in range(d)]
        out.append(_primitive(z)[0])
    return lines, sorted(set(out))


def h_to_v(P: HPolyhedron) -> Generators:
    """Vertices, extreme rays and a lineality basis of a nonempty ``P``."""
    if is_empty(P):
        raise EmptySetError("h_to_v needs a nonempty polyhedron")
    n = P.dim
    G = [tuple(-v for v in a) + (b,) for a, b in P.ineq]
    G.append(tuple([ZERO] * n) + (mpq(1),))
    H = [tuple(-v for v in e) + (c,) for e, c in P.eq]
    lines, rays = cone_generators(G, H, n + 1)
    verts, dirs = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            verts.append(tuple(v / t for v in r[:n]))
        else:
            dirs.append(tuple(r[:n]))
    lin = [tuple(l[:n]) for l in lines]
    return Generators(n, tuple(sorted(verts)), tuple(sorted(dirs)), tuple(sorted(lin)))


def v_to_h(G: Generators) -> HPolyhedron:
    """H-form of ``conv(vertices) + cone(rays) + span(lineality)``."""
    n = G.dim
    if not G.vertices:
        return HPolyhedron.empty(n)
    rows = [tuple(-mpq(x) for x in v) + (mpq(1),) for v in G.vertices]
    rows += [tuple(-mpq(x) for x in r) + (ZERO,) for r in G.rays]
    eqs = [tuple(mpq(x) for x in l) + (ZERO,) for l in G.lineality]
    lines, rays = cone_generators(rows, eqs, n + 1)
    ineq = [(r[:n], r[n]) for r in rays if any(r[:n])]
    eq = [(l[:n], l[n]) for l in lines]
    return HPolyhedron(n, tuple(ineq), tuple(eq))


def hull_of_union(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """Closed convex hull of ``P`` and ``Q`` via their generators."""
    _check_dim(Q, P.dim)
    if is_empty(P):
        return Q
    if is_empty(Q):
        return P
    gp, gq = h_to_v(P), h_to_v(Q)
    return v_to_h(
        Generators(
            P.dim,
            gp.vertices + gq.vertices,
            gp.rays + gq.rays,
            gp.lineality + gq.lineality,
        )
    )


def generators_contain(G: Generators, x: Sequence) -> bool:
    """Membership of ``x`` in the set spanned by ``G``, decided by an LP in the multipliers."""
    n = G.dim
    x = qvec(x)
    nv, nr, nl = len(G.vertices), len(G.rays), len(G.lineality)
    if nv == 0:
        return False
    nvar = nv + nr + nl
    E, d = [], []
    for i in range(n):
        E.append(tuple(list(v[i] for v in G.vertices) + [r[i] for r in G.rays] + [l[i] for l in G.lineality]))
        d.append(x[i])
    E.append(tuple([mpq(1)] * nv + [ZERO] * (nr + nl)))
    d.append(mpq(1))
    A = []
    for j in range(nv + nr):
        row = [ZERO] * nvar
        row[j] = mpq(-1)
        A.append(tuple(row))
    res = lp_maximize(tuple([ZERO] * nvar), A, [ZERO] * len(A), E, d)
    return not isinstance(res, Infeasible)


def polyhedron_from_generators(vertices: Iterable = (), rays: Iterable = (), lineality: Iterable = (), dim=None):
    vertices = [qvec(v) for v in vertices]
    rays = [qvec(r) for r in rays]
    lineality = [qvec(l) for l in lineality]
    if dim is None:
        dim = len((vertices or rays or lineality)[0])
    return v_to_h(Generators(dim, tuple(vertices), tuple(rays), tuple(lineality)))
