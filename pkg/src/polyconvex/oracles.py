"""Brute-force cross-checks built from generator (V-form) descriptions only.

Nothing here calls the LP-based support, conjugate or subdifferential code;
the only shared primitive is the double-description conversion.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import NotInDomain
from .polyhedra import EmptySetError, HPolyhedron, contains, feasible_point, h_to_v, intersect
from .rational_lp import INF, NEG_INF, ZERO, dot, format_ext, qvec


@dataclass
class OracleReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)

    def record(self, label, main, oracle):
        self.checked += 1
        if main != oracle:
            self.mismatches.append((label, main, oracle))

    def merge(self, other: "OracleReport") -> "OracleReport":
        self.checked += other.checked
        self.mismatches.extend(other.mismatches)
        return self

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, (tuple, list)):
                return [enc(x) for x in v]
            if isinstance(v, bool) or v is None or isinstance(v, str):
                return v
            return format_ext(v)

        return {"checked": self.checked, "mismatches": [[enc(x) for x in m] for m in self.mismatches]}


def _gen_sup(g, c):
    """``sup <c, z>`` over ``conv(V) + cone(R) + span(L)``."""
    if any(dot(c, r) > 0 for r in g.rays) or any(dot(c, l) != 0 for l in g.lineality):
        return INF
    return max(dot(c, v) for v in g.vertices)


def support_oracle(P: HPolyhedron, xstar: Sequence):
    try:
        g = h_to_v(P)
    except EmptySetError:
        return NEG_INF
    return _gen_sup(g, qvec(xstar))


def conjugate_oracle(f, xstar: Sequence):
    """``max over vertices (v, t) of <x*, v> - t``, or ``+inf`` if a ray or line increases it."""
    g = h_to_v(f.epi)
    return _gen_sup(g, tuple(qvec(xstar)) + (mpq(-1),))


def subgradient_oracle(f, xbar: Sequence, xstar: Sequence) -> bool:
    """The subgradient inequality checked on every generator of ``epi f``."""
    n = f.dim
    xbar = qvec(xbar)
    g = h_to_v(f.epi)
    # f(xbar) = min t over the fibre, found from the H-rows in closed form
    lows = [(b - dot(a[:n], xbar)) / a[n] for a, b in f.epi.ineq if a[n] < 0]
    fx = max(lows)
    if not contains(f.epi, tuple(xbar) + (fx,)):
        raise NotInDomain("base point outside dom f")
    xs = qvec(xstar)
    if any(dot(xs, v[:n]) - dot(xs, xbar) > v[n] - fx for v in g.vertices):
        return False
    if any(dot(xs, r[:n]) > r[n] for r in g.rays):
        return False
    return all(dot(xs, l[:n]) == l[n] for l in g.lineality)


def _sample_point(rng: random.Random, g):
    w = [mpq(rng.randint(0, 4)) for _ in g.vertices]
    if not any(w):
        w[0] = mpq(1)
    tot = sum(w)
    n = g.dim
    p = [sum((wi * v[i] for wi, v in zip(w, g.vertices)), ZERO) / tot for i in range(n)]
    for r in g.rays:
        c = mpq(rng.randint(0, 3), rng.randint(1, 3))
        p = [pi + c * ri for pi, ri in zip(p, r)]
    for l in g.lineality:
        c = mpq(rng.randint(-3, 3), rng.randint(1, 3))
        p = [pi + c * li for pi, li in zip(p, l)]
    return tuple(p)


def decomposition_sampler(target: HPolyhedron, preimage: HPolyhedron, image_map, seed: int = 0, count: int = 100) -> OracleReport:
    """Spot-check that ``target`` is the image of ``preimage`` under the linear ``image_map``.

    Every sampled preimage point must map into ``target``, and every vertex of
    ``target`` must have a preimage witness found by an LP.
    """
    rep = OracleReport()
    M = [list(qvec(r)) for r in image_map]
    try:
        gp = h_to_v(preimage)
    except EmptySetError:
        gp = None
    if gp is None:
        if feasible_point(target) is not None:
            rep.record("target nonempty but no decomposition exists", True, False)
        return rep
    for i in range(count):
        rng = random.Random(f"{seed}:{i}")
        z = _sample_point(rng, gp)
        img = tuple(dot(r, z) for r in M)
        rep.record(("sample", i), True, contains(target, img))
    try:
        gt = h_to_v(target)
    except EmptySetError:
        rep.record("image of a nonempty set is empty", True, False)
        return rep
    k = preimage.dim
    for v in gt.vertices:
        fib = intersect(preimage, HPolyhedron(k, (), tuple((tuple(r), vi) for r, vi in zip(M, v))))
        rep.record(("vertex witness", tuple(map(str, v))), True, feasible_point(fib) is not None)
    return rep
