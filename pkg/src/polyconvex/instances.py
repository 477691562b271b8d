"""Instance files: JSON codec, schema validation, and seeded random generation."""
from __future__ import annotations

import json
import random
from typing import Optional

from gmpy2 import mpq

from .errors import ParseError, SchemaError
from .multimaps import Multimap
from .pl_functions import PLFunction, compose
from .polyhedra import HPolyhedron, as_cone, h_to_v, intersect
from .rational_lp import dot, format_rational, parse_rational

KINDS = (
    "support_intersection",
    "normal_intersection",
    "conjugate_sum",
    "conjugate_chain",
    "conjugate_max",
    "subdiff_sum",
    "subdiff_chain",
    "subdiff_max",
    "marginal_conjugate",
    "marginal_subdiff",
    "ordered_chain",
    "cod_sum",
    "cod_chain",
    "cod_intersect",
    "extremal",
    "biconjugate",
)

# payload fields and their types: set, fn, map, matrix, vector, cone
SCHEMAS = {
    "support_intersection": {"omega1": "set", "omega2": "set"},
    "normal_intersection": {"omega1": "set", "omega2": "set"},
    "extremal": {"omega1": "set", "omega2": "set"},
    "conjugate_sum": {"f": "fn", "g": "fn"},
    "conjugate_max": {"f": "fn", "g": "fn"},
    "subdiff_sum": {"f": "fn", "g": "fn"},
    "subdiff_max": {"f": "fn", "g": "fn"},
    "conjugate_chain": {"g": "fn", "A": "matrix"},
    "subdiff_chain": {"g": "fn", "A": "matrix"},
    "marginal_conjugate": {"phi": "fn", "F": "map"},
    "marginal_subdiff": {"phi": "fn", "F": "map"},
    "ordered_chain": {"Yplus": "cone", "A": "matrix", "b": "vector", "phi": "fn"},
    "cod_sum": {"F1": "map", "F2": "map"},
    "cod_chain": {"F": "map", "G": "map"},
    "cod_intersect": {"F1": "map", "F2": "map"},
    "biconjugate": {"f": "fn"},
}

OPTIONAL = {"marginal_subdiff": {"phi_y": "fn"}, "extremal": {"expect": "str"}}


# ---------------------------------------------------------------------------
# scalar codec


def enc(v) -> str:
    return format_rational(mpq(v))


def enc_vec(v) -> list:
    return [enc(x) for x in v]


def dec(v):
    if isinstance(v, bool):
        raise ParseError(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return mpq(v)
    if isinstance(v, str):
        return parse_rational(v)
    raise ParseError(f"expected a rational string or integer, got {v!r}")


def dec_vec(v) -> tuple:
    if not isinstance(v, list):
        raise SchemaError(f"expected a list, got {type(v).__name__}")
    return tuple(dec(x) for x in v)


def dec_matrix(v) -> list:
    if not isinstance(v, list) or not v:
        raise SchemaError("expected a nonempty list of rows")
    rows = [list(dec_vec(r)) for r in v]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError("ragged matrix")
    return rows


def decode_field(kind: str, value):
    try:
        if kind == "set":
            return HPolyhedron.from_json(value)
        if kind == "cone":
            return as_cone(HPolyhedron.from_json(value))
        if kind == "fn":
            return PLFunction.from_json(value)
        if kind == "map":
            return Multimap.from_json(value)
        if kind == "matrix":
            return dec_matrix(value)
        if kind == "vector":
            return dec_vec(value)
        if kind == "str":
            return str(value)
    except ParseError:
        raise
    except (KeyError, TypeError, AttributeError) as err:
        raise SchemaError(f"malformed {kind}: {err}") from err
    raise SchemaError(f"unknown field type {kind}")


def decode_payload(inst: dict) -> dict:
    if not isinstance(inst, dict):
        raise SchemaError("an instance must be a JSON object")
    kind = inst.get("kind")
    if kind not in SCHEMAS:
        raise SchemaError(f"unknown kind {kind!r}")
    payload = inst.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("payload must be an object")
    out = {}
    for name, typ in SCHEMAS[kind].items():
        if name not in payload:
            raise SchemaError(f"{kind} payload is missing {name!r}")
        out[name] = decode_field(typ, payload[name])
    for name, typ in OPTIONAL.get(kind, {}).items():
        if name in payload:
            out[name] = decode_field(typ, payload[name])
    return out


def load_instance(path) -> dict:
    with open(path) as fh:
        try:
            inst = json.load(fh)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err}") from err
    decode_payload(inst)
    return inst


# ---------------------------------------------------------------------------
# random generation


def _normal(rng, n):
    while True:
        a = [rng.randint(-3, 3) for _ in range(n)]
        if any(a):
            return a


def _point(rng, n, r=2):
    return [rng.randint(-r, r) for _ in range(n)]


def rand_set(rng, n, budget, p, slacks=(0, 0, 1, 2), bounded=True) -> HPolyhedron:
    """Random rows with normals in {-3..3} and offsets keeping ``p`` feasible, plus an optional box."""
    rows = []
    for _ in range(rng.randint(1, budget)):
        a = _normal(rng, n)
        rows.append((a, dot(a, p) + rng.choice(slacks)))
    if bounded:
        R = rng.randint(1, 3)
        for i in range(n):
            e = [0] * n
            e[i] = 1
            rows.append((list(e), p[i] + R))
            e[i] = -1
            rows.append((list(e), -p[i] + R))
    return HPolyhedron(n, tuple((tuple(a), b) for a, b in rows))


def rand_pieces(rng, n, budget):
    return [(tuple(rng.randint(-3, 3) for _ in range(n)), rng.randint(-3, 3)) for _ in range(rng.randint(1, budget))]


def rand_function(rng, n, budget, p, full_domain=None) -> PLFunction:
    pieces = rand_pieces(rng, n, min(budget, 4))
    if full_domain is None:
        full_domain = rng.random() < 0.5
    dom = None if full_domain else rand_set(rng, n, min(budget, 3), p, bounded=rng.random() < 0.5)
    return PLFunction.max_affine(pieces, dom, n)


def _slopes(f: PLFunction):
    n = f.dim
    return [tuple(-v / a[n] for v in a[:n]) for a, _ in f.epi.ineq if a[n] < 0]


def _set(P):
    return P.to_json()


def _fn(f):
    return f.to_json()


def _map(F):
    return F.to_json()


def _mat(A):
    return [enc_vec(r) for r in A]


def _rand_dual(rng, n):
    return enc_vec(rng.randint(-3, 3) for _ in range(n))


def _mix(rng, u, v):
    lam = mpq(rng.randint(0, 4), 4)
    return enc_vec(lam * a + (1 - lam) * b for a, b in zip(u, v))


def _dims(rng, dims):
    return rng.randint(dims[0], dims[1])


def gen_support_intersection(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    O1, O2 = rand_set(rng, n, budget, p), rand_set(rng, n, budget, p)
    probes = [_rand_dual(rng, n) for _ in range(5)]
    return {"omega1": _set(O1), "omega2": _set(O2)}, probes


def gen_normal_intersection(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    O1, O2 = rand_set(rng, n, budget, p), rand_set(rng, n, budget, p)
    v = h_to_v(intersect(O1, O2)).vertices[0]
    probes = [enc_vec(p)] + ([enc_vec(v)] if tuple(map(mpq, p)) != v else [])
    return {"omega1": _set(O1), "omega2": _set(O2)}, probes


def gen_extremal(rng, dims, budget, extremal: Optional[bool] = None):
    n = _dims(rng, dims)
    if extremal is None:
        extremal = rng.random() < 0.5
    p1 = _point(rng, n)
    if not extremal:
        O1 = rand_set(rng, n, budget, p1, slacks=(1, 2))
        O2 = rand_set(rng, n, budget, p1, slacks=(1, 2))
        return {"omega1": _set(O1), "omega2": _set(O2), "expect": "non_extremal"}, []
    c = _normal(rng, n)
    beta = dot(c, p1)
    p2 = [a + rng.randint(0, 1) * ci for a, ci in zip(p1, c)]
    O1 = intersect(rand_set(rng, n, budget, p1, slacks=(1, 2)), HPolyhedron(n, ((tuple(c), beta),)))
    O2 = intersect(rand_set(rng, n, budget, p2, slacks=(1, 2)), HPolyhedron(n, ((tuple(-v for v in c), -beta),)))
    return {"omega1": _set(O1), "omega2": _set(O2), "expect": "extremal"}, []


def gen_conjugate_sum(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    f, g = rand_function(rng, n, budget, p), rand_function(rng, n, budget, p)
    sf, sg = _slopes(f), _slopes(g)
    probes = [_rand_dual(rng, n) for _ in range(2)]
    probes += [enc_vec(a + b for a, b in zip(rng.choice(sf), rng.choice(sg))) for _ in range(3)]
    return {"f": _fn(f), "g": _fn(g)}, probes


def gen_conjugate_max(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    f, g = rand_function(rng, n, budget, p), rand_function(rng, n, budget, p)
    sf, sg = _slopes(f), _slopes(g)
    probes = [_rand_dual(rng, n) for _ in range(2)]
    probes += [_mix(rng, rng.choice(sf), rng.choice(sg)) for _ in range(3)]
    return {"f": _fn(f), "g": _fn(g)}, probes


def _chain_setup(rng, dims, budget):
    n, m = _dims(rng, dims), _dims(rng, dims)
    A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
    x0 = _point(rng, n)
    y0 = [dot(r, x0) for r in A]
    g = rand_function(rng, m, budget, y0)
    return n, m, A, x0, g


def gen_conjugate_chain(rng, dims, budget):
    n, m, A, x0, g = _chain_setup(rng, dims, budget)
    probes = [_rand_dual(rng, n) for _ in range(2)]
    for _ in range(3):
        y = rng.choice(_slopes(g))
        probes.append(enc_vec(sum(A[i][j] * y[i] for i in range(m)) for j in range(n)))
    return {"g": _fn(g), "A": _mat(A)}, probes


def gen_subdiff_chain(rng, dims, budget):
    n, m, A, x0, g = _chain_setup(rng, dims, budget)
    return {"g": _fn(g), "A": _mat(A)}, [enc_vec(x0)]


def gen_subdiff_sum(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    f, g = rand_function(rng, n, budget, p), rand_function(rng, n, budget, p)
    return {"f": _fn(f), "g": _fn(g)}, [enc_vec(p)]


def gen_subdiff_max(rng, dims, budget):
    n = _dims(rng, dims)
    p = _point(rng, n)
    pf = rand_pieces(rng, n, min(budget, 4))
    pg = rand_pieces(rng, n, min(budget, 4))
    if rng.random() < 0.5:
        fp = max(dot(a, p) + c for a, c in pf)
        gp = max(dot(a, p) + c for a, c in pg)
        pg = [(a, c + fp - gp) for a, c in pg]
    f, g = PLFunction.max_affine(pf, None, n), PLFunction.max_affine(pg, None, n)
    return {"f": _fn(f), "g": _fn(g)}, [enc_vec(p)]


def _marginal_setup(rng, dims, budget, param_independent=False):
    n, m = _dims(rng, dims), _dims(rng, dims)
    x0, y0 = _point(rng, n), _point(rng, m)
    F = Multimap(n, m, rand_set(rng, n + m, budget, x0 + y0))
    extra = {}
    if param_independent:
        phi_y = rand_function(rng, m, budget, y0)
        M = [[0] * n + [int(j == i) for j in range(m)] for i in range(m)]
        phi = compose(phi_y, M)
        extra["phi_y"] = _fn(phi_y)
    else:
        phi = rand_function(rng, n + m, budget, x0 + y0)
    return n, m, x0, {"phi": _fn(phi), "F": _map(F), **extra}


def gen_marginal_conjugate(rng, dims, budget):
    n, m, x0, payload = _marginal_setup(rng, dims, budget)
    return payload, [_rand_dual(rng, n) for _ in range(5)]


def gen_marginal_subdiff(rng, dims, budget):
    n, m, x0, payload = _marginal_setup(rng, dims, budget, param_independent=rng.random() < 0.5)
    return payload, [enc_vec(x0)]


def gen_ordered_chain(rng, dims, budget):
    n, m = _dims(rng, dims), _dims(rng, dims)
    if rng.random() < 0.5:
        B = [[int(i == j) for j in range(m)] for i in range(m)]
    else:
        B = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(rng.randint(1, m + 1))]
    Yplus = as_cone(HPolyhedron(m, tuple((tuple(-v for v in r), 0) for r in B)))
    pieces = []
    for _ in range(rng.randint(1, min(budget, 4))):
        lam = [rng.randint(0, 2) for _ in B]
        slope = tuple(sum(l * r[j] for l, r in zip(lam, B)) for j in range(m))
        pieces.append((slope, rng.randint(-3, 3)))
    phi = PLFunction.max_affine(pieces, None, m)
    A = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)]
    b = _point(rng, m)
    return {"Yplus": _set(Yplus), "A": _mat(A), "b": enc_vec(b), "phi": _fn(phi)}, [enc_vec(_point(rng, n))]


def _rand_map(rng, n, m, budget, p):
    return Multimap(n, m, rand_set(rng, n + m, budget, p, bounded=rng.random() < 0.5))


def gen_cod_sum(rng, dims, budget):
    n, m = _dims(rng, dims), _dims(rng, dims)
    x0, y1, y2 = _point(rng, n), _point(rng, m), _point(rng, m)
    F1, F2 = _rand_map(rng, n, m, budget, x0 + y1), _rand_map(rng, n, m, budget, x0 + y2)
    y = [a + b for a, b in zip(y1, y2)]
    probes = [{"x": enc_vec(x0), "y": enc_vec(y), "ystar": _rand_dual(rng, m)} for _ in range(2)]
    return {"F1": _map(F1), "F2": _map(F2)}, probes


def gen_cod_chain(rng, dims, budget):
    n, m, p = _dims(rng, dims), _dims(rng, dims), _dims(rng, dims)
    x0, y0, z0 = _point(rng, n), _point(rng, m), _point(rng, p)
    F, G = _rand_map(rng, n, m, budget, x0 + y0), _rand_map(rng, m, p, budget, y0 + z0)
    probes = [{"x": enc_vec(x0), "y": enc_vec(y0), "z": enc_vec(z0), "zstar": _rand_dual(rng, p)} for _ in range(2)]
    return {"F": _map(F), "G": _map(G)}, probes


def gen_cod_intersect(rng, dims, budget):
    n, m = _dims(rng, dims), _dims(rng, dims)
    x0, y0 = _point(rng, n), _point(rng, m)
    F1, F2 = _rand_map(rng, n, m, budget, x0 + y0), _rand_map(rng, n, m, budget, x0 + y0)
    probes = [{"x": enc_vec(x0), "y": enc_vec(y0), "ystar": _rand_dual(rng, m)} for _ in range(2)]
    return {"F1": _map(F1), "F2": _map(F2)}, probes


def gen_biconjugate(rng, dims, budget):
    n = _dims(rng, dims)
    f = rand_function(rng, n, budget, _point(rng, n))
    return {"f": _fn(f)}, [_rand_dual(rng, n) for _ in range(3)]


GENERATORS = {
    "support_intersection": gen_support_intersection,
    "normal_intersection": gen_normal_intersection,
    "extremal": gen_extremal,
    "conjugate_sum": gen_conjugate_sum,
    "conjugate_chain": gen_conjugate_chain,
    "conjugate_max": gen_conjugate_max,
    "subdiff_sum": gen_subdiff_sum,
    "subdiff_chain": gen_subdiff_chain,
    "subdiff_max": gen_subdiff_max,
    "marginal_conjugate": gen_marginal_conjugate,
    "marginal_subdiff": gen_marginal_subdiff,
    "ordered_chain": gen_ordered_chain,
    "cod_sum": gen_cod_sum,
    "cod_chain": gen_cod_chain,
    "cod_intersect": gen_cod_intersect,
    "biconjugate": gen_biconjugate,
}


class GenerationFailure(RuntimeError):
    pass


def generate(kind: str, seed: int, index: int, dims=(1, 3), budget: int = 4, retries: int = 20, **opts) -> dict:
    """Instance number ``index`` of a seeded stream; each index has its own generator state."""
    gen = GENERATORS[kind]
    last = None
    for attempt in range(retries):
        rng = random.Random(f"{kind}:{seed}:{index}:{attempt}")
        try:
            payload, probes = gen(rng, dims, budget, **opts)
        except (ValueError, ArithmeticError) as err:
            last = err
            continue
        return {"kind": kind, "id": f"{kind}-s{seed}-{index}", "payload": payload, "probes": probes}
    raise GenerationFailure(f"could not generate a well-posed {kind} instance: {last}")
