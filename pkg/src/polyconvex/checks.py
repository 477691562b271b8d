"""Per-kind rule runners: execute one instance, cross-check against oracles, build a report."""
from __future__ import annotations

import copy
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from . import errors as E
from .instances import dec_vec, decode_payload
from .marginals import (
    MarginalProblem,
    OrderedChainProblem,
    dual_cone_check,
    epigraphical_coderivative_check,
    marginal_closed_form,
    marginal_conjugate,
    marginal_subdifferential,
    marginal_value,
    ordered_chain_rule,
    parameter_independent_rhs,
    solution_map,
)
from .multimaps import (
    Multimap,
    coderivative,
    coderivative_chain_rule,
    coderivative_intersection_rule,
    coderivative_sum_rule,
    lexmin_point,
    sum_decompositions,
)
from .oracles import OracleReport, conjugate_oracle, decomposition_sampler, subgradient_oracle, support_oracle
from .pl_functions import (
    PLFunction,
    add,
    biconjugate,
    chain_rhs_value,
    compose,
    conjugate_chain_rule,
    conjugate_closed_form,
    conjugate_max_rule,
    conjugate_sum_rule,
    conjugate_value,
    convex_combination,
    evaluate,
    functions_equal,
    inf_convolution_value,
    maximum,
    subdiff_chain_rule,
    subdiff_max_rule,
    subdiff_sum_rule,
    subdifferential,
)
from .polyhedra import (
    EmptySetError,
    HPolyhedron,
    affine_image,
    contains,
    h_to_v,
    interior_meets,
    intersect,
    is_empty,
    product,
    set_equal,
)
from .rational_lp import InternalError, dot, ext_add, format_ext, qvec
from .supports_normals import (
    QCReport,
    check_qualification,
    is_extremal_system,
    normal_intersection_rule,
    separate,
    support_intersection,
    support_value,
)

PRECONDITION_ERRORS = (
    E.NotInSet,
    E.NotInDomain,
    E.NotInGraph,
    E.NotADecomposition,
    E.BadIntermediatePoint,
    E.NotInBothGraphs,
    E.NotASolution,
    E.NotASubgradient,
    E.EmptyIntersection,
    E.EmptyCommonDomain,
    E.EmptyDomainIntersection,
    E.InfeasibleComposition,
    E.MinusInfinityDetected,
    E.MonotonicityViolation,
    E.ImproperResult,
    E.ImproperFunction,
    E.NotSolid,
    EmptySetError,
)


def jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (HPolyhedron, QCReport, OracleReport, PLFunction, Multimap)):
        return v.to_json()
    if isinstance(v, Fraction):
        return format_ext(mpq(v))
    return format_ext(v)


class Skip(Exception):
    pass


@dataclass
class Report:
    id: str
    kind: str
    verdict: str = "pass"
    reason: Optional[str] = None
    qc: Optional[QCReport] = None
    witnesses: list = field(default_factory=list)
    oracle: OracleReport = field(default_factory=OracleReport)
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "verdict": self.verdict,
            "reason": self.reason,
            "qc": self.qc.to_json() if self.qc else None,
            "witnesses": jsonable(self.witnesses),
            "oracle": self.oracle.to_json(),
            "counterexample": self.counterexample,
        }


class Ctx:
    """Collects failures, witnesses and oracle comparisons while a runner executes."""

    def __init__(self, inst: dict, sampler_seed: int = 0, sampler_count: int = 100):
        self.inst = inst
        self.failure = None
        self.witnesses = []
        self.oracle = OracleReport()
        self.qc = None
        self.skips = []
        self.probe = None
        self.sampler_seed = sampler_seed
        self.sampler_count = sampler_count

    def check(self, cond, what, **values) -> bool:
        if not cond and self.failure is None:
            self.failure = {"what": what, "probe": self.probe, "values": jsonable(values)}
        return bool(cond)

    def compare(self, label, main, oracle):
        before = len(self.oracle.mismatches)
        self.oracle.record(label, main, oracle)
        if len(self.oracle.mismatches) > before and self.failure is None:
            self.failure = {"what": f"oracle mismatch: {label}", "probe": self.probe, "values": jsonable([main, oracle])}

    def sample(self, target, preimage, image_map):
        rep = decomposition_sampler(target, preimage, image_map, self.sampler_seed, self.sampler_count)
        for m in rep.mismatches:
            if self.failure is None:
                self.failure = {"what": f"sampler: {m[0]}", "probe": self.probe, "values": None}
        self.oracle.merge(rep)


def _eye(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _subgradient_checks(ctx: Ctx, h: PLFunction, xbar, S: HPolyhedron):
    """Oracle membership and Fenchel-Young on the generators of ``S = d h(xbar)`` and nearby points."""
    fx = evaluate(h, xbar)
    g = h_to_v(S)
    for v in g.vertices:
        ctx.compare(("subgradient", jsonable(v)), True, subgradient_oracle(h, xbar, v))
        ctx.check(ext_add(fx, conjugate_value(h, v)) == dot(v, xbar), "Fenchel-Young equality on a subgradient", xstar=v)
        for i in range(h.dim):
            for s in (1, -1):
                w = tuple(x + (s if j == i else 0) for j, x in enumerate(v))
                member = contains(S, w)
                ctx.compare(("membership", jsonable(w)), member, subgradient_oracle(h, xbar, w))
                fy = ext_add(fx, conjugate_value(h, w)) == dot(w, xbar)
                ctx.check(fy == member, "Fenchel-Young characterization", xstar=w)
        for r in g.rays:
            w = tuple(a + b for a, b in zip(v, r))
            ctx.compare(("ray subgradient", jsonable(w)), True, subgradient_oracle(h, xbar, w))


def _biconjugate_check(ctx: Ctx, f: PLFunction, name: str):
    ctx.check(functions_equal(biconjugate(f), f), f"biconjugate of {name} differs from {name}")


# ---------------------------------------------------------------------------
# runners


def run_support_intersection(ctx, p, probes):
    O1, O2 = p["omega1"], p["omega2"]
    ctx.qc = check_qualification(O1, O2)
    I = intersect(O1, O2)
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        r = support_intersection(O1, O2, xs)
        ctx.check(r.value == support_value(I, xs), "value differs from the direct support", value=r.value)
        ctx.compare(("sigma", probe), r.value, support_oracle(I, xs))
        if r.x1star is not None:
            ctx.check(tuple(a + b for a, b in zip(r.x1star, r.x2star)) == tuple(xs), "split does not add up to x*")
            s1, s2 = support_value(O1, r.x1star), support_value(O2, r.x2star)
            ctx.check(ext_add(s1, s2) == r.value, "split does not attain", lhs=r.value, rhs=ext_add(s1, s2))
            ctx.compare(("sigma1", jsonable(r.x1star)), s1, support_oracle(O1, r.x1star))
            ctx.compare(("sigma2", jsonable(r.x2star)), s2, support_oracle(O2, r.x2star))
        for u in (xs, tuple(0 * v for v in xs)):
            w = tuple(a - b for a, b in zip(xs, u))
            bound = ext_add(support_value(O1, u), support_value(O2, w))
            ctx.check(r.value <= bound, "one-sided bound violated", value=r.value, bound=bound)
        ctx.witnesses.append({"xstar": xs, "value": r.value, "x1star": r.x1star, "x2star": r.x2star})


def run_normal_intersection(ctx, p, probes):
    O1, O2 = p["omega1"], p["omega2"]
    I = intersect(O1, O2)
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        r = normal_intersection_rule(O1, O2, xb)
        ctx.qc = ctx.qc or r.qc
        ctx.check(r.equal, "N(x; O1 cap O2) != N(x; O1) + N(x; O2)", lhs=r.lhs, rhs=r.rhs)
        g = h_to_v(r.lhs)
        for d in list(g.rays) + list(g.lineality) + [tuple(-v for v in l) for l in g.lineality]:
            ctx.compare(("normal generator", jsonable(d)), dot(d, xb), support_oracle(I, d))
        ctx.check(set_equal(subdifferential(PLFunction.indicator(I), xb), r.lhs), "normal cone differs from d(indicator)")
        ctx.witnesses.append({"xbar": xb, "cone": r.lhs})


def run_extremal(ctx, p, probes):
    O1, O2 = p["omega1"], p["omega2"]
    expect = p.get("expect")
    ext = is_extremal_system(O1, O2)
    if expect is not None:
        ctx.check(ext == (expect == "extremal"), "extremality verdict differs from the planted answer", extremal=ext)
    if not ext:
        try:
            separate(O1, O2)
            ctx.check(False, "separate accepted a non-extremal pair")
        except E.NotExtremal:
            pass
        ctx.witnesses.append({"extremal": False})
        return
    ctx.check(not interior_meets(O1, O2), "extremal sets with (int O1) meeting O2")
    w = separate(O1, O2)
    xs = w.separator
    ctx.check(any(xs), "zero separator")
    ctx.check(w.sup_value <= w.inf_value, "sup > inf", sup=w.sup_value, inf=w.inf_value)
    ctx.compare("sup over O1", w.sup_value, support_oracle(O1, xs))
    ctx.compare("inf over O2", w.inf_value, -support_oracle(O2, [-v for v in xs]))
    c = tuple(-v * w.k for v in w.translation)
    ctx.check(dot(xs, c) > 0, "<x*, c> must be positive")
    shifted = HPolyhedron(O1.dim, tuple((a, b + dot(a, w.translation)) for a, b in O1.ineq), tuple((e, d + dot(e, w.translation)) for e, d in O1.eq))
    ctx.check(is_empty(intersect(shifted, O2)), "translated sets still meet")
    ctx.witnesses.append({"extremal": True, "separator": xs, "sup": w.sup_value, "inf": w.inf_value, "translation": w.translation, "k": str(w.k)})


def run_conjugate_sum(ctx, p, probes):
    f, g = p["f"], p["g"]
    _biconjugate_check(ctx, f, "f")
    _biconjugate_check(ctx, g, "g")
    fs, gs = conjugate_closed_form(f), conjugate_closed_form(g)
    h = add(f, g)
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        r = conjugate_sum_rule(f, g, xs)
        ctx.qc = r.qc
        ctx.check(r.lhs == r.rhs, "(f+g)*(x*) != f*(x1*) + g*(x2*)", lhs=r.lhs, rhs=r.rhs)
        conv = inf_convolution_value(fs, gs, xs)
        ctx.check(r.lhs == conv, "(f+g)* != f* (+) g*", lhs=r.lhs, rhs=conv)
        ctx.compare(("(f+g)*", probe), r.lhs, conjugate_oracle(h, xs))
        if r.x1star is not None:
            ctx.check(tuple(a + b for a, b in zip(r.x1star, r.x2star)) == tuple(xs), "split does not add up")
            direct = ext_add(evaluate(fs, r.x1star), evaluate(gs, r.x2star))
            ctx.check(direct == r.lhs, "split fails direct evaluation", lhs=r.lhs, direct=direct)
            ctx.compare(("f*", jsonable(r.x1star)), conjugate_value(f, r.x1star), conjugate_oracle(f, r.x1star))
            ctx.compare(("g*", jsonable(r.x2star)), conjugate_value(g, r.x2star), conjugate_oracle(g, r.x2star))
        ctx.witnesses.append({"xstar": xs, "value": r.lhs, "x1star": r.x1star, "x2star": r.x2star})


def run_conjugate_chain(ctx, p, probes):
    g, A = p["g"], p["A"]
    _biconjugate_check(ctx, g, "g")
    gs = conjugate_closed_form(g)
    comp = compose(g, A)
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        r = conjugate_chain_rule(g, A, xs)
        ctx.qc = r.qc
        ctx.check(r.lhs == r.rhs, "(g o A)*(x*) != g*(y*)", lhs=r.lhs, rhs=r.rhs)
        inf = chain_rhs_value(g, A, xs)
        ctx.check(r.lhs == inf, "(g o A)* != inf over the adjoint fibre", lhs=r.lhs, rhs=inf)
        ctx.compare(("(g o A)*", probe), r.lhs, conjugate_oracle(comp, xs))
        if r.ystar is not None:
            At = list(zip(*A))
            ctx.check(tuple(dot(c, r.ystar) for c in At) == tuple(xs), "A^T y* != x*")
            ctx.check(evaluate(gs, r.ystar) == r.lhs, "g*(y*) fails direct evaluation")
            ctx.compare(("g*", jsonable(r.ystar)), conjugate_value(g, r.ystar), conjugate_oracle(g, r.ystar))
        ctx.witnesses.append({"xstar": xs, "value": r.lhs, "ystar": r.ystar})


def run_conjugate_max(ctx, p, probes):
    f, g = p["f"], p["g"]
    _biconjugate_check(ctx, f, "f")
    _biconjugate_check(ctx, g, "g")
    h = maximum(f, g)
    combos = [(lam, convex_combination(f, g, lam)) for lam in (mpq(0), mpq(1, 2), mpq(1))]
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        r = conjugate_max_rule(f, g, xs)
        ctx.check(r.lhs == r.rhs, "(f v g)*(x*) != [lam f + (1-lam) g]*(x*)", lhs=r.lhs, rhs=r.rhs, lam=r.lam)
        ctx.check(r.lhs == conjugate_value(h, xs), "support of the epigraph intersection differs from (f v g)*")
        ctx.compare(("(f v g)*", probe), r.lhs, conjugate_oracle(h, xs))
        if r.lam is not None:
            ctx.check(0 <= r.lam <= 1, "lambda outside [0, 1]", lam=r.lam)
        for lam, c in combos:
            ctx.check(r.lhs <= conjugate_value(c, xs), "one-sided max bound violated", lam=lam)
        ctx.witnesses.append({"xstar": xs, "value": r.lhs, "lambda": r.lam})


def run_subdiff_sum(ctx, p, probes):
    f, g = p["f"], p["g"]
    h = add(f, g)
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        r = subdiff_sum_rule(f, g, xb)
        ctx.check(r.equal, "d(f+g) != df + dg", lhs=r.lhs, rhs=r.rhs)
        _subgradient_checks(ctx, h, xb, r.lhs)
        ctx.witnesses.append({"xbar": xb, "subdifferential": r.lhs})


def run_subdiff_chain(ctx, p, probes):
    g, A = p["g"], p["A"]
    h = compose(g, A)
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        r = subdiff_chain_rule(g, A, xb)
        ctx.check(r.equal, "d(g o A) != A^T dg(A x)", lhs=r.lhs, rhs=r.rhs)
        _subgradient_checks(ctx, h, xb, r.lhs)
        ctx.witnesses.append({"xbar": xb, "subdifferential": r.lhs})


def run_subdiff_max(ctx, p, probes):
    f, g = p["f"], p["g"]
    h = maximum(f, g)
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        r = subdiff_max_rule(f, g, xb)
        ctx.witnesses.append({"xbar": xb, "case": r.case, "usc": r.usc_ok, "equal": r.equal})
        if not r.usc_ok:
            ctx.skips.append(f"upper semicontinuity fails at {jsonable(xb)}")
            continue
        ctx.check(r.equal, f"max rule case {r.case} fails", lhs=r.lhs, rhs=r.rhs)
        _subgradient_checks(ctx, h, xb, r.lhs)


def _marginal_qc(P: MarginalProblem) -> QCReport:
    qc = check_qualification(P.phi.domain, P.F.graph)
    return replace(qc, any_holds=qc.interiority_1_meets_2 or qc.attouch_brezis)


def run_marginal_conjugate(ctx, p, probes):
    P = MarginalProblem(p["phi"], p["F"])
    ctx.qc = _marginal_qc(P)
    mu = marginal_closed_form(P)
    phis = conjugate_closed_form(P.phi)
    m = P.m
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        r = marginal_conjugate(P, xs)
        ctx.check(r.mu_star == r.via_sum, "mu*(x*) != (phi + delta_gph)*(x*, 0)", mu=r.mu_star, via_sum=r.via_sum)
        ctx.check(r.via_sum == r.via_convolution, "(phi + delta)* != phi* (+) sigma_gph", via_sum=r.via_sum, conv=r.via_convolution)
        ctx.compare(("mu*", probe), r.mu_star, conjugate_oracle(mu, xs))
        if r.x1star is not None:
            tot = tuple(a + b for a, b in zip(r.x1star, r.x2star))
            ctx.check(tot == tuple(xs) + tuple([0] * m), "split does not add up to (x*, 0)")
            val = ext_add(evaluate(phis, r.x1star), support_value(P.F.graph, r.x2star))
            ctx.check(val == r.via_sum, "split fails direct evaluation", val=val)
            ctx.compare(("sigma_gph", jsonable(r.x2star)), support_value(P.F.graph, r.x2star), support_oracle(P.F.graph, r.x2star))
        ctx.witnesses.append({"xstar": xs, "value": r.mu_star, "x1star": r.x1star, "x2star": r.x2star})


def run_marginal_subdiff(ctx, p, probes):
    P = MarginalProblem(p["phi"], p["F"])
    ctx.qc = _marginal_qc(P)
    mu = marginal_closed_form(P)
    n, m = P.n, P.m
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        yb = lexmin_point(solution_map(P, xb))
        val = marginal_value(P, xb)
        ctx.check(val == evaluate(P.phi, tuple(xb) + tuple(yb)), "mu(x) != phi(x, y) at a solution")
        ctx.check(contains(P.F.image(xb), yb), "solution outside F(x)")
        ctx.check(val == evaluate(mu, xb), "closed-form mu disagrees with the inner LP")
        r = marginal_subdifferential(P, xb, yb)
        ctx.check(r.equal, "d mu computed three ways differs", lhs=r.lhs, rhs=r.rhs, sum_rep=r.sum_rep)
        if "phi_y" in p:
            cor = parameter_independent_rhs(p["phi_y"], P.F, xb, yb)
            ctx.check(set_equal(cor, r.lhs), "parameter-independent formula differs", lhs=r.lhs, rhs=cor)
        img = [[int(j == i) + int(j == n + m + i) for j in range(2 * n + m)] for i in range(n)]
        ctx.sample(r.rhs, r.preimage, img)
        _subgradient_checks(ctx, mu, xb, r.lhs)
        ctx.witnesses.append({"xbar": xb, "ybar": yb, "subdifferential": r.lhs})


def run_ordered_chain(ctx, p, probes):
    Q = OrderedChainProblem(p["Yplus"], p["A"], p["b"], p["phi"])
    for probe in probes:
        ctx.probe = probe
        xb = dec_vec(probe)
        r = ordered_chain_rule(Q, xb)
        ctx.check(r.equal, "d(phi o f) differs from the coderivative union", lhs=r.lhs, rhs=r.rhs, adjoint=r.adjoint_form)
        yb = Q.f(xb)
        ctx.check(dual_cone_check(Q.phi, Q.Yplus, yb), "a subgradient of a monotone function leaves the dual cone")
        for v in h_to_v(subdifferential(Q.phi, yb)).vertices:
            ctx.check(epigraphical_coderivative_check(Q, xb, v)[2], "D*F(y*) != {A^T y*}", ystar=v)
        _subgradient_checks(ctx, Q.composite, xb, r.lhs)
        ctx.witnesses.append({"xbar": xb, "subdifferential": r.lhs})


def run_cod_sum(ctx, p, probes):
    F1, F2 = p["F1"], p["F2"]
    m = F1.m
    n = F1.n
    for probe in probes:
        ctx.probe = probe
        xb, yb, ys = dec_vec(probe["x"]), dec_vec(probe["y"]), dec_vec(probe["ystar"])
        S = sum_decompositions(F1, F2, xb, yb)
        first = lexmin_point(S)
        if first is None:
            raise E.NotADecomposition("S(x, y) is empty")
        splits = [first]
        try:
            gv = h_to_v(S).vertices
            if gv and gv[-1] != first:
                splits.append(gv[-1])
        except EmptySetError:
            pass
        for sp in splits:
            y1, y2 = sp[:m], sp[m:]
            r = coderivative_sum_rule(F1, F2, xb, yb, y1, y2, ys)
            ctx.qc = r.qc
            ctx.check(r.equal, "D*(F1+F2) != D*F1 + D*F2", lhs=r.lhs, rhs=r.rhs, split=sp)
            D1 = coderivative(F1, xb, y1, ys)
            D2 = coderivative(F2, xb, y2, ys)
            if not is_empty(D1) and not is_empty(D2):
                ctx.sample(r.rhs, product(D1, D2), [[int(j == i) + int(j == n + i) for j in range(2 * n)] for i in range(n)])
            ctx.witnesses.append({"split": sp, "ystar": ys, "value": r.lhs})


def run_cod_chain(ctx, p, probes):
    F, G = p["F"], p["G"]
    n, m = F.n, F.m
    for probe in probes:
        ctx.probe = probe
        xb, yb, zb, zs = (dec_vec(probe[k]) for k in ("x", "y", "z", "zstar"))
        r = coderivative_chain_rule(F, G, xb, yb, zb, zs)
        ctx.qc = r.qc
        ctx.check(r.equal, "D*(G o F) != D*F o D*G", lhs=r.lhs, rhs=r.rhs)
        ctx.sample(r.rhs, r.preimage, [[int(j == i) for j in range(n + m)] for i in range(n)])
        ctx.witnesses.append({"zstar": zs, "value": r.lhs})


def run_cod_intersect(ctx, p, probes):
    F1, F2 = p["F1"], p["F2"]
    n, m = F1.n, F1.m
    for probe in probes:
        ctx.probe = probe
        xb, yb, ys = dec_vec(probe["x"]), dec_vec(probe["y"]), dec_vec(probe["ystar"])
        r = coderivative_intersection_rule(F1, F2, xb, yb, ys)
        ctx.qc = r.qc
        ctx.check(r.equal, "D*(F1 cap F2) != union of D*F1 + D*F2", lhs=r.lhs, rhs=r.rhs)
        ctx.sample(r.rhs, r.preimage, [[int(j == i) for j in range(2 * n + m)] for i in range(n)])
        ctx.witnesses.append({"ystar": ys, "value": r.lhs})


def run_biconjugate(ctx, p, probes):
    f = p["f"]
    _biconjugate_check(ctx, f, "f")
    fs = conjugate_closed_form(f)
    for probe in probes:
        ctx.probe = probe
        xs = dec_vec(probe)
        v = conjugate_value(f, xs)
        ctx.compare(("f*", probe), v, conjugate_oracle(f, xs))
        ctx.check(v == evaluate(fs, xs), "closed-form conjugate disagrees with the LP value", lp=v)
        ctx.witnesses.append({"xstar": xs, "value": v})


RUNNERS: dict = {
    "support_intersection": run_support_intersection,
    "normal_intersection": run_normal_intersection,
    "extremal": run_extremal,
    "conjugate_sum": run_conjugate_sum,
    "conjugate_chain": run_conjugate_chain,
    "conjugate_max": run_conjugate_max,
    "subdiff_sum": run_subdiff_sum,
    "subdiff_chain": run_subdiff_chain,
    "subdiff_max": run_subdiff_max,
    "marginal_conjugate": run_marginal_conjugate,
    "marginal_subdiff": run_marginal_subdiff,
    "ordered_chain": run_ordered_chain,
    "cod_sum": run_cod_sum,
    "cod_chain": run_cod_chain,
    "cod_intersect": run_cod_intersect,
    "biconjugate": run_biconjugate,
}


def run_instance(inst: dict, sampler_seed: int = 0, sampler_count: int = 100) -> Report:
    """Run one decoded-or-raw instance dict; schema errors propagate, domain errors become skips."""
    payload = decode_payload(inst)
    kind = inst["kind"]
    rep = Report(id=str(inst.get("id", kind)), kind=kind)
    ctx = Ctx(inst, sampler_seed, sampler_count)
    try:
        RUNNERS[kind](ctx, payload, inst.get("probes", []) or [])
    except PRECONDITION_ERRORS as err:
        ctx.skips.append(f"{type(err).__name__}: {err}")
    except InternalError as err:
        ctx.check(False, f"internal consistency failure: {err}")
    rep.qc, rep.witnesses, rep.oracle = ctx.qc, ctx.witnesses, ctx.oracle
    if ctx.failure is not None:
        rep.verdict = "fail"
        rep.reason = ctx.failure["what"]
        ce = copy.deepcopy(inst)
        if ctx.failure["probe"] is not None:
            ce["probes"] = [ctx.failure["probe"]]
        rep.counterexample = {"instance": ce, "values": ctx.failure["values"]}
    elif ctx.skips:
        rep.verdict = "skip"
        rep.reason = ctx.skips[0]
    return rep


# ---------------------------------------------------------------------------
# standalone law checks


def adjoint_law(A, xbar, ystar) -> bool:
    """``D*A(xbar, A xbar)(y*) == {A^T y*}`` for the linear map ``A``."""
    F = Multimap.linear(A)
    xb = qvec(xbar)
    yb = [dot(r, xb) for r in qvec_rows(A)]
    lhs = coderivative(F, xb, yb, ystar)
    At = list(zip(*qvec_rows(A)))
    return set_equal(lhs, HPolyhedron.point([dot(c, qvec(ystar)) for c in At]))


def qvec_rows(A):
    return [qvec(r) for r in A]


def positive_homogeneity(F: Multimap, xbar, ybar, ystar, t) -> bool:
    """``D*F(t y*) == t D*F(y*)`` for rational ``t > 0``."""
    t = mpq(t)
    ys = qvec(ystar)
    base = coderivative(F, xbar, ybar, ys)
    scaled = coderivative(F, xbar, ybar, [t * v for v in ys])
    if is_empty(base):
        return is_empty(scaled)
    return set_equal(scaled, affine_image(base, [[t if i == j else 0 for j in range(F.n)] for i in range(F.n)]))
