"""Seeded acceptance suites and the ten pass/fail criteria built on them.

Each suite writes one JSON line per instance. Skipped instances (a domain
precondition failed) are reported but do not count towards the target, so a
suite keeps drawing indices until it has ``count`` evaluated instances or hits
``max_draw_factor * count`` draws.
"""
from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from gmpy2 import mpq

from .checks import Report, adjoint_law, positive_homogeneity, run_instance
from .harness import report_line
from .instances import GenerationFailure, _point, _rand_map, generate
from .polyhedra import HPolyhedron, h_to_v
from .supports_normals import check_qualification


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    dims: tuple = (1, 4)
    # marginal checks project graphs living in dimension n + m, so blocks stay small
    budget: int = 4
    scale: float = 1.0
    sampler_seed: int = 0
    sampler_count: int = 100
    max_draw_factor: int = 3
    support_time_limit: float = 60.0
    out_dir: Optional[str] = None

    def n(self, count: int) -> int:
        return max(1, round(count * self.scale))


@dataclass
class SuiteResult:
    name: str
    target: int
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    oracle_checked: int = 0
    oracle_mismatches: int = 0
    seconds: float = 0.0
    digest: str = ""
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.oracle_mismatches == 0 and self.passed >= self.target

    def summary(self) -> str:
        return (
            f"{self.name}: {self.passed}/{self.target} pass, {self.failed} fail, {self.skipped} skip, "
            f"oracle {self.oracle_checked} checked / {self.oracle_mismatches} mismatched, {self.seconds:.1f}s"
        )


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title} -- {self.detail}"


def _stream(cfg: AcceptanceConfig, name: str, draw: Callable[[int], Optional[Report]], target: int) -> SuiteResult:
    res = SuiteResult(name, target)
    digest = hashlib.sha256()
    lines = []
    start = time.perf_counter()
    for index in range(target * cfg.max_draw_factor):
        if res.passed + res.failed >= target:
            break
        rep = draw(index)
        line = report_line(rep.to_json())
        lines.append(line + "\n")
        digest.update(line.encode() + b"\n")
        res.oracle_checked += rep.oracle.checked
        res.oracle_mismatches += len(rep.oracle.mismatches)
        if rep.verdict == "pass":
            res.passed += 1
        elif rep.verdict == "fail":
            res.failed += 1
            res.failures.append(rep.id)
        else:
            res.skipped += 1
    res.seconds = time.perf_counter() - start
    res.digest = digest.hexdigest()
    if cfg.out_dir:
        Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
        (Path(cfg.out_dir) / f"{name}.jsonl").write_text("".join(lines))
    return res


def instance_suite(cfg: AcceptanceConfig, kind: str, count: int, tag: str = "", **opts) -> SuiteResult:
    name = kind + (f"_{tag}" if tag else "")

    def draw(index):
        try:
            inst = generate(kind, cfg.seed, index, dims=cfg.dims, budget=cfg.budget, **opts)
        except GenerationFailure as err:
            return Report(id=f"{name}-s{cfg.seed}-{index}", kind=kind, verdict="skip", reason=f"GenerationFailure: {err}")
        inst["id"] = f"{name}-s{cfg.seed}-{index}"
        return run_instance(inst, cfg.sampler_seed, cfg.sampler_count)

    return _stream(cfg, name, draw, cfg.n(count))


def _rand_rational(rng: random.Random, lo=-3, hi=3) -> mpq:
    return mpq(rng.randint(lo, hi), rng.randint(1, 3))


def adjoint_suite(cfg: AcceptanceConfig, count: int = 100) -> SuiteResult:
    """``D*A(y*) = {A^T y*}`` for random integer matrices at random base points."""

    def draw(index):
        rng = random.Random(f"adjoint:{cfg.seed}:{index}")
        n, m = rng.randint(*cfg.dims), rng.randint(*cfg.dims)
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        xbar = [_rand_rational(rng) for _ in range(n)]
        ystar = [_rand_rational(rng) for _ in range(m)]
        ok = adjoint_law(A, xbar, ystar)
        return Report(id=f"adjoint-s{cfg.seed}-{index}", kind="adjoint_law", verdict="pass" if ok else "fail",
                      witnesses=[{"A": A, "xbar": xbar, "ystar": ystar}])

    return _stream(cfg, "adjoint_law", draw, cfg.n(count))


def homogeneity_suite(cfg: AcceptanceConfig, count: int = 100) -> SuiteResult:
    """``D*F(t y*) = t D*F(y*)`` for random polyhedral maps, base points on the graph and ``t > 0``."""

    def draw(index):
        rng = random.Random(f"homogeneity:{cfg.seed}:{index}")
        n, m = rng.randint(*cfg.dims), rng.randint(*cfg.dims)
        x0, y0 = _point(rng, n), _point(rng, m)
        try:
            F = _rand_map(rng, n, m, cfg.budget, x0 + y0)
        except (ValueError, ArithmeticError) as err:
            return Report(id=f"homogeneity-s{cfg.seed}-{index}", kind="homogeneity", verdict="skip", reason=str(err))
        # a vertex of the graph makes the normal cone nontrivial more often
        if rng.random() < 0.5:
            v = h_to_v(F.graph).vertices[0]
            x0, y0 = v[:n], v[n:]
        ystar = [_rand_rational(rng) for _ in range(m)]
        t = mpq(rng.randint(1, 9), rng.randint(1, 4))
        ok = positive_homogeneity(F, x0, y0, ystar, t)
        return Report(id=f"homogeneity-s{cfg.seed}-{index}", kind="homogeneity", verdict="pass" if ok else "fail",
                      witnesses=[{"graph": F.graph, "xbar": x0, "ybar": y0, "ystar": ystar, "t": t}])

    return _stream(cfg, "homogeneity", draw, cfg.n(count))


def _iv(lo, hi):
    return HPolyhedron.box([lo], [hi])


def _pt(*xs):
    return HPolyhedron.point([mpq(x) for x in xs])


BOX = HPolyhedron.box
LOWER = HPolyhedron(2, (((0, 1), 0),))  # y <= 0
UPPER = HPolyhedron(2, (((0, -1), 0),))  # y >= 0
LEFT = HPolyhedron(2, (((1, 0), 0),))  # x <= 0
X_AXIS = HPolyhedron(2, (), (((0, 1), 0),))
Y_AXIS = HPolyhedron(2, (), (((1, 0), 0),))

# (label, omega1, omega2, difference_interiority, interiority of omega1 meeting omega2, attouch_brezis)
QC_CASES = (
    ("touching intervals", _iv(-1, 0), _iv(0, 1), False, False, False),
    ("overlapping intervals", _iv(-1, 1), _iv(0, 2), True, True, True),
    ("equal points", _pt(0), _pt(0), False, False, True),
    ("point inside an interval", _pt(0), _iv(-1, 1), True, False, True),
    ("interval around a point", _iv(-1, 1), _pt(0), True, True, True),
    ("crossing axes", X_AXIS, Y_AXIS, True, False, True),
    ("same line twice", X_AXIS, X_AXIS, False, False, True),
    ("two crossing half-planes", LOWER, LEFT, True, True, True),
    ("opposite half-planes", LOWER, UPPER, False, False, False),
    ("half-plane and its boundary line", LOWER, X_AXIS, False, False, False),
    ("squares meeting at a corner", BOX([0, 0], [1, 1]), BOX([1, 1], [2, 2]), False, False, False),
    ("crossing segments", BOX([-1, 0], [1, 0]), BOX([0, -1], [0, 1]), True, False, True),
)


def qc_cases() -> list:
    """``(label, expected, observed)`` triples for the hand-derived qualification cases."""
    out = []
    for label, O1, O2, di, inter, ab in QC_CASES:
        qc = check_qualification(O1, O2)
        out.append((label, (di, inter, ab), (qc.difference_interiority, qc.interiority_1_meets_2, qc.attouch_brezis)))
    return out


SUITE_PLAN = {
    1: [("support_intersection", 300)],
    2: [("normal_intersection", 300)],
    3: [("conjugate_sum", 200), ("conjugate_chain", 200), ("conjugate_max", 200), ("biconjugate", 200)],
    4: [("subdiff_sum", 200), ("subdiff_chain", 200), ("subdiff_max", 200)],
    5: [("marginal_conjugate", 150), ("marginal_subdiff", 150), ("ordered_chain", 150)],
    6: [("cod_sum", 150), ("cod_chain", 150), ("cod_intersect", 150)],
}


def run_suites(cfg: AcceptanceConfig, log: Optional[Callable[[str], None]] = None) -> dict:
    """All instance suites, keyed by criterion number (7 holds the two extremal streams)."""
    results = {}
    for number, plan in SUITE_PLAN.items():
        results[number] = []
        for kind, count in plan:
            r = instance_suite(cfg, kind, count)
            results[number].append(r)
            if log:
                log(r.summary())
    results[6] += [adjoint_suite(cfg), homogeneity_suite(cfg)]
    results[7] = [
        instance_suite(cfg, "extremal", 100, tag="planted", extremal=True),
        instance_suite(cfg, "extremal", 100, tag="overlapping", extremal=False),
    ]
    if log:
        for r in results[6][-2:] + results[7]:
            log(r.summary())
    return results


TITLES = {
    1: "support function of an intersection",
    2: "normal cone of an intersection",
    3: "conjugate sum, chain and max rules with biconjugation",
    4: "subdifferential sum, chain and max rules",
    5: "marginal function conjugate and subdifferential",
    6: "coderivative rules, adjoint law and homogeneity",
    7: "extremal principle",
    8: "qualification condition flags",
    9: "oracle independence",
    10: "determinism",
}


def _suite_criterion(number: int, results: list, extra: str = "") -> Criterion:
    ok = all(r.ok for r in results)
    detail = "; ".join(r.summary() for r in results) + extra
    return Criterion(number, TITLES[number], ok, detail)


def evaluate_criteria(cfg: AcceptanceConfig, log: Optional[Callable[[str], None]] = None) -> list:
    first = run_suites(cfg, log)
    crits = []
    for number in range(1, 8):
        crit = _suite_criterion(number, first[number])
        if number == 1:
            secs = first[1][0].seconds
            budget = max(cfg.support_time_limit * cfg.scale, 10.0)
            crit.passed = crit.passed and secs < budget
            crit.detail += f"; limit {budget:.0f}s"
        crits.append(crit)

    cases = qc_cases()
    wrong = [(label, exp, got) for label, exp, got in cases if exp != got]
    crits.append(Criterion(8, TITLES[8], not wrong, f"{len(cases) - len(wrong)}/{len(cases)} cases exact" + (f"; wrong: {wrong}" if wrong else "")))

    oracle_suites = [r for n in range(1, 7) for r in first[n]]
    checked = sum(r.oracle_checked for r in oracle_suites)
    mism = sum(r.oracle_mismatches for r in oracle_suites)
    crits.append(Criterion(9, TITLES[9], mism == 0 and checked > 0, f"{checked} shared quantities compared, {mism} mismatches"))

    second = run_suites(cfg)
    pairs = [(a, b) for n in first for a, b in zip(first[n], second[n])]
    differ = [a.name for a, b in pairs if a.digest != b.digest]
    crits.append(Criterion(10, TITLES[10], not differ, f"{len(pairs)} report streams rerun, {len(differ)} differ" + (f": {differ}" if differ else "")))
    return crits


__all__ = [
    "AcceptanceConfig",
    "Criterion",
    "QC_CASES",
    "SuiteResult",
    "adjoint_suite",
    "evaluate_criteria",
    "homogeneity_suite",
    "instance_suite",
    "qc_cases",
    "run_suites",
]
