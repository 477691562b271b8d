"""Command-line front end: ``check``, ``fuzz`` and ``show``.

Reports are written as JSON lines (one object per instance, keys sorted) and
a plain-text summary goes to standard output. Exit status is 0 when nothing
failed, 1 when some identity was violated and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, TextIO

from .checks import Report, run_instance
from .errors import ParseError, SchemaError
from .instances import KINDS, GenerationFailure, dec_vec, decode_payload, generate, load_instance
from .multimaps import Multimap
from .pl_functions import PLFunction, conjugate_closed_form, evaluate
from .polyhedra import EmptySetError, Generators, HPolyhedron, contains, h_to_v
from .rational_lp import format_ext
from .supports_normals import support_value

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DIM_LIMITS = (1, 6)
BUDGET_LIMITS = (1, 12)


@dataclass(frozen=True)
class FuzzConfig:
    kind: str
    seed: int = 0
    count: int = 10
    dims: tuple = (1, 3)
    budget: int = 4
    sampler_seed: int = 0
    sampler_count: int = 100
    timing: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        lo, hi = self.dims
        if not (DIM_LIMITS[0] <= lo <= hi <= DIM_LIMITS[1]):
            raise ValueError(f"dims must satisfy {DIM_LIMITS[0]} <= A <= B <= {DIM_LIMITS[1]}, got {lo}..{hi}")
        if not (BUDGET_LIMITS[0] <= self.budget <= BUDGET_LIMITS[1]):
            raise ValueError(f"budget must lie in [{BUDGET_LIMITS[0]}, {BUDGET_LIMITS[1]}]")
        if self.count < 0:
            raise ValueError("count must be nonnegative")


def report_line(rep: dict) -> str:
    return json.dumps(rep, sort_keys=True, separators=(",", ":"))


def run_check(path: str, sampler_seed: int = 0, sampler_count: int = 100) -> Report:
    """Load, validate and run one instance file."""
    return run_instance(load_instance(path), sampler_seed, sampler_count)


def fuzz_reports(cfg: FuzzConfig) -> Iterator[dict]:
    """One report dict per generated instance, in index order."""
    for index in range(cfg.count):
        start = time.perf_counter()
        try:
            inst = generate(cfg.kind, cfg.seed, index, dims=cfg.dims, budget=cfg.budget)
        except GenerationFailure as err:
            rep = Report(id=f"{cfg.kind}-s{cfg.seed}-{index}", kind=cfg.kind, verdict="skip", reason=f"GenerationFailure: {err}")
        else:
            rep = run_instance(inst, cfg.sampler_seed, cfg.sampler_count)
        out = rep.to_json()
        if cfg.timing:
            out["wall_seconds"] = round(time.perf_counter() - start, 3)
        yield out


def fuzz(cfg: FuzzConfig, out: Optional[TextIO] = None) -> Counter:
    """Run the fuzz stream, optionally writing JSON lines to ``out``; returns verdict counts."""
    tally = Counter()
    for rep in fuzz_reports(cfg):
        tally[rep["verdict"]] += 1
        if out is not None:
            out.write(report_line(rep) + "\n")
    return tally


# ---------------------------------------------------------------------------
# show


def _gens_lines(g: Generators) -> list:
    lines = []
    for label, vs in (("vertex", g.vertices), ("ray", g.rays), ("line", g.lineality)):
        lines += [f"    {label} ({', '.join(format_ext(x) for x in v)})" for v in vs]
    return lines


def _poly_lines(P: HPolyhedron, indent="  ") -> list:
    lines = [f"{indent}H-form, dim {P.dim}:"]
    for a, b in P.ineq:
        lines.append(f"{indent}  [{' '.join(format_ext(x) for x in a)}] . x <= {format_ext(b)}")
    for e, c in P.eq:
        lines.append(f"{indent}  [{' '.join(format_ext(x) for x in e)}] . x == {format_ext(c)}")
    if not P.ineq and not P.eq:
        lines.append(f"{indent}  (no constraints)")
    try:
        g = h_to_v(P)
    except EmptySetError:
        return lines + [f"{indent}V-form: empty"]
    return lines + [f"{indent}V-form:"] + [indent + s[2:] for s in _gens_lines(g)]


def _probe_vector(probe) -> Optional[tuple]:
    if isinstance(probe, list):
        try:
            return dec_vec(probe)
        except (ParseError, SchemaError):
            return None
    return None


def render(inst: dict) -> str:
    """Human-readable H- and V-forms of every payload object plus probe evaluations."""
    payload = decode_payload(inst)
    out = [f"instance {inst.get('id', '?')} of kind {inst['kind']}"]
    probes = [_probe_vector(p) for p in inst.get("probes", []) or []]
    for name in sorted(payload):
        obj = payload[name]
        if isinstance(obj, PLFunction):
            out.append(f"{name}: function on Q^{obj.dim}")
            out.append("  epigraph:")
            out += _poly_lines(obj.epi, "    ")
            out.append("  domain:")
            out += _poly_lines(obj.domain, "    ")
            cj = conjugate_closed_form(obj)
            for x in probes:
                if x is not None and len(x) == obj.dim:
                    xs = ", ".join(map(format_ext, x))
                    out.append(f"  {name}({xs}) = {format_ext(evaluate(obj, x))}; {name}*({xs}) = {format_ext(evaluate(cj, x))}")
        elif isinstance(obj, Multimap):
            out.append(f"{name}: multimap Q^{obj.n} =>> Q^{obj.m}")
            out.append("  graph:")
            out += _poly_lines(obj.graph, "    ")
            out.append("  dom:")
            out += _poly_lines(obj.dom, "    ")
        elif isinstance(obj, HPolyhedron):
            out.append(f"{name}: set in Q^{obj.dim}")
            out += _poly_lines(obj, "  ")
            for x in probes:
                if x is not None and len(x) == obj.dim:
                    xs = ", ".join(map(format_ext, x))
                    out.append(f"  ({xs}) in {name}: {contains(obj, x)}; support value {format_ext(support_value(obj, x))}")
        elif isinstance(obj, list):
            out.append(f"{name}: matrix")
            out += ["  [" + " ".join(format_ext(v) for v in row) + "]" for row in obj]
        elif isinstance(obj, tuple):
            out.append(f"{name}: ({', '.join(map(format_ext, obj))})")
        else:
            out.append(f"{name}: {obj}")
    if inst.get("probes"):
        out.append("probes:")
        out += [f"  {json.dumps(p, sort_keys=True)}" for p in inst["probes"]]
    return "\n".join(out)


# ---------------------------------------------------------------------------
# argument parsing


def parse_dims(text: str) -> tuple:
    """``"A..B"`` or a single ``"A"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like A..B, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyconvex", description="Exact convex calculus checks for polyhedral data.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the rule named in an instance file")
    c.add_argument("file")
    c.add_argument("--out", help="append the JSON report line here instead of stdout")
    c.add_argument("--sampler-seed", type=int, default=0)
    c.add_argument("--sampler-count", type=int, default=100)

    f = sub.add_parser("fuzz", help="generate and check seeded random instances")
    f.add_argument("--kind", required=True, help=f"one of {', '.join(KINDS)}, or 'all'")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--count", type=int, default=10)
    f.add_argument("--dims", type=parse_dims, default=(1, 3))
    f.add_argument("--budget", type=int, default=4)
    f.add_argument("--out", help="JSON-lines report file")
    f.add_argument("--sampler-seed", type=int, default=0)
    f.add_argument("--sampler-count", type=int, default=100)
    f.add_argument("--timing", action="store_true", help="add a wall-clock field (reports stop being byte-reproducible)")

    s = sub.add_parser("show", help="print H- and V-forms of an instance")
    s.add_argument("file")
    return ap


def _summary(name: str, tally: Counter) -> str:
    return f"{name}: {tally['pass']} pass, {tally['fail']} fail, {tally['skip']} skip"


def _cmd_check(args) -> int:
    rep = run_check(args.file, args.sampler_seed, args.sampler_count)
    line = report_line(rep.to_json())
    if args.out:
        with open(args.out, "a") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    suffix = f" ({rep.reason})" if rep.reason else ""
    print(f"{rep.id}: {rep.verdict}{suffix}")
    return EXIT_FAIL if rep.verdict == "fail" else EXIT_OK


def _cmd_fuzz(args) -> int:
    kinds = list(KINDS) if args.kind == "all" else [args.kind]
    try:
        cfgs = [
            FuzzConfig(k, args.seed, args.count, tuple(args.dims), args.budget, args.sampler_seed, args.sampler_count, args.timing)
            for k in kinds
        ]
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    total = Counter()
    fh = open(args.out, "w") if args.out else None
    try:
        for cfg in cfgs:
            tally = fuzz(cfg, fh)
            total += tally
            print(_summary(cfg.kind, tally))
    finally:
        if fh:
            fh.close()
    if len(cfgs) > 1:
        print(_summary("total", total))
    return EXIT_FAIL if total["fail"] else EXIT_OK


def _cmd_show(args) -> int:
    print(render(load_instance(args.file)))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": _cmd_check, "fuzz": _cmd_fuzz, "show": _cmd_show}[args.command]
    try:
        return handler(args)
    except (ParseError, SchemaError, ValueError, OSError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
