#!/usr/bin/env python3
"""Run every acceptance suite and print one PASS/FAIL line per criterion.

    python3 scripts/run_acceptance.py --out-dir reports/acceptance
    python3 scripts/run_acceptance.py --scale 0.1      # quick look
"""
import argparse
import sys
from dataclasses import fields

from polyconvex.acceptance import AcceptanceConfig, evaluate_criteria
from polyconvex.harness import parse_dims


def config_from_args(argv=None) -> AcceptanceConfig:
    defaults = {f.name: f.default for f in fields(AcceptanceConfig)}
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=defaults["seed"])
    ap.add_argument("--dims", type=parse_dims, default=defaults["dims"])
    ap.add_argument("--budget", type=int, default=defaults["budget"])
    ap.add_argument("--scale", type=float, default=defaults["scale"], help="fraction of the nominal instance counts")
    ap.add_argument("--sampler-count", type=int, default=defaults["sampler_count"])
    ap.add_argument("--out-dir", default=None, help="write one JSON-lines report per suite here")
    a = ap.parse_args(argv)
    return AcceptanceConfig(
        seed=a.seed, dims=a.dims, budget=a.budget,
        scale=a.scale, sampler_count=a.sampler_count, out_dir=a.out_dir,
    )


def main(argv=None) -> int:
    cfg = config_from_args(argv)
    crits = evaluate_criteria(cfg, log=lambda s: print("  " + s, flush=True))
    for c in crits:
        print(c.line())
    return 0 if all(c.passed for c in crits) else 1


if __name__ == "__main__":
    sys.exit(main())
