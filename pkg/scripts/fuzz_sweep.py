#!/usr/bin/env python3
"""Fuzz every instance kind and list the slowest instances, a quick health check after a change."""
import argparse
import time
from dataclasses import dataclass

from polyconvex.checks import run_instance
from polyconvex.harness import parse_dims
from polyconvex.instances import KINDS, GenerationFailure, generate


@dataclass(frozen=True)
class SweepConfig:
    seed: int = 1
    count: int = 30
    dims: tuple = (1, 3)
    slow_seconds: float = 2.0


def sweep(cfg: SweepConfig, kinds=KINDS):
    for kind in kinds:
        start, slow, failed, skipped = time.perf_counter(), [], [], 0
        for i in range(cfg.count):
            t = time.perf_counter()
            try:
                rep = run_instance(generate(kind, cfg.seed, i, dims=cfg.dims))
            except GenerationFailure:
                skipped += 1
                continue
            dt = time.perf_counter() - t
            if dt > cfg.slow_seconds:
                slow.append((i, round(dt, 1)))
            if rep.verdict == "fail":
                failed.append((i, rep.reason))
            skipped += rep.verdict == "skip"
        total = time.perf_counter() - start
        print(f"{kind:22s} {total:7.2f}s  fail={len(failed)} skip={skipped} slow={slow}", flush=True)
        for i, why in failed:
            print(f"    {kind}-s{cfg.seed}-{i}: {why}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--dims", type=parse_dims, default=(1, 3))
    ap.add_argument("--kinds", nargs="*", default=list(KINDS))
    a = ap.parse_args()
    sweep(SweepConfig(a.seed, a.count, a.dims), a.kinds)
