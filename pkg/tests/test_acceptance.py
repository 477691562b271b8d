"""The ten acceptance criteria, one test each.

Instance counts follow the nominal suite sizes. Set POLYCONVEX_ACCEPTANCE_SCALE
(e.g. 0.1) for a quicker partial run; the PASS/FAIL lines are printed in the
terminal summary either way.
"""
import os

import pytest

from polyconvex.acceptance import AcceptanceConfig, evaluate_criteria

CRITERION_LINES = []


@pytest.fixture(scope="module")
def criteria(tmp_path_factory):
    scale = float(os.environ.get("POLYCONVEX_ACCEPTANCE_SCALE", "1"))
    cfg = AcceptanceConfig(scale=scale, out_dir=str(tmp_path_factory.mktemp("acceptance")))
    crits = {c.number: c for c in evaluate_criteria(cfg)}
    CRITERION_LINES[:] = [crits[n].line() for n in sorted(crits)]
    return crits


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(criteria, number):
    c = criteria[number]
    print(c.line())
    assert c.passed, c.detail
