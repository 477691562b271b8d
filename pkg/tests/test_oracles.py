from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import Q, interval, square
from polyconvex.oracles import OracleReport, conjugate_oracle, decomposition_sampler, subgradient_oracle, support_oracle
from polyconvex.pl_functions import PLFunction
from polyconvex.polyhedra import HPolyhedron
from polyconvex.rational_lp import INF, NEG_INF
from polyconvex.supports_normals import support_value

ABS = PLFunction.abs()


def test_conjugate_of_abs():
    assert conjugate_oracle(ABS, Q(0)) == 0
    assert conjugate_oracle(ABS, Q(2)) == INF
    assert conjugate_oracle(PLFunction.max_affine([([1], 0), ([2], -1)]), (mpq(3, 2),)) == mpq(1, 2)


def test_subgradients_of_abs():
    assert subgradient_oracle(ABS, Q(0), (mpq(1, 2),))
    assert not subgradient_oracle(ABS, Q(1), Q(0))
    assert subgradient_oracle(ABS, Q(1), Q(1))


def test_support_oracle_edge_cases():
    assert support_oracle(HPolyhedron.empty(1), Q(1)) == NEG_INF
    assert support_oracle(HPolyhedron(2, ()), Q(0, 0)) == 0
    assert support_oracle(HPolyhedron(2, ()), Q(0, 1)) == INF


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 4), st.integers(-5, 5), st.integers(-5, 5))
def test_support_oracle_agrees_with_lp(lo, width, a, b):
    P = square(lo, lo + width)
    assert support_oracle(P, Q(a, b)) == support_value(P, Q(a, b))


def test_sampler_vacuous_on_empty():
    rep = decomposition_sampler(HPolyhedron.empty(1), HPolyhedron.empty(2), [[1, 1]], seed=3, count=50)
    assert rep.ok and rep.checked == 0


def test_sampler_detects_missing_preimage():
    rep = decomposition_sampler(interval(0, 1), HPolyhedron.empty(2), [[1, 1]])
    assert not rep.ok


def test_sampler_catches_a_wrong_image():
    # [0,1]^2 maps onto [0,2] under (u, v) -> u + v, not onto [0,1]
    rep = decomposition_sampler(interval(0, 1), square(0, 1), [[1, 1]], seed=0, count=60)
    assert not rep.ok
    good = decomposition_sampler(interval(0, 2), square(0, 1), [[1, 1]], seed=0, count=60)
    assert good.ok and good.checked == 62


def test_sampler_is_seeded():
    a = decomposition_sampler(interval(0, 1), square(0, 1), [[1, 1]], seed=7, count=40)
    b = decomposition_sampler(interval(0, 1), square(0, 1), [[1, 1]], seed=7, count=40)
    assert a.to_json() == b.to_json()


def test_report_merge():
    r = OracleReport()
    r.record("x", 1, 1)
    r.merge(OracleReport(checked=2, mismatches=[("y", 0, 1)]))
    assert r.checked == 3 and not r.ok
    assert r.to_json() == {"checked": 3, "mismatches": [["y", "0", "1"]]}
