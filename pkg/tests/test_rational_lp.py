import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from polyconvex.polyhedra import HPolyhedron
from polyconvex.rational_lp import (
    _dual_route,
    _primal_route,
    INF,
    NEG_INF,
    Infeasible,
    InfinityArithmeticError,
    Optimal,
    ParseError,
    Unbounded,
    ext_add,
    format_ext,
    lp_maximize,
    parse_ext,
    parse_rational,
    q,
    solve_lp,
    verify,
)


def test_parse_and_format_roundtrip():
    assert parse_rational("6/4") == mpq(3, 2)
    assert format_ext(parse_ext("-7/21")) == "-1/3"
    assert parse_ext("+inf") == INF
    assert format_ext(NEG_INF) == "-inf"


@pytest.mark.parametrize("text", ["1/0", "", "1.5", "a/b", "1/2/3"])
def test_malformed_rationals(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_floats_rejected():
    with pytest.raises(TypeError):
        q(0.5)


def test_ext_add():
    assert ext_add(INF, mpq(3)) == INF
    assert ext_add(mpq(1, 2), mpq(1, 3)) == mpq(5, 6)
    with pytest.raises(InfinityArithmeticError):
        ext_add(INF, NEG_INF)


def test_box_optimum_at_vertex():
    P = HPolyhedron.box([-1, -1], [1, 1])
    res = solve_lp([1, 1], "max", P)
    assert isinstance(res, Optimal)
    assert res.value == 2 and res.point == (1, 1)


def test_unbounded_ray():
    P = HPolyhedron(1, (((-1,), 0),))
    res = solve_lp([1], "max", P)
    assert isinstance(res, Unbounded)
    assert res.point == (0,) and res.ray[0] > 0


def test_infeasible_certificate():
    P_rows = [(1,), (-1,)]
    res = lp_maximize((mpq(1),), P_rows, [mpq(-1), mpq(-2)])
    assert isinstance(res, Infeasible)
    assert verify(res, (mpq(1),), P_rows, [mpq(-1), mpq(-2)])


def test_min_sense():
    res = solve_lp([1, 2], "min", HPolyhedron.box([-1, 0], [3, 5]))
    assert isinstance(res, Optimal) and res.value == -1


def test_equality_rows():
    # max x + y  s.t.  x - y = 1, 0 <= x <= 4
    res = lp_maximize(
        (mpq(1), mpq(1)),
        [(mpq(1), mpq(0)), (mpq(-1), mpq(0))],
        [mpq(4), mpq(0)],
        [(mpq(1), mpq(-1))],
        [mpq(1)],
    )
    assert isinstance(res, Optimal) and res.value == 7


small = st.integers(-4, 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=5), st.tuples(small, small))
def test_certificates_always_verify(rows, c):
    """Whatever the outcome, the returned certificate checks out exactly."""
    A = [(mpq(a), mpq(b)) for a, b, _ in rows]
    b = [mpq(r) for *_, r in rows]
    cc = tuple(map(mpq, c))
    res = lp_maximize(cc, A, b)
    assert verify(res, cc, A, b)
    if isinstance(res, Optimal):
        # weak duality: y >= 0, A^T y = c, b.y = value
        assert all(y >= 0 for y in res.ineq_duals)
        assert sum((y * bi for y, bi in zip(res.ineq_duals, b)), mpq(0)) == res.value


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(small, small, small, small), min_size=0, max_size=7),
    st.lists(st.tuples(small, small, small, small), min_size=0, max_size=2),
    st.tuples(small, small, small),
)
def test_primal_and_dual_tableaux_agree(ineq, eq, c):
    """Both tableau layouts reach the same verdict and optimal value, each with a valid certificate."""
    A = [tuple(map(mpq, r[:3])) for r in ineq]
    b = [mpq(r[3]) for r in ineq]
    E = [tuple(map(mpq, r[:3])) for r in eq]
    d = [mpq(r[3]) for r in eq]
    cc = tuple(map(mpq, c))
    p = _primal_route(cc, A, b, E, d)
    q_ = _dual_route(cc, A, b, E, d)
    assert type(p) is type(q_)
    assert verify(p, cc, A, b, E, d) and verify(q_, cc, A, b, E, d)
    if isinstance(p, Optimal):
        assert p.value == q_.value
