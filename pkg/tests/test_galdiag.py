from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from arboreal.algebraic import WeierstrassCurve
from arboreal.galdiag import (
    CONSISTENT,
    INCONSISTENT,
    LOW_SAMPLE,
    curve_square_conditions,
    frobenius_statistics,
    frobenius_traces,
    is_irreducible_over_q,
    is_rational_square,
    rational_square_tests,
    torsion_polynomial,
    torus_square_conditions,
)

X = sympy.Symbol("x")
NONCM = WeierstrassCurve((0, 0, 1, -1, 0))
CM3 = WeierstrassCurve((0, 0, 0, 0, 3))
CM_RAMIFIED = WeierstrassCurve((0, 0, 0, 3, 0))


@given(st.fractions(min_value=0, max_value=1000, max_denominator=500))
def test_squares_are_squares(q):
    assert is_rational_square(q * q)
    if q:
        assert not is_rational_square(2 * q * q)
        assert not is_rational_square(-q * q)


def test_square_report():
    rep = rational_square_tests([4, Fraction(9, 25), 2])
    assert rep.squares == [True, True, False] and rep.any_square


def test_torus_square_conditions():
    assert not torus_square_conditions(-7, 2).any_square
    assert torus_square_conditions(-1, 2).any_square  # -d = 1


def test_four_torsion_of_the_cm_curve():
    tp = torsion_polynomial(CM3, 4)
    assert tp.primitive == sympy.Poly(X**6 + 60 * X**3 - 72, X)


def test_two_torsion_discriminant():
    tp = torsion_polynomial(NONCM, 2)
    assert tp.primitive == sympy.Poly(4 * X**3 - 4 * X + 1, X)
    assert tp.discriminant() == 592
    assert is_irreducible_over_q(tp.primitive)


def test_square_conditions_for_noncm_curve():
    rep = curve_square_conditions(NONCM)
    assert rep.values == [-592, 1184, -1184]
    assert not rep.any_square


def test_nine_torsion_is_divisible_by_three_torsion():
    tp = torsion_polynomial(NONCM, 9)
    assert tp.primitive.degree() == (81 - 9) // 2
    q, r = sympy.div(tp.polynomial, torsion_polynomial(NONCM, 3).polynomial)
    assert r.is_zero


def _points(curve, p):
    a1, a2, a3, a4, a6 = (int(c) % p for c in curve.a)
    return [(x, y) for x in range(p) for y in range(p)
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0]


@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_torsion_roots_mod_p_match_points_of_order_m(m, p):
    # every F_p-point of exact order m has x-coordinate a root of the primitive part
    G = NONCM.at(p)
    poly = torsion_polynomial(NONCM, m).primitive
    for pt in _points(NONCM, p):
        k, y = 1, pt
        while y is not None:
            y = G.add(y, pt)
            k += 1
        if k == m:
            assert int(poly.eval(pt[0])) % p == 0


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_traces_match_naive_counts(p):
    traces = dict(frobenius_traces(NONCM, 20))
    assert traces[p] == p + 1 - (1 + len(_points(NONCM, p)))
    assert 37 not in dict(frobenius_traces(NONCM, 40))


def test_noncm_curve_looks_surjective():
    rep = frobenius_statistics(NONCM, 2, 2, 20_000)
    assert rep.tv_distance < 0.05 and rep.evidence == CONSISTENT
    assert rep.bad_trace_bounds == []


def test_cm_curve_is_flagged():
    rep = frobenius_statistics(CM_RAMIFIED, 2, 1, 20_000)
    assert rep.tv_distance > 0.1 and rep.evidence == INCONSISTENT


def test_small_bound_is_low_sample():
    assert frobenius_statistics(NONCM, 2, 1, 90).evidence == LOW_SAMPLE


def test_limits():
    with pytest.raises(ValueError):
        frobenius_statistics(NONCM, 5, 2, 1000)
    with pytest.raises(ValueError):
        torsion_polynomial(NONCM, 5)
