import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from arboreal.gsp_asym import (
    RationalSeries,
    _char_poly_coeffs,
    a_coeff,
    a_values,
    b_coeffs,
    b_limit,
    brute_force_available,
    convolution_check,
    decomposition_count_S,
    discrepancy_report,
    finite_level_gap_check,
    gl_order,
    gsp_limit_report,
    gsp_order,
    lagrangian_count_L,
    lagrangian_pairs_bruteforce,
    level_one_mean_from_coefficients,
    series_identity_holds,
    slice_counts,
    sp_order,
)
from arboreal.matgroups import GSp, density_level, enumerate_group

# exhaustive counts in GSp_{2g}(F_ell), frozen: (ell, g, m) -> (a, b)
SLICES = {
    (2, 1, 1): (Fraction(2, 3), Fraction(1, 3)),
    (2, 2, 1): (Fraction(16, 45), Fraction(19, 45)),
    (3, 1, 1): (Fraction(3, 8), Fraction(5, 8)),
    (3, 1, 2): (Fraction(1, 2), Fraction(1, 2)),
    (3, 2, 1): (Fraction(81, 640), Fraction(409, 640)),
    (3, 2, 2): (Fraction(3, 16), Fraction(9, 16)),
}


@pytest.mark.parametrize("key", sorted(SLICES))
def test_slice_counts_frozen(key):
    sc = slice_counts(*key)
    assert (sc.a, sc.b) == SLICES[key]


def test_slice_sizes_partition_the_group():
    for ell, g in ((2, 2), (3, 1), (3, 2)):
        total = sum(slice_counts(ell, g, m).size for m in range(1, ell))
        assert total == gsp_order(g, 1, ell)


def test_orders_against_enumeration():
    assert gsp_order(2, 1, 2) == len(enumerate_group(GSp(2, 2), 1))
    assert gsp_order(1, 2, 3) == len(enumerate_group(GSp(3, 1), 2))
    inv = sum(1 for M in itertools.product(range(3), repeat=4) if (M[0] * M[3] - M[1] * M[2]) % 3)
    assert gl_order(2, 1, 3) == inv
    assert sp_order(1, 1, 5) == 120


def test_decomposition_count_symmetry():
    for g in range(4):
        for r in range(g + 1):
            assert decomposition_count_S(g, r, 1, 3) == decomposition_count_S(g, g - r, 1, 3)


def test_lagrangian_count_discrepancy_at_three():
    assert lagrangian_pairs_bruteforce(3) == 12
    assert lagrangian_count_L(1, 1, 3) == 6


def test_m_one_closed_form_agrees_with_counts():
    for ell, g in ((2, 1), (2, 2), (3, 1), (3, 2)):
        assert a_coeff(g, True, ell) == slice_counts(ell, g, 1).a


def test_m_not_one_closed_form_disagrees_with_counts():
    assert a_coeff(1, False, 3) == Fraction(1, 4)
    assert slice_counts(3, 1, 2).a == Fraction(1, 2)
    disc = discrepancy_report(3, 2)
    found = {(d.quantity, d.g): (d.closed_form, d.brute_force) for d in disc}
    assert found[("a^(m=2)", 1)] == (Fraction(1, 4), Fraction(1, 2))
    assert found[("a^(m=2)", 2)] == (Fraction(1, 256), Fraction(3, 16))
    assert ("L(1,1)", 1) in found


def test_char_poly_against_sympy():
    rng = np.random.default_rng(3)
    M = rng.integers(0, 7, size=(10, 4, 4))
    got = _char_poly_coeffs(M, 7)
    T = sympy.Symbol("T")
    for row, A in zip(got, M):
        cp = sympy.Matrix(A.tolist()).charpoly(T).all_coeffs()[::-1]
        assert [int(c) % 7 for c in cp] == row.tolist()


@pytest.mark.parametrize("ell", [2, 3])
def test_convolution_identity_exact(ell):
    rows = convolution_check(2, ell)
    assert rows and all(r.passed for r in rows)
    assert all(r.source == "bruteforce" for r in rows)


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_series_identity(ell):
    assert series_identity_holds(True, ell, 10)
    if ell > 2:
        assert series_identity_holds(False, ell, 10)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)


@given(st.lists(rationals, min_size=2, max_size=8).filter(lambda c: c[0] != 0))
def test_series_inverse(coeffs):
    A = RationalSeries(coeffs)
    prod = (A * A.inverse()).coefficients
    assert prod == [1] + [0] * (len(coeffs) - 1)


@pytest.mark.parametrize("ell", [2, 3, 5, 7])
def test_b_limit_is_stable(ell):
    rep = b_limit(True, ell, 12)
    assert rep.ratios[-1] < 1
    assert rep.tail_bound is not None and rep.tail_bound < 1e-3
    assert 0 < rep.value < 1


def test_b_coefficients_are_partial_sums():
    b = b_coeffs(True, 3, 6).coefficients
    assert b[1] == slice_counts(3, 1, 1).b
    assert b[2] == slice_counts(3, 2, 1).b


def test_bruteforce_source_uses_exhaustive_counts():
    vals = a_values(False, 3, 3)
    assert vals[1] == Fraction(1, 2) and vals[2] == Fraction(3, 16)
    assert not brute_force_available(3, 3)
    with pytest.raises(ValueError):
        a_values(False, 2, 3)


@pytest.mark.parametrize("ell,n", [(2, 3), (3, 2)])
def test_finite_level_gap(ell, n):
    assert all(r.passed for r in finite_level_gap_check(ell, n))


@pytest.mark.parametrize("ell", [2, 3])
def test_decomposed_level_one_mean(ell):
    assert level_one_mean_from_coefficients(ell, 2) == density_level(GSp(ell, 2), 1).upper


def test_report_roundtrips_json():
    rep = gsp_limit_report(3, 8)
    assert json.loads(json.dumps(rep)) == rep
    assert all(r["passed"] for r in rep["convolution"])
