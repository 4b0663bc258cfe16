from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arboreal.arith import sieve_primes
from arboreal.somos import (
    UNDETERMINED,
    quartic_invariant,
    scaling_identity_holds,
    somos_divides,
    somos_ec_identity_check,
    somos_oddorder_equivalence,
    somos_point,
    somos_terms,
)

FIRST_TERMS = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313, 620297, 7869898]


def test_first_terms():
    assert somos_terms(14) == FIRST_TERMS


def test_invariant_vanishes_on_every_window():
    t = somos_terms(104)
    assert all(quartic_invariant(*t[i : i + 4]) == 0 for i in range(101))


def test_scaling_identity_to_one_hundred():
    t = somos_terms(104)
    assert all(scaling_identity_holds(t, n) for n in range(2, 101))


@given(st.tuples(*[st.integers(-50, 50)] * 4).filter(lambda v: 0 not in v))
def test_scaling_identity_is_algebraic(seed):
    # the identity only uses the recurrence, so it holds for any nonzero start
    a = list(seed)
    for n in range(4, 10):
        a.append(Fraction(a[n - 1] * a[n - 3] + a[n - 2] ** 2, 1) / a[n - 4])
        if a[-1] == 0:
            return
    for n in range(2, 6):
        assert scaling_identity_holds(a, n)


def test_ec_identity():
    rep = somos_ec_identity_check(8)
    assert rep.passed and sorted(rep.results) == list(range(2, 9))


def test_somos_point_for_small_index():
    t = somos_terms(6)
    # n = 2 gives (0,0) itself
    assert somos_point(t, 2) == (0, 0)


@pytest.mark.parametrize("p", [p for p in sieve_primes(120)])
def test_divisibility_matches_exact_terms(p):
    # p divides some a_n iff it divides one of the first few hundred terms
    # (the first zero occurs within roughly p/2 steps)
    terms = somos_terms(200)
    exact = any(t % p == 0 for t in terms)
    assert somos_divides(p) == exact


@given(st.sampled_from([p for p in sieve_primes(1500) if p != 37]))
@settings(max_examples=40, deadline=None)
def test_order_bound_agrees_with_full_period_search(p):
    full = somos_divides(p, cap=2 * p * p + 10, use_order_bound=False)
    assert full is not UNDETERMINED
    assert somos_divides(p) == full


def test_small_cap_is_undetermined():
    assert somos_divides(1009, cap=20, use_order_bound=False) is UNDETERMINED


def test_equivalence_small_bound():
    rep = somos_oddorder_equivalence(1000)
    assert rep.counterexamples == [] and rep.undetermined == []
    assert (rep.divides, rep.checked) == (93, 167)


def test_too_few_terms_rejected():
    with pytest.raises(ValueError):
        somos_terms(2)
