import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from arboreal.arith import ord_ell
from arboreal.densities import (
    FAMILIES,
    GSP4_TABLE,
    DensityInterval,
    closed_form,
    cm_density,
    gl2_cn,
    gl2_density,
    gl2_order,
    gl2_series_density,
    gm_density,
    gm_series_density,
    gsp4_bounds,
    pair_count,
    split_torus_pair_density,
)
from arboreal.matgroups import (
    CartanNonsplit,
    CartanNormalizer,
    CartanSplit,
    GL2Full,
    GSp,
    ScalarUnits,
    SplitTorusPair,
    density_level,
    det_mod,
    enumerate_group,
)

primes = st.sampled_from([2, 3, 5, 7, 11, 13])


def test_frozen_constants():
    assert gl2_density(2) == Fraction(11, 21)
    assert gl2_density(5) == Fraction(2381, 2976)
    assert gm_density(2) == Fraction(1, 3)
    assert cm_density(2, "split", "normalizer") == Fraction(2, 9)
    assert cm_density(2, "inert", "normalizer") == Fraction(8, 15)
    assert cm_density(5, "split", "normalizer") == Fraction(817, 1152)


def test_gsp4_closed_form_at_two():
    iv = gsp4_bounds(2)
    assert (iv.lower, iv.upper) == (Fraction(19, 45), Fraction(32, 45))


@given(primes)
def test_densities_are_probabilities(ell):
    for val in (gl2_density(ell), gm_density(ell), split_torus_pair_density(ell),
                cm_density(ell, "split", "cartan"), cm_density(ell, "inert", "normalizer")):
        assert 0 < val < 1


@given(primes)
def test_series_converge_to_closed_forms(ell):
    s, tail = gl2_series_density(ell, 30)
    assert abs(s - gl2_density(ell)) <= tail
    s, tail = gm_series_density(ell, 30)
    assert abs(s - gm_density(ell)) <= tail


def test_gm_density_from_unit_valuations():
    # direct: mean over units u mod 2^n of 2^-min(ord(u-1), n)
    ell, n = 2, 14
    q = ell**n
    units = [u for u in range(q) if u % ell]
    direct = sum(Fraction(1, ell ** min(ord_ell(u - 1, ell), n)) for u in units) / len(units)
    assert abs(direct - gm_density(ell)) < Fraction(1, 2**12)


@pytest.mark.parametrize("ell,n", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3), (5, 1)])
def test_gl2_cn_by_enumeration(ell, n):
    G = enumerate_group(GL2Full(ell), n)
    assert len(G) == gl2_order(ell, n)
    q = ell**n
    d = det_mod((G - np.eye(2, dtype=np.int64)) % q, q)
    count = sum(1 for x in d.tolist() if x and ord_ell(x, ell) == n - 1)
    assert count == gl2_cn(ell, n)


@pytest.mark.parametrize("ell,n", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3)])
def test_pair_count_exhaustive(ell, n):
    q = ell**n
    tally = {}
    for al, be in itertools.product(range(q), repeat=2):
        key = (al % ell, be % ell, al * be % q)
        tally[key] = tally.get(key, 0) + 1
    for a, b, c in itertools.product(range(ell), range(ell), range(q)):
        assert pair_count(a, b, c, ell, n) == tally.get((a, b, c), 0)


@pytest.mark.parametrize(
    "value,spec,n",
    [
        (gl2_density(2), GL2Full(2), 3),
        (gl2_density(3), GL2Full(3), 2),
        (gm_density(3), ScalarUnits(3), 4),
        (split_torus_pair_density(2), SplitTorusPair(2), 4),
        (cm_density(2, "split", "cartan"), CartanSplit(2), 4),
        (cm_density(2, "split", "normalizer"), CartanNormalizer(CartanSplit(2)), 4),
        (cm_density(2, "inert", "normalizer"), CartanNormalizer(CartanNonsplit(2)), 4),
        (cm_density(3, "inert", "cartan"), CartanNonsplit(3), 3),
        (cm_density(5, "split", "normalizer"), CartanNormalizer(CartanSplit(5)), 2),
    ],
)
def test_closed_forms_inside_exact_level_intervals(value, spec, n):
    assert density_level(spec, n).contains(value)


def test_gsp4_level_one_lower_bound_equals_closed_form():
    assert density_level(GSp(2, 2), 1).lower == gsp4_bounds(2).lower


@pytest.mark.parametrize("ell", [2, 3])
def test_gsp4_table_sits_inside_closed_form_bounds(ell):
    cf, tab = gsp4_bounds(ell), GSP4_TABLE[ell]
    assert cf.lower <= tab.lower <= tab.upper <= cf.upper


def test_closed_form_dispatch():
    assert closed_form("gl2", 2) == Fraction(11, 21)
    assert closed_form("cm", 2, "split-normalizer") == Fraction(2, 9)
    assert isinstance(closed_form("gsp4-bounds", 3), DensityInterval)
    assert set(FAMILIES) >= {"gm", "gl2", "cm"}
    with pytest.raises(ValueError):
        closed_form("nosuchfamily", 2)


def test_interval_validation():
    with pytest.raises(ValueError):
        DensityInterval(Fraction(1, 2), Fraction(1, 3), 1)
