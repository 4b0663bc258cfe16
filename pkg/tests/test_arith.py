import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arboreal import polys
from arboreal.arith import (
    INFINITY,
    ell_free_part,
    factorize,
    image_size_from_valuations,
    is_prime,
    is_square_mod,
    ord_ell,
    reduce_rational,
    sieve_primes,
    smith_valuations,
    sqrt_mod,
)
from arboreal.matgroups import smith_valuations_batch


def naive_primes(x):
    return [n for n in range(2, x + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def test_sieve_matches_trial_division():
    assert sieve_primes(2000) == naive_primes(2000)
    assert sieve_primes(1) == []


def test_prime_counts():
    assert len(sieve_primes(10**4)) == 1229
    assert len(sieve_primes(10**5)) == 9592


@given(st.integers(min_value=0, max_value=200_000))
def test_is_prime_agrees_with_trial_division(n):
    assert is_prime(n) == (n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1)))


@given(st.integers(min_value=2, max_value=10**15))
@settings(max_examples=60)
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**k for p, k in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(st.integers(min_value=1, max_value=10**9), st.sampled_from([2, 3, 5, 7]))
def test_ord_and_free_part(x, ell):
    k = ord_ell(x, ell)
    assert x % ell**k == 0 and (x // ell**k) % ell
    assert ell_free_part(x, ell) == x // ell**k


def test_ord_of_zero_is_infinite():
    assert ord_ell(0, 3) == INFINITY


@given(st.sampled_from([3, 5, 7, 11, 101, 1009]), st.integers(min_value=0, max_value=10**6))
def test_sqrt_mod(p, a):
    a %= p
    if is_square_mod(a, p):
        r = sqrt_mod(a, p)
        assert r * r % p == a
    else:
        assert all(x * x % p != a for x in range(p))


def test_reduce_rational():
    assert reduce_rational(Fraction(5, 3), 7) == 5 * pow(3, -1, 7) % 7
    assert reduce_rational(Fraction(1, 7), 7) is None


def image_size_bruteforce(M, ell, n):
    q = ell**n
    d = len(M)
    A = np.array(M, dtype=np.int64) % q
    vecs = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64)
    return len({tuple(r) for r in (vecs @ A.T) % q})


small_matrices = st.lists(st.lists(st.integers(-20, 20), min_size=2, max_size=2), min_size=2, max_size=2)


@given(small_matrices, st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 1)]))
def test_smith_image_size_matches_bruteforce(M, ln):
    ell, n = ln
    vals = smith_valuations(M, ell, n)
    assert image_size_from_valuations(vals, ell, n) == image_size_bruteforce(M, ell, n)


@given(st.lists(small_matrices, min_size=1, max_size=8), st.sampled_from([(2, 2), (3, 2), (2, 4)]))
def test_batched_smith_matches_scalar(Ms, ln):
    ell, n = ln
    got = smith_valuations_batch(np.array(Ms, dtype=np.int64) % ell**n, ell, n)
    for row, M in zip(got.tolist(), Ms):
        assert sorted(row) == smith_valuations(M, ell, n)


def test_smith_on_a_4x4():
    M = [[2, 0, 0, 0], [0, 4, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]
    assert smith_valuations(M, 2, 3) == [0, 1, 2, 3]


@given(st.lists(st.integers(0, 12), min_size=1, max_size=5), st.lists(st.integers(0, 12), min_size=1, max_size=5))
def test_poly_divmod_roundtrip(a, b):
    p = 13
    b = polys.trim(b)
    if polys.deg(b) < 0:
        return
    q, r = polys.divmod_(a, b, p)
    assert polys.add(polys.mul(q, b, p), r, p) == polys.trim([c % p for c in a])
    assert polys.deg(r) < polys.deg(b)


def test_poly_xgcd_bezout():
    p = 11
    a, b = [1, 0, 1], [3, 1]
    g, s, t = polys.xgcd(a, b, p)
    assert polys.add(polys.mul(s, a, p), polys.mul(t, b, p), p) == g


@pytest.mark.parametrize("n", [0, -4])
def test_free_part_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        ell_free_part(n, 2)
