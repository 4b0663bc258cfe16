from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arboreal.algebraic import (
    INF_MINUS,
    INF_PLUS,
    ConicTorus,
    CubicNormTorus,
    Genus2Jacobian,
    SplitTorusPair,
    WeierstrassCurve,
    annihilator,
    bsgs_annihilator,
    count_sextic_points,
    count_weierstrass_points,
    order_coprime_to_ell,
    parse_config,
    parse_point,
    reduce_point,
)
from arboreal.arith import sieve_primes
from arboreal.errors import BadReduction

NONCM = WeierstrassCurve((0, 0, 1, -1, 0))
ABVAR = Genus2Jacobian((4, -8, 4, 0, 4, -8, 5))
ODD_PRIMES = [p for p in sieve_primes(400) if p > 2]


def naive_order(G, x, limit=10**6):
    y, k = x, 1
    while not G.is_identity(y):
        y = G.add(y, x)
        k += 1
        assert k < limit
    return k


def affine_points(G):
    p = G.p
    return [(x, y) for x in range(p) for y in range(p)
            if (y * y + G.a1 * x * y + G.a3 * y - (x**3 + G.a2 * x * x + G.a4 * x + G.a6)) % p == 0]


# ---------------------------------------------------------- elliptic curves


@pytest.mark.parametrize("a", [(0, 0, 1, -1, 0), (0, 0, 0, 0, 3), (1, -1, 1, 5, -3), (0, 0, 0, 3, 0)])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 31, 101])
def test_point_count_matches_enumeration(a, p):
    a1, a2, a3, a4, a6 = a
    naive = 1 + sum(1 for x in range(p) for y in range(p)
                    if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0)
    assert count_weierstrass_points(a, p) == naive


@pytest.mark.parametrize("p", [5, 7, 13, 53])
def test_elliptic_group_axioms(p):
    G = NONCM.at(p)
    pts = affine_points(G)[:12] + [None]
    for P1 in pts:
        assert G.add(P1, G.neg(P1)) is None
        for P2 in pts:
            assert G.add(P1, P2) == G.add(P2, P1)
            for P3 in pts[:5]:
                assert G.add(G.add(P1, P2), P3) == G.add(P1, G.add(P2, P3))


@given(st.sampled_from([p for p in ODD_PRIMES if p not in (37,)]))
@settings(max_examples=25, deadline=None)
def test_bsgs_annihilator_is_a_multiple_of_the_order(p):
    G, x = reduce_point(NONCM, (0, 0), p)
    e = annihilator(G, x)
    assert G.is_identity(G.mul(x, e))
    assert e % naive_order(G, x) == 0
    lo, hi = G.order_interval()
    assert lo <= G.count_points() <= hi


def test_bsgs_on_a_cyclic_unit_group():
    G = SplitTorusPair().at(101)
    x = (2, 1)
    e = bsgs_annihilator(G, x, (1, 150))
    assert G.is_identity(G.mul(x, e)) and e == 100


def test_singular_reduction_is_bad():
    with pytest.raises(BadReduction):
        NONCM.at(37)
    with pytest.raises(BadReduction):
        WeierstrassCurve((0, 0, 0, 0, 3)).at(3)


# ---------------------------------------------------------- tori


@given(st.sampled_from(ODD_PRIMES), st.sampled_from([1, -7, 2, 5]))
@settings(max_examples=40, deadline=None)
def test_conic_exponent_kills_every_point(p, d):
    torus = ConicTorus(d)
    try:
        G = torus.at(p)
    except BadReduction:
        return
    pts = [(x, y) for x in range(p) for y in range(p) if (x * x - G.d * y * y - 1) % p == 0]
    e = G.exponent()
    assert all(G.is_identity(G.mul(P1, e)) for P1 in pts)
    if G.d:
        assert len(pts) == e  # the torus is cyclic of that order


@given(st.sampled_from([p for p in ODD_PRIMES if p < 30]))
@settings(max_examples=10, deadline=None)
def test_cubic_unit_group_order(p):
    torus = CubicNormTorus((1, 0, 0, -2))
    try:
        G = torus.at(p)
    except BadReduction:
        return
    import itertools

    from arboreal import polys

    units = [e for e in itertools.product(range(p), repeat=3)
             if any(e) and polys.deg(polys.gcd(list(e), G.modulus, p)) == 0]
    assert len(units) == G.unit_group_order()
    e = G.exponent()
    assert all(G.is_identity(G.mul(G.reduce(u), e)) for u in units[:40])


def test_cubic_norm_of_the_shipped_point():
    assert CubicNormTorus((1, 0, 0, -2)).norm((-1, 1, 0)) == 1


def test_order_coprime_on_torus():
    torus = ConicTorus(1)
    G, x = reduce_point(torus, (Fraction(5, 3), Fraction(4, 3)), 7)
    e = annihilator(G, x)
    assert order_coprime_to_ell(G, x, 2, e) == (naive_order(G, x) % 2 == 1)


# ---------------------------------------------------------- genus 2


def _count_over_fp2(f_low, p):
    # F_{p^2} = F_p[i], i^2 = r with r a non-residue; count y^2 = f(x)
    r = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)

    def mul(a, b):
        return ((a[0] * b[0] + r * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    total = 0
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            acc = (0, 0)
            for c in reversed(f_low):
                acc = mul(acc, x)
                acc = ((acc[0] + c) % p, acc[1])
            if acc == (0, 0):
                total += 1
            else:
                norm = (acc[0] * acc[0] - r * acc[1] * acc[1]) % p
                total += 2 if pow(norm, (p - 1) // 2, p) == 1 else 0
    return total + 2  # the leading coefficient is a square in F_{p^2}


def _count_over_fp(f_low, p):
    total = 0
    for x in range(p):
        v = sum(c * pow(x, i, p) for i, c in enumerate(f_low)) % p
        total += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    return total + 2


@pytest.mark.parametrize("p", [5, 7, 11, 17, 19, 23])
def test_jacobian_order_from_zeta_function_is_annihilating(p):
    f_low = [int(c) for c in ABVAR.low_first()]
    try:
        G = ABVAR.at(p)
    except BadReduction:
        pytest.skip("bad prime")
    fl = [c % p for c in f_low]
    N1 = _count_over_fp(fl, p)
    N2 = _count_over_fp2(fl, p)
    assert count_sextic_points(fl, p) == N1
    order = (N1 * N1 + N2) // 2 - p
    lo, hi = G.order_interval()
    assert lo <= order <= hi
    divisors = [[(INF_PLUS, 1), (INF_MINUS, -1)]]
    for x in range(p):
        for y in range(p):
            if (y * y - sum(c * x**i for i, c in enumerate(fl))) % p == 0:
                divisors.append([((x, y), 1), (INF_MINUS, -1)])
    for D in divisors[:8]:
        cls = G.reduce(D)
        assert G.is_identity(G.mul(cls, order))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_jacobian_group_law(p):
    G = ABVAR.at(p)
    fl = [int(c) % p for c in ABVAR.low_first()]
    pts = [(x, y) for x in range(p) for y in range(p) if (y * y - sum(c * x**i for i, c in enumerate(fl))) % p == 0]
    classes = [G.reduce([(pt, 1), (INF_MINUS, -1)]) for pt in pts[:6]]
    classes.append(G.reduce([(INF_PLUS, 1), (INF_MINUS, -1)]))
    for A in classes:
        assert G.is_identity(G.add(A, G.neg(A)))
        for B in classes:
            assert G.add(A, B) == G.add(B, A)
            for C in classes[:3]:
                assert G.add(G.add(A, B), C) == G.add(A, G.add(B, C))


def test_point_plus_its_conjugate_is_principal():
    p = 7
    G = ABVAR.at(p)
    fl = [int(c) % p for c in ABVAR.low_first()]
    x, y = next((x, y) for x in range(p) for y in range(1, p) if (y * y - sum(c * x**i for i, c in enumerate(fl))) % p == 0)
    # P + iota(P) ~ inf_plus + inf_minus
    D = G.reduce([((x, y), 1), ((x, -y % p), 1), (INF_PLUS, -1), (INF_MINUS, -1)])
    assert G.is_identity(D)


def test_genus2_rejects_nonsquare_leading_coefficient():
    with pytest.raises(ValueError):
        Genus2Jacobian((3, 0, 0, 0, 0, 0, 1))


# ---------------------------------------------------------- parsing


def test_parse_config_variants():
    assert isinstance(parse_config("conic:d=-7"), ConicTorus)
    assert parse_config("weierstrass:0,0,1,-1,0") == NONCM
    assert parse_config("genus2:4,-8,4,0,4,-8,5;sign=1").inf_plus_sign == 1
    assert isinstance(parse_config("cubicnorm:1,0,0,-2"), CubicNormTorus)
    with pytest.raises(ValueError):
        parse_config("nonsense:1")


def test_parse_point_variants():
    assert parse_point("5/3,4/3") == (Fraction(5, 3), Fraction(4, 3))
    assert parse_point("O") is None
    assert parse_point("inf+ - (1,1)") == [("inf+", 1), ((1, 1), -1)]
    assert parse_point("2*(0,1) - 2*inf-") == [((0, 1), 2), ("inf-", -2)]
    with pytest.raises(ValueError):
        parse_point("inf+ + junk")
