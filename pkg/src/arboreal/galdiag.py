"""Cheap, finitely checkable evidence about the size of ell-adic images:
rational square tests, torsion polynomials and Frobenius statistics.

Nothing here proves surjectivity.  Reports use the vocabulary in
EVIDENCE so callers cannot mistake them for verdicts.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from arboreal.algebraic import WeierstrassCurve, count_weierstrass_points
from arboreal.arith import sieve_primes

CONSISTENT = "consistent-with-surjective"
INCONSISTENT = "inconsistent"
LOW_SAMPLE = "low-sample"
EVIDENCE = (CONSISTENT, INCONSISTENT, LOW_SAMPLE)

X = sympy.Symbol("x")


def is_rational_square(value) -> bool:
    q = Fraction(value)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


@dataclass
class SquareTestReport:
    values: list
    squares: list

    @property
    def any_square(self):
        return any(self.squares)


def rational_square_tests(values) -> SquareTestReport:
    vals = [Fraction(v) for v in values]
    return SquareTestReport(vals, [is_rational_square(v) for v in vals])


def torus_square_conditions(d, ell) -> SquareTestReport:
    """Values that must be non-squares for a full ell-adic image on the conic
    torus x^2 - d y^2 = 1."""
    d = Fraction(d)
    if ell == 2:
        return rational_square_tests([-d, -2 * d])
    if ell % 4 == 3:
        return rational_square_tests([-ell * d])
    return rational_square_tests([])


# ------------------------------------------------------------ torsion


@dataclass
class DivisionPolynomial:
    m: int
    polynomial: sympy.Poly
    primitive: sympy.Poly

    def discriminant(self):
        return Fraction(str(sympy.discriminant(self.primitive.as_expr(), X)))


def _to_sympy(q: Fraction):
    return sympy.Rational(q.numerator, q.denominator)


def _x_only_division(curve: WeierstrassCurve, n_max: int):
    """f_n with psi_n = f_n for odd n and psi_n = psi_2 f_n for even n, where
    psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6."""
    b2, b4, b6, b8 = (_to_sympy(b) for b in curve.b_invariants())
    F = sympy.Poly(4 * X**3 + b2 * X**2 + 2 * b4 * X + b6, X)
    f = {
        0: sympy.Poly(0, X),
        1: sympy.Poly(1, X),
        2: sympy.Poly(1, X),
        3: sympy.Poly(3 * X**4 + b2 * X**3 + 3 * b4 * X**2 + 3 * b6 * X + b8, X),
        4: sympy.Poly(
            2 * X**6 + b2 * X**5 + 5 * b4 * X**4 + 10 * b6 * X**3 + 10 * b8 * X**2
            + (b2 * b8 - b4 * b6) * X + (b4 * b8 - b6**2),
            X,
        ),
    }
    F2 = F * F

    def get(n):
        if n in f:
            return f[n]
        k = n // 2
        if n % 2:
            if k % 2 == 0:
                val = F2 * get(k + 2) * get(k) ** 3 - get(k - 1) * get(k + 1) ** 3
            else:
                val = get(k + 2) * get(k) ** 3 - F2 * get(k - 1) * get(k + 1) ** 3
        else:
            val = get(k) * (get(k + 2) * get(k - 1) ** 2 - get(k - 2) * get(k + 1) ** 2)
        f[n] = val
        return val

    for n in range(5, n_max + 1):
        get(n)
    return f, F


def _primitive(poly: sympy.Poly) -> sympy.Poly:
    _, prim = poly.primitive()
    if prim.LC() < 0:
        prim = -prim
    return prim


def torsion_polynomial(curve: WeierstrassCurve, m: int) -> DivisionPolynomial:
    """m = 2: psi_2^2.  m = 3: psi_3.  m = 4: psi_4/psi_2.  m = 9: psi_9 with
    primitive part psi_9/psi_3.  The primitive part has as roots exactly
    the x-coordinates of points of order m."""
    if m not in (2, 3, 4, 9):
        raise ValueError("m must be one of 2, 3, 4, 9")
    f, F = _x_only_division(curve, m)
    if m == 2:
        poly = F
    else:
        poly = f[m]
    prim = poly
    if m == 9:
        q, r = sympy.div(f[9], f[3])
        assert r.is_zero
        prim = q
    return DivisionPolynomial(m, poly, _primitive(prim))


def curve_square_conditions(curve: WeierstrassCurve) -> SquareTestReport:
    D = torsion_polynomial(curve, 2).discriminant()
    return rational_square_tests([-D, 2 * D, -2 * D])


def is_irreducible_over_q(poly: sympy.Poly) -> bool:
    _, factors = sympy.factor_list(poly.as_expr(), X)
    return len(factors) == 1 and factors[0][1] == 1


# ------------------------------------------------------------ Frobenius


@lru_cache(maxsize=None)
def _gl2_trace_det_distribution(ell, n):
    from arboreal.matgroups import GL2Full, enumerate_group

    q = ell**n
    G = enumerate_group(GL2Full(ell), n)
    tr = (G[:, 0, 0] + G[:, 1, 1]) % q
    det = (G[:, 0, 0] * G[:, 1, 1] - G[:, 0, 1] * G[:, 1, 0]) % q
    counts = Counter(zip(tr.tolist(), det.tolist()))
    return counts, len(G)


@dataclass
class FrobeniusReport:
    ell: int
    n: int
    bound: int
    primes_used: int
    tv_distance: float
    evidence: str
    reference_total: int
    empirical: dict = field(default_factory=dict, repr=False)
    bad_trace_bounds: list = field(default_factory=list)


def frobenius_traces(curve: WeierstrassCurve, bound: int):
    """(p, a_p) for primes p <= bound of good reduction."""
    bad = curve.default_bad_primes()
    a = [int(c) if Fraction(c).denominator == 1 else None for c in curve.a]
    out = []
    for p in sieve_primes(bound):
        p = int(p)
        if p in bad:
            continue
        if any(c is None for c in a):
            coeffs = [int(Fraction(c).numerator * pow(Fraction(c).denominator, -1, p)) % p for c in curve.a]
        else:
            coeffs = a
        out.append((p, p + 1 - count_weierstrass_points(coeffs, p)))
    return out


def frobenius_statistics(curve: WeierstrassCurve, ell: int, n: int, prime_bound: int,
                         threshold: float = 0.05, min_primes: int = 100) -> FrobeniusReport:
    """Total-variation distance between the empirical law of
    (a_p mod ell^n, p mod ell^n) and the (trace, det) law on GL_2(Z/ell^n)."""
    if prime_bound > 10**6:
        raise ValueError("prime_bound limited to 10^6")
    q = ell**n
    if q > 16:
        raise ValueError("reference distribution only for ell^n <= 16")
    ref, total = _gl2_trace_det_distribution(ell, n)
    traces = frobenius_traces(curve, prime_bound) if prime_bound >= 2 else []
    traces = [(p, t) for p, t in traces if p % ell]
    emp = Counter((t % q, p % q) for p, t in traces)
    N = len(traces)
    keys = set(ref) | set(emp)
    tv = 0.5 * sum(abs(emp.get(k, 0) / N - ref.get(k, 0) / total) for k in keys) if N else 1.0
    bad = [p for p, t in traces if t * t > 4 * p]
    if N < min_primes or prime_bound < 100:
        evidence = LOW_SAMPLE
    else:
        evidence = CONSISTENT if tv < threshold else INCONSISTENT
    return FrobeniusReport(ell, n, prime_bound, N, tv, evidence, total,
                           {f"{k[0]},{k[1]}": v for k, v in sorted(emp.items())}, bad)
