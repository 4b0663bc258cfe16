"""The Somos-4 sequence and its link to multiples of (0, 0) on y^2 + y = x^3 - x."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from arboreal.errors import NonIntegralTerm

UNDETERMINED = "undetermined"
CURVE = (0, 0, 1, -1, 0)
BAD_PRIME = 37


def somos_terms(N: int):
    """a_0..a_N with a_0 = a_1 = a_2 = a_3 = 1."""
    if N < 3:
        raise ValueError("N must be at least 3")
    a = [1, 1, 1, 1]
    for n in range(4, N + 1):
        num = a[n - 1] * a[n - 3] + a[n - 2] ** 2
        q, r = divmod(num, a[n - 4])
        if r:
            raise NonIntegralTerm(f"a_{n} is not an integer")
        a.append(q)
    return a


def quartic_invariant(a, b, c, d):
    return a * a * d * d - 4 * a * b * c * d + a * c**3 + b**3 * d + b * b * c * c


def scaling_identity_holds(terms, n):
    """F(a_{n-1},..,a_{n+2}) * a_{n-2} == a_{n+2} * F(a_{n-2},..,a_{n+1})."""
    lhs = quartic_invariant(*terms[n - 1 : n + 3]) * terms[n - 2]
    rhs = terms[n + 2] * quartic_invariant(*terms[n - 2 : n + 2])
    return lhs == rhs


# exact chord-and-tangent on y^2 + y = x^3 - x over Q


def _ec_add(P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + 1 == 0:
            return None
        lam = (3 * x1 * x1 - 1) / (2 * y1 + 1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam - x1 - x2
    return (x3, -lam * x3 - nu - 1)


def _ec_mul(P, k):
    R = None
    while k:
        if k & 1:
            R = _ec_add(R, P)
        k >>= 1
        if k:
            P = _ec_add(P, P)
    return R


def somos_point(terms, n):
    """The point predicted for [2n-3](0,0) from a_{n-1}..a_{n+2}."""
    a0, a1, a2, a3 = (Fraction(t) for t in terms[n - 1 : n + 3])
    x = (a1 * a1 - a0 * a2) / (a1 * a1)
    y = (a0 * a0 * a3 - 2 * a0 * a1 * a2) / a1**3
    return (x, y)


@dataclass
class IdentityReport:
    results: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.results.values())


def somos_ec_identity_check(n_max: int = 8, n_min: int = 2) -> IdentityReport:
    if not 2 <= n_min <= n_max <= 12:
        raise ValueError("need 2 <= n_min <= n_max <= 12")
    terms = somos_terms(n_max + 2)
    alpha = (Fraction(0), Fraction(0))
    report = IdentityReport()
    for n in range(n_min, n_max + 1):
        report.results[n] = _ec_mul(alpha, 2 * n - 3) == somos_point(terms, n)
    return report


def _first_zero_bound(p):
    # a zero at index n means (2n-3)*alpha = O, so n <= (ord + 3)/2 and the
    # order is at most p + 1 + 2 sqrt(p)
    return (p + 1 + math.isqrt(4 * p) + 1 + 3) // 2 + 1


def somos_divides(p: int, cap: int | None = None, use_order_bound: bool = True):
    """Whether p divides some a_n.

    Iterates the recurrence mod p.  "No" is certified either by the state
    returning to (1,1,1,1) or, at primes of good reduction, by passing the
    index where the first zero would have to occur.  Returns UNDETERMINED
    if neither happens before `cap` (default 8p)."""
    if cap is None:
        cap = 8 * p
    cutoff = _first_zero_bound(p) if use_order_bound and p != BAD_PRIME else None
    s0, s1, s2, s3 = 1, 1, 1, 1
    n = 3
    while n < cap:
        n += 1
        a = (s3 * s1 + s2 * s2) * pow(s0, -1, p) % p
        if a == 0:
            return True
        s0, s1, s2, s3 = s1, s2, s3, a
        if s0 == s1 == s2 == s3 == 1:
            return False
        if cutoff is not None and n > cutoff:
            return False
    return UNDETERMINED


@dataclass
class EquivalenceReport:
    bound: int
    checked: int = 0
    divides: int = 0
    good: int = 0
    counterexamples: list = field(default_factory=list)
    undetermined: list = field(default_factory=list)


def somos_oddorder_equivalence(x: int) -> EquivalenceReport:
    """Compare somos_divides(p) with the odd-order test for (0,0) at every
    good prime p <= x."""
    from arboreal.redscan import classify_prime, example_config

    if x > 10**4:
        raise ValueError("bound limited to 10^4")
    cfg = example_config("noncmex", bounds=(x,))
    from arboreal.arith import sieve_primes

    rep = EquivalenceReport(bound=x)
    excluded = cfg.excluded()
    for p in sieve_primes(x):
        p = int(p)
        status = classify_prime(cfg, p, excluded)
        if status not in ("good", "bad"):
            continue
        rep.checked += 1
        d = somos_divides(p)
        if d is UNDETERMINED:
            rep.undetermined.append(p)
            continue
        rep.divides += bool(d)
        rep.good += status == "good"
        if d != (status == "good"):
            rep.counterexamples.append(p)
    return rep
