"""Commutative algebraic groups over Q and their reductions mod p.

Each config produces a per-prime group object via `config.at(p)` which
exposes identity/add/neg/mul/key and either a known exponent or an interval
guaranteed to contain the group order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from arboreal import polys as P
from arboreal.arith import ell_free_part, is_square_mod, reduce_rational
from arboreal.errors import BadReduction, NotFound
from arboreal.jacobian import Jacobian

INF_PLUS = "inf+"
INF_MINUS = "inf-"


def _fracs(values):
    return tuple(Fraction(v) for v in values)


def _denominators_ok(values, p):
    return all(Fraction(v).denominator % p for v in values)


def _bad_primes_of(x: Fraction):
    x = Fraction(x)
    out = set()
    for n in (abs(x.numerator), x.denominator):
        d = 2
        while d * d <= n:
            while n % d == 0:
                out.add(d)
                n //= d
            d += 1
        if n > 1:
            out.add(n)
    return out


# ------------------------------------------------------------------ tori


@dataclass(frozen=True)
class ConicTorus:
    """x^2 - d y^2 = 1 with (x1, y1)*(x2, y2) = (x1 x2 + d y1 y2, x1 y2 + x2 y1)."""

    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "d", Fraction(self.d))

    def default_bad_primes(self):
        return _bad_primes_of(self.d)

    def on_curve(self, pt):
        x, y = map(Fraction, pt)
        return x * x - self.d * y * y == 1

    def at(self, p, strict=True):
        if strict and p in self.default_bad_primes():
            raise BadReduction(p, "discriminant")
        d = reduce_rational(self.d, p)
        if d is None:
            raise BadReduction(p, "discriminant")
        return ConicModP(p, d)


class ConicModP:
    def __init__(self, p, d):
        self.p, self.d = p, d
        self.identity = (1, 0)

    def reduce(self, pt):
        x, y = (reduce_rational(c, self.p) for c in pt)
        if x is None or y is None:
            raise BadReduction(self.p, "denominator")
        return (x, y)

    def add(self, a, b):
        p = self.p
        return ((a[0] * b[0] + self.d * a[1] * b[1]) % p, (a[0] * b[1] + b[0] * a[1]) % p)

    def neg(self, a):
        return (a[0], -a[1] % self.p)

    def mul(self, a, k):
        return _square_and_multiply(self, a, k)

    def is_identity(self, a):
        return a == self.identity

    def key(self, a):
        return a

    def exponent(self):
        p, d = self.p, self.d
        if p == 2:
            return 2
        if d == 0:
            # x^2 = 1: {+-1} times an additive group of order p
            return 2 * p
        return p - 1 if is_square_mod(d, p) else p + 1


@dataclass(frozen=True)
class CubicNormTorus:
    """Norm-one units x + y t + z t^2 in Q[t]/(f), f monic cubic given as
    coefficients from t^3 down to the constant."""

    f: tuple

    def __post_init__(self):
        f = _fracs(self.f)
        if len(f) != 4 or f[0] != 1:
            raise ValueError("expected a monic cubic")
        object.__setattr__(self, "f", f)

    def discriminant(self):
        _, a, b, c = self.f
        return a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c

    def default_bad_primes(self):
        out = set(_bad_primes_of(self.discriminant()))
        for c in self.f:
            out |= _bad_primes_of(Fraction(c).denominator)
        return out

    def on_curve(self, pt):
        return self.norm(pt) == 1

    def norm(self, pt):
        # determinant of multiplication by the element on the basis 1, t, t^2
        x, y, z = map(Fraction, pt)
        _, a, b, c = self.f
        # t^3 = -a t^2 - b t - c
        def times_t(v):
            v0, v1, v2 = v
            return (-c * v2, v0 - b * v2, v1 - a * v2)
        col0 = (x, y, z)
        col1 = times_t(col0)
        col2 = times_t(col1)
        m = [[col0[i], col1[i], col2[i]] for i in range(3)]
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    def at(self, p, strict=True):
        if strict and p in self.default_bad_primes():
            raise BadReduction(p, "discriminant")
        coeffs = P.from_rationals(list(reversed(self.f)), p)
        if coeffs is None:
            raise BadReduction(p, "discriminant")
        return CubicRingModP(p, coeffs)


class CubicRingModP:
    def __init__(self, p, modulus):
        self.p = p
        self.modulus = modulus
        self.identity = (1,)

    def reduce(self, pt):
        vals = [reduce_rational(c, self.p) for c in pt]
        if any(v is None for v in vals):
            raise BadReduction(self.p, "denominator")
        return tuple(P.mod(P.trim(vals), self.modulus, self.p))

    def add(self, a, b):
        return tuple(P.mod(P.mul(list(a), list(b), self.p), self.modulus, self.p))

    def neg(self, a):
        p = self.p
        _, s, _ = P.xgcd(list(a), self.modulus, p)
        return tuple(P.mod(s, self.modulus, p))

    def mul(self, a, k):
        return _square_and_multiply(self, a, k)

    def is_identity(self, a):
        return a == self.identity

    def key(self, a):
        return a

    def factor_degrees(self):
        """[(degree, multiplicity)] of the irreducible factors mod p."""
        p, f = self.p, self.modulus
        if P.deg(P.gcd(f, P.derivative(f, p), p)) == 0:
            roots = P.deg(P.gcd(P.sub(P.powmod([0, 1], p, f, p), [0, 1], p), f, p))
            return {3: [(1, 1)] * 3, 1: [(1, 1), (2, 1)], 0: [(3, 1)]}[roots]
        out = []
        rest = f
        for r in range(p):
            m = 0
            while P.deg(rest) > 0 and P.evaluate(rest, r, p) == 0:
                rest = P.divmod_(rest, [(-r) % p, 1], p)[0]
                m += 1
            if m:
                out.append((1, m))
        if P.deg(rest) > 0:
            out.append((P.deg(rest), 1))
        return out

    def unit_group_order(self):
        p = self.p
        total = 1
        for k, m in self.factor_degrees():
            total *= p ** (k * (m - 1)) * (p**k - 1)
        return total

    def exponent(self):
        p = self.p
        facs = self.factor_degrees()
        if all(m == 1 for _, m in facs):
            return p ** max(k for k, _ in facs) - 1
        return self.unit_group_order()


@dataclass(frozen=True)
class SplitTorusPair:
    """xyz = 1, i.e. pairs of units (x, y) under componentwise product."""

    def default_bad_primes(self):
        return set()

    def on_curve(self, pt):
        return Fraction(pt[0]) * Fraction(pt[1]) * Fraction(pt[2]) == 1 if len(pt) == 3 else True

    def at(self, p, strict=True):
        return PairModP(p)


class PairModP:
    def __init__(self, p):
        self.p = p
        self.identity = (1, 1)

    def reduce(self, pt):
        vals = [reduce_rational(c, self.p) for c in pt[:2]]
        if any(v is None or v == 0 for v in vals):
            raise BadReduction(self.p, "denominator")
        return tuple(vals)

    def add(self, a, b):
        return (a[0] * b[0] % self.p, a[1] * b[1] % self.p)

    def neg(self, a):
        return (pow(a[0], -1, self.p), pow(a[1], -1, self.p))

    def mul(self, a, k):
        return (pow(a[0], k, self.p), pow(a[1], k, self.p))

    def is_identity(self, a):
        return a == self.identity

    def key(self, a):
        return a

    def exponent(self):
        return self.p - 1


def _square_and_multiply(G, a, k):
    if k < 0:
        return _square_and_multiply(G, G.neg(a), -k)
    result = G.identity
    while k:
        if k & 1:
            result = G.add(result, a)
        k >>= 1
        if k:
            a = G.add(a, a)
    return result


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a: tuple

    def __post_init__(self):
        a = _fracs(self.a)
        if len(a) != 5:
            raise ValueError("expected a1, a2, a3, a4, a6")
        object.__setattr__(self, "a", a)
        if self.discriminant() == 0:
            raise ValueError("singular curve")

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def default_bad_primes(self):
        out = set(_bad_primes_of(self.discriminant()))
        for c in self.a:
            out |= _bad_primes_of(Fraction(c.denominator))
        return out

    def on_curve(self, pt):
        if pt is None:
            return True
        a1, a2, a3, a4, a6 = self.a
        x, y = map(Fraction, pt)
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def at(self, p, strict=True):
        # a singular reduction has no usable group law, so it is always bad
        a = [reduce_rational(c, p) for c in self.a]
        if any(c is None for c in a):
            raise BadReduction(p, "discriminant")
        if reduce_rational(self.discriminant(), p) in (None, 0):
            raise BadReduction(p, "discriminant")
        return EllipticModP(p, a)


class EllipticModP:
    def __init__(self, p, a):
        self.p = p
        self.a1, self.a2, self.a3, self.a4, self.a6 = a
        self.identity = None

    def reduce(self, pt):
        if pt is None:
            return None
        x, y = (reduce_rational(c, self.p) for c in pt)
        if x is None or y is None:
            raise BadReduction(self.p, "denominator")
        return (x, y)

    def neg(self, P1):
        if P1 is None:
            return None
        x, y = P1
        return (x, (-y - self.a1 * x - self.a3) % self.p)

    def add(self, P1, P2):
        if P1 is None:
            return P2
        if P2 is None:
            return P1
        p = self.p
        x1, y1 = P1
        x2, y2 = P2
        if x1 == x2:
            if (y1 + y2 + self.a1 * x2 + self.a3) % p == 0:
                return None
            num = (3 * x1 * x1 + 2 * self.a2 * x1 + self.a4 - self.a1 * y1) % p
            den = (2 * y1 + self.a1 * x1 + self.a3) % p
        else:
            num = (y2 - y1) % p
            den = (x2 - x1) % p
        lam = num * pow(den, -1, p) % p
        nu = (y1 - lam * x1) % p
        x3 = (lam * lam + self.a1 * lam - self.a2 - x1 - x2) % p
        y3 = (-(lam + self.a1) * x3 - nu - self.a3) % p
        return (x3, y3)

    def mul(self, P1, k):
        return _square_and_multiply(self, P1, k)

    def is_identity(self, P1):
        return P1 is None

    def key(self, P1):
        return P1

    def order_interval(self):
        p = self.p
        r = math.isqrt(4 * p)
        return max(1, p + 1 - r), p + 1 + r + 1

    def count_points(self):
        return count_weierstrass_points((self.a1, self.a2, self.a3, self.a4, self.a6), self.p)


def _squares_mask(p):
    mask = np.zeros(p, dtype=bool)
    x = np.arange(p, dtype=np.int64)
    mask[(x * x) % p] = True
    return mask


def _poly_values(coeffs_low_first, p):
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs_low_first):
        acc = (acc * x + c) % p
    return acc


def count_weierstrass_points(a, p):
    """#E(F_p) including the point at infinity."""
    a1, a2, a3, a4, a6 = (int(c) % p for c in a)
    if p == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    n += 1
        return n
    # discriminant in y: (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
    disc = [(a3 * a3 + 4 * a6) % p, (2 * a1 * a3 + 4 * a4) % p, (a1 * a1 + 4 * a2) % p, 4 % p]
    vals = _poly_values(disc, p)
    sq = _squares_mask(p)
    return 1 + int(np.where(vals == 0, 1, np.where(sq[vals], 2, 0)).sum())


def count_sextic_points(f_low_first, p):
    """#C(F_p) for y^2 = f(x), deg f = 6, counting the points at infinity."""
    f = [int(c) % p for c in f_low_first]
    vals = _poly_values(f, p)
    sq = _squares_mask(p)
    affine = int(np.where(vals == 0, 1, np.where(sq[vals], 2, 0)).sum())
    lead = f[-1]
    infinity = 0 if lead == 0 else (2 if sq[lead] else 0)
    return affine + infinity


# ------------------------------------------------------------- Jacobians


@dataclass(frozen=True)
class Genus2Jacobian:
    """Jacobian of y^2 = f(x), f of degree 6 given from x^6 down.

    The leading coefficient must be a rational square; `inf_plus_sign`
    picks inf_plus as the point at infinity where y/x^3 tends to
    inf_plus_sign * sqrt(leading coefficient).
    """

    f: tuple
    inf_plus_sign: int = -1

    def __post_init__(self):
        f = _fracs(self.f)
        if len(f) != 7 or f[0] == 0:
            raise ValueError("expected a sextic")
        object.__setattr__(self, "f", f)
        if self.lead_sqrt() is None:
            raise ValueError("leading coefficient must be a rational square")

    def lead_sqrt(self):
        c = self.f[0]
        if c < 0:
            return None
        n, d = math.isqrt(c.numerator), math.isqrt(c.denominator)
        if n * n != c.numerator or d * d != c.denominator:
            return None
        return Fraction(n, d)

    def low_first(self):
        return list(reversed(self.f))

    def discriminant(self):
        import sympy

        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in self.f], x)
        return Fraction(str(sympy.discriminant(poly)))

    def default_bad_primes(self):
        out = {2}
        out |= _bad_primes_of(self.discriminant())
        out |= _bad_primes_of(self.f[0])
        for c in self.f:
            out |= _bad_primes_of(Fraction(c.denominator))
        return out

    def on_curve(self, pt):
        x, y = map(Fraction, pt)
        return y * y == sum(c * x ** (6 - i) for i, c in enumerate(self.f))

    def at(self, p, strict=True):
        if p == 2:
            raise BadReduction(p, "discriminant")
        f = P.from_rationals(self.low_first(), p)
        if f is None or P.deg(f) != 6:
            raise BadReduction(p, "discriminant")
        if P.deg(P.gcd(f, P.derivative(f, p), p)) > 0:
            raise BadReduction(p, "discriminant")
        s = reduce_rational(self.lead_sqrt() * self.inf_plus_sign, p)
        return JacobianModP(Jacobian(f, p, s), f)


class JacobianModP:
    def __init__(self, jac, f):
        self.jac = jac
        self.p = jac.p
        self.f = f
        self.identity = jac.identity
        self.add = jac.add
        self.neg = jac.neg
        self.mul = jac.mul
        self.is_identity = jac.is_identity

    def key(self, D):
        return D

    def reduce(self, divisor):
        """Reduce a formal degree-0 combination of points: a list of
        (point, multiplicity) with point an (x, y) pair, INF_PLUS or INF_MINUS."""
        if sum(m for _, m in divisor) != 0:
            raise ValueError("divisor must have degree 0")
        total = self.identity
        for pt, m in divisor:
            if pt == INF_MINUS:
                continue
            if pt == INF_PLUS:
                cls = self.jac.infinity_difference()
            else:
                x, y = (reduce_rational(c, self.p) for c in pt)
                if x is None or y is None:
                    raise BadReduction(self.p, "denominator")
                cls = self.jac.point_class(x, y)
            total = self.add(total, self.mul(cls, m))
        return total

    def count_points(self):
        return count_sextic_points(self.f, self.p)

    def order_interval(self):
        """An interval containing #J(F_p): the Hasse-Weil range narrowed by
        the exact a1 = #C(F_p) - p - 1 and the resulting bounds on a2."""
        p = self.p
        a1 = self.count_points() - p - 1
        root = math.isqrt(4 * p * a1 * a1)  # floor(2 sqrt(p) |a1|)
        a2_lo = root - 2 * p - 1
        a2_hi = (a1 * a1) // 4 + 2 * p + 1
        base = 1 + a1 + p * a1 + p * p
        lo, hi = base + a2_lo, base + a2_hi
        sp = math.isqrt(p)
        hw_lo = max(1, (sp - 1) ** 4)
        hw_hi = (sp + 2) ** 4
        return max(lo, hw_lo, 1), min(hi, hw_hi)


# ------------------------------------------------------------- orders


def bsgs_annihilator(G, x, interval):
    """Some e in [A, B] with e*x = identity, by baby-step giant-step."""
    A, B = interval
    A = max(int(A), 1)
    B = int(B)
    if G.is_identity(x):
        return A
    m = math.isqrt(B - A) + 1
    table = {}
    cur = G.identity
    for j in range(m):
        table.setdefault(G.key(cur), j)
        cur = G.add(cur, x)
    step = cur  # m*x
    giant = G.mul(x, A)
    for i in range(m + 1):
        j = table.get(G.key(G.neg(giant)))
        if j is not None:
            e = A + i * m + j
            if e <= B:
                return e
        giant = G.add(giant, step)
    raise NotFound(f"no annihilator in [{A}, {B}] at p={G.p}")


def annihilator(G, x):
    if hasattr(G, "exponent"):
        return G.exponent()
    return bsgs_annihilator(G, x, G.order_interval())


def ambient_exponent(config, p, element=None):
    G = config.at(p)
    if hasattr(G, "exponent"):
        return G.exponent()
    if element is None:
        raise ValueError("curves need the element to bound its order")
    return bsgs_annihilator(G, element, G.order_interval())


def order_coprime_to_ell(G, x, ell, e=None):
    if e is None:
        e = annihilator(G, x)
    m = ell_free_part(e, ell)
    return G.is_identity(G.mul(x, m))


def reduce_point(config, point, p, strict=True):
    G = config.at(p, strict=strict)
    return G, G.reduce(point)


# ------------------------------------------------------------- parsing


def _parse_numbers(text):
    return [Fraction(t.strip()) for t in text.split(",") if t.strip()]


def parse_config(text: str):
    """Parse `conic:d=-7`, `weierstrass:0,0,1,-1,0`, `genus2:4,-8,4,0,4,-8,5`,
    `cubicnorm:1,0,0,-2`, `pair`."""
    head, _, rest = text.strip().partition(":")
    if head == "conic":
        key, _, val = rest.partition("=")
        if key.strip() != "d":
            raise ValueError("conic configs are written conic:d=<rational>")
        return ConicTorus(Fraction(val.strip()))
    if head == "weierstrass":
        return WeierstrassCurve(tuple(_parse_numbers(rest)))
    if head == "genus2":
        body, _, opt = rest.partition(";")
        sign = -1
        if opt.strip():
            k, _, v = opt.partition("=")
            sign = int(v)
        return Genus2Jacobian(tuple(_parse_numbers(body)), sign)
    if head == "cubicnorm":
        return CubicNormTorus(tuple(_parse_numbers(rest)))
    if head in ("pair", "split-torus-pair"):
        return SplitTorusPair()
    raise ValueError(f"unknown group config {text!r}")


_DIVISOR_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?(inf[+-]|\([^)]*\))\s*")


def parse_point(text: str):
    """`5/3,4/3` -> (5/3, 4/3); `O` -> the point at infinity of a curve;
    `inf+ - (1,1)` -> [("inf+", 1), ((1, 1), -1)], a degree-0 divisor."""
    text = text.strip()
    if "inf" not in text and "(" not in text:
        if text in ("O", "0"):
            return None
        return tuple(_parse_numbers(text))
    terms = []
    pos = 0
    while pos < len(text):
        m = _DIVISOR_TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        mult = int(m.group(2) or 1) * sign
        body = m.group(3)
        if body.startswith("inf"):
            terms.append((body, mult))
        else:
            x, y = _parse_numbers(body[1:-1])
            terms.append(((x, y), mult))
        pos = m.end()
    return terms
