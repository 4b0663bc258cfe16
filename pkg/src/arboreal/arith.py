"""Exact arithmetic helpers: valuations, Smith form over Z/l^n, sieving and
factoring, residues, and small extension fields of F_p."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from arboreal import polys

INFINITY = math.inf


def ord_ell(x: int, ell: int):
    """Largest k with ell**k dividing x; INFINITY for x == 0."""
    if x == 0:
        return INFINITY
    x = abs(x)
    k = 0
    while x % ell == 0:
        x //= ell
        k += 1
    return k


def ell_free_part(e: int, ell: int) -> int:
    if e < 1:
        raise ValueError("expected a positive integer")
    while e % ell == 0:
        e //= ell
    return e


def smith_valuations(M, ell: int, n: int) -> list:
    """Valuations of the elementary divisors of M over Z/ell^n, each capped at n,
    in nondecreasing order.

    Uses valuation pivoting: at each step the entry of least valuation is
    moved to the corner and its row and column are cleared.
    """
    q = ell**n
    A = [[int(v) % q for v in row] for row in M]
    d = len(A)
    cols = len(A[0]) if d else 0
    out = []
    for k in range(min(d, cols)):
        best = None
        for i in range(k, d):
            for j in range(k, cols):
                if A[i][j]:
                    v = ord_ell(A[i][j], ell)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            out.extend([n] * (min(d, cols) - k))
            break
        v, i, j = best
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        piv = A[k][k]
        unit_inv = pow(piv // ell**v, -1, q)
        for i in range(k + 1, d):
            if A[i][k]:
                f = (A[i][k] // ell**v) * unit_inv % q
                A[i] = [(a - f * b) % q for a, b in zip(A[i], A[k])]
        for j in range(k + 1, cols):
            if A[k][j]:
                f = (A[k][j] // ell**v) * unit_inv % q
                for row in A:
                    row[j] = (row[j] - f * row[k]) % q
        out.append(v)
    return sorted(min(v, n) for v in out)


def image_size_from_valuations(vals, ell: int, n: int) -> int:
    d = len(vals)
    return ell ** (d * n - sum(min(v, n) for v in vals))


def sieve_primes(x) -> list:
    x = int(x)
    if x < 2:
        return []
    mark = np.ones(x + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark).tolist()


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng) -> int:
    if n % 2 == 0:
        return 2
    while True:
        c = rng.randrange(1, n)
        f = lambda t: (t * t + c) % n
        x = y = rng.randrange(2, n)
        g = 1
        while g == 1:
            x = f(x)
            y = f(f(y))
            g = math.gcd(abs(x - y), n)
        if g != n:
            return g


def factorize(e: int) -> dict:
    """Prime factorization as {prime: exponent}."""
    if e < 1:
        raise ValueError("expected a positive integer")
    out = {}
    p = 2
    while p * p <= e and p <= 10**6:
        while e % p == 0:
            out[p] = out.get(p, 0) + 1
            e //= p
        p += 1 if p == 2 else 2
    if e == 1:
        return out
    rng = random.Random(e)
    stack = [e]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def to_fraction(s) -> Fraction:
    return s if isinstance(s, Fraction) else Fraction(s)


def reduce_rational(x: Fraction, p: int):
    """x mod p, or None if p divides the denominator."""
    x = to_fraction(x)
    if x.denominator % p == 0:
        return None
    return x.numerator * pow(x.denominator, -1, p) % p


def is_square_mod(a: int, p: int) -> bool:
    a %= p
    if a == 0 or p == 2:
        return True
    return pow(a, (p - 1) // 2, p) == 1


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a mod the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0 or p == 2:
        return a
    if not is_square_mod(a, p):
        raise ValueError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while is_square_mod(z, p):
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@dataclass(frozen=True)
class Residue:
    """An element of Z/ell^n."""

    value: int
    ell: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.ell**self.n

    def _coerce(self, other):
        if isinstance(other, Residue):
            if (other.ell, other.n) != (self.ell, self.n):
                raise ValueError("mismatched residue rings")
            return other.value
        return int(other)

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.ell, self.n)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.ell, self.n)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.ell, self.n)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.ell, self.n)

    def is_unit(self) -> bool:
        return self.value % self.ell != 0

    def inverse(self):
        return Residue(pow(self.value, -1, self.modulus), self.ell, self.n)

    def valuation(self):
        return min(ord_ell(self.value, self.ell), self.n) if self.value else INFINITY


class FiniteField:
    """F_p[t]/(modulus) for a monic irreducible modulus of degree 1, 2 or 3."""

    def __init__(self, p: int, modulus=None):
        self.p = p
        if modulus is None:
            modulus = [0, 1]
        self.modulus = polys.monic(polys.trim([c % p for c in modulus]), p)
        self.k = len(self.modulus) - 1
        if self.k not in (1, 2, 3):
            raise ValueError("extension degree must be 1, 2 or 3")
        if self.k > 1 and any(polys.evaluate(self.modulus, r, p) == 0 for r in range(p)):
            raise ValueError("defining polynomial is reducible")
        self.order = p**self.k

    @classmethod
    def of_degree(cls, p: int, k: int):
        if k == 1:
            return cls(p)
        for tail in range(p ** k):
            coeffs = [(tail // p**i) % p for i in range(k)] + [1]
            if coeffs[0] and all(polys.evaluate(coeffs, r, p) for r in range(p)):
                return cls(p, coeffs)
        raise ValueError("no irreducible polynomial found")

    def __call__(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        return FieldElem(self, polys.mod(polys.trim([c % self.p for c in coeffs]), self.modulus, self.p))

    def zero(self):
        return self([0])

    def one(self):
        return self([1])

    def elements(self):
        for idx in range(self.order):
            yield self([(idx // self.p**i) % self.p for i in range(self.k)])

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, tuple(self.modulus)))


class FieldElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _wrap(self, coeffs):
        F = self.field
        return FieldElem(F, polys.mod(coeffs, F.modulus, F.p))

    def _other(self, other):
        if isinstance(other, FieldElem):
            return list(other.coeffs)
        return polys.trim([int(other) % self.field.p])

    def __add__(self, other):
        return self._wrap(polys.add(list(self.coeffs), self._other(other), self.field.p))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(polys.sub(list(self.coeffs), self._other(other), self.field.p))

    def __rsub__(self, other):
        return self._wrap(polys.sub(self._other(other), list(self.coeffs), self.field.p))

    def __neg__(self):
        return self._wrap(polys.neg(list(self.coeffs), self.field.p))

    def __mul__(self, other):
        return self._wrap(polys.mul(list(self.coeffs), self._other(other), self.field.p))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("zero has no inverse")
        F = self.field
        g, s, _ = polys.xgcd(list(self.coeffs), F.modulus, F.p)
        return self._wrap(polys.scale(s, pow(g[0], -1, F.p), F.p))

    def __truediv__(self, other):
        if not isinstance(other, FieldElem):
            other = self.field(int(other))
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == tuple(polys.trim([other % self.field.p]))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FieldElem({list(self.coeffs)} mod {self.field.p})"
