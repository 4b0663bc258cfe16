"""Jacobian arithmetic for genus-2 curves y^2 = f(x) with deg f = 6 over F_p.

The two points at infinity are rational when the leading coefficient of f
is a square.  A divisor class is stored as (u, v, a) meaning

    E(u, v) + a*inf_plus + b*inf_minus - (inf_plus + inf_minus),

with E(u, v) the affine Mumford divisor (u monic, v^2 = f mod u,
deg v < deg u) and b = 2 - deg u - a.  Reduced classes have deg u <= 2 and
a, b >= 0; every nonzero class has exactly one such form, and zero is
(1, (), 1).
"""

from __future__ import annotations

from arboreal import polys as P


def sqrt_leading_part(f, s, p):
    """The cubic V with leading coefficient s and deg(f - V^2) <= 2."""
    f5, f4, f3 = f[5], f[4], f[3]
    inv2s = pow(2 * s, -1, p)
    v2 = f5 * inv2s % p
    v1 = (f4 - v2 * v2) * inv2s % p
    v0 = (f3 - 2 * v2 * v1) * inv2s % p
    return P.trim([v0, v1, v2, s % p])


class Jacobian:
    def __init__(self, f, p, s):
        """f: coefficients mod p, lowest degree first, degree 6.
        s: the square root of the leading coefficient picked out by inf_plus."""
        self.p = p
        self.f = P.trim([c % p for c in f])
        if P.deg(self.f) != 6:
            raise ValueError("expected a sextic")
        if (s * s - self.f[-1]) % p:
            raise ValueError("s is not a square root of the leading coefficient")
        self.V = sqrt_leading_part(self.f, s, p)
        self.negV = P.neg(self.V, p)
        self.t = P.deg(P.sub(self.f, P.mul(self.V, self.V, p), p))
        self.identity = ((1,), (), 1)

    # -- construction

    def point_class(self, x, y):
        """Class of P - inf_minus for an affine point P = (x, y)."""
        p = self.p
        if (y * y - P.evaluate(self.f, x, p)) % p:
            raise ValueError("point is not on the curve")
        return ((-x % p, 1), P.trim([y % p]), 1)

    def infinity_difference(self):
        """Class of inf_plus - inf_minus."""
        return ((1,), (), 2)

    # -- group law

    def neg(self, D):
        u, v, a = D
        b = 2 - P.deg(list(u)) - a
        return (u, tuple(P.neg(list(v), self.p)), b)

    def is_identity(self, D):
        return D == self.identity

    def add(self, D1, D2):
        p, f = self.p, self.f
        u1, v1, a1 = list(D1[0]), list(D1[1]), D1[2]
        u2, v2, a2 = list(D2[0]), list(D2[1]), D2[2]
        b1 = 2 - P.deg(u1) - a1
        b2 = 2 - P.deg(u2) - a2
        d1, e1, e2 = P.xgcd(u1, u2, p)
        d, c1, c2 = P.xgcd(d1, P.add(v1, v2, p), p)
        s1, s2 = P.mul(c1, e1, p), P.mul(c1, e2, p)
        u = P.divmod_(P.mul(u1, u2, p), P.mul(d, d, p), p)[0]
        num = P.add(
            P.add(P.mul(P.mul(s1, u1, p), v2, p), P.mul(P.mul(s2, u2, p), v1, p), p),
            P.mul(c2, P.add(P.mul(v1, v2, p), f, p), p),
            p,
        )
        v = P.mod(P.divmod_(num, d, p)[0], u, p)
        extra = P.deg(d) - 1
        return self._reduce(u, v, a1 + a2 + extra, b1 + b2 + extra)

    def _step(self, u, v, a, b, sign):
        p, f = self.p, self.f
        base = self.V if sign > 0 else self.negV
        w = P.add(base, P.mod(P.sub(v, base, p), u, p), p)
        norm = P.sub(f, P.mul(w, w, p), p)
        q, r = P.divmod_(norm, u, p)
        assert not r, "reduction: u does not divide f - w^2"
        u2 = P.monic(q, p)
        v2 = P.mod(P.neg(w, p), u2, p)
        pole_plus = self._pole(P.sub(w, self.V, p))
        pole_minus = self._pole(P.add(w, self.V, p))
        assert pole_plus + pole_minus == P.deg(norm)
        k = P.deg(u2)
        return u2, v2, a + pole_plus - k, b + pole_minus - k

    def _pole(self, diff):
        # pole order at the relevant infinity of y - w, given w minus the
        # local expansion's polynomial part
        return P.deg(diff) if diff else self.t - 3

    def _reduce(self, u, v, a, b):
        for _ in range(24):
            k = P.deg(u)
            if k > 2:
                u, v, a, b = self._step(u, v, a, b, +1)
            elif a < 0:
                u, v, a, b = self._step(u, v, a, b, -1)
            elif b < 0:
                u, v, a, b = self._step(u, v, a, b, +1)
            else:
                return (tuple(u), tuple(v), a)
        raise RuntimeError("divisor reduction did not terminate")

    def double(self, D):
        return self.add(D, D)

    def mul(self, D, k: int):
        if k < 0:
            return self.mul(self.neg(D), -k)
        result = self.identity
        while k:
            if k & 1:
                result = self.add(result, D)
            k >>= 1
            if k:
                D = self.add(D, D)
        return result

    def key(self, D):
        return D
