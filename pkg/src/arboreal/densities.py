"""Closed-form fixed-point densities as exact rationals, and the counting
counts behind the GL2 formula."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q


@dataclass(frozen=True)
class DensityInterval:
    lower: Q
    upper: Q
    level: int

    def __post_init__(self):
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError(f"not an interval in [0,1]: {self.lower}, {self.upper}")

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    @property
    def width(self):
        return self.upper - self.lower


def _h(x):
    return Q(x * x - x - 1, x * x - 1)


def gm_density(ell: int) -> Q:
    return _h(ell)


def gl2_density(ell: int) -> Q:
    l = ell
    return Q(l**5 - l**4 - l**3 + l + 1, l**5 - l**3 - l**2 + 1)


def gl2_cn(ell: int, n: int) -> int:
    """Number of M in GL2(Z/ell^n) with ord det(M - I) exactly n - 1."""
    l = ell
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return l**4 - 2 * l**3 - l**2 + 3 * l
    return (l - 1) ** 2 * (l + 1) * l ** (3 * n - 2) - (l**2 - 1) * l ** (2 * n - 1)


def gl2_order(ell: int, n: int) -> int:
    return ell ** (4 * (n - 1)) * (ell**2 - 1) * (ell**2 - ell)


def _ord(x, ell):
    k = 0
    while x % ell == 0:
        x //= ell
        k += 1
    return k


def pair_count(a: int, b: int, c: int, ell: int, n: int) -> int:
    """Number of (alpha, beta) mod ell^n with alpha = a, beta = b mod ell and
    alpha * beta = c mod ell^n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    q = ell**n
    a, b, c = a % ell, b % ell, c % q
    if (a * b - c) % ell:
        return 0
    if a or b:
        return ell ** (n - 1)
    if c:
        return (ell - 1) * (_ord(c, ell) - 1) * ell ** (n - 1)
    return (n * ell - n - ell + 2) * ell ** (n - 1)


def cm_density(ell: int, split_or_inert: str, cartan_or_normalizer: str) -> Q:
    if split_or_inert == "split":
        cartan = _h(ell) ** 2
    elif split_or_inert == "inert":
        cartan = _h(ell**2)
    else:
        raise ValueError(f"unknown prime behaviour {split_or_inert!r}")
    if cartan_or_normalizer == "cartan":
        return cartan
    if cartan_or_normalizer == "normalizer":
        return (cartan + _h(ell)) / 2
    raise ValueError(f"unknown variant {cartan_or_normalizer!r}")


def split_torus_pair_density(ell: int) -> Q:
    l = ell
    return Q(l**3 - l**2 - l - 1, l**3 - 1)


def gsp4_bounds(ell: int) -> DensityInterval:
    l = ell
    lower = Q(l**7 - 2 * l**6 - l**5 + 4 * l**4 - 2 * l**3 + 2 * l**2 - 5,
              (l**4 - 1) * (l**2 - 1) * (l - 1))
    upper = Q(l**7 - l**6 - l**5 + 3 * l**4 - 2 * l**3 + l**2 - 4,
              l**7 - l**5 - l**3 + l)
    return DensityInterval(lower, upper, 1)


# Sharper bounds from a conjugacy-class computation at a higher level; kept
# as reference data.
GSP4_TABLE = {
    2: DensityInterval(Q(26701, 46080), Q(1201, 2048), 4),
    3: DensityInterval(Q(70769, 103680), Q(27203, 38880), 2),
}


def gl2_series_density(ell: int, terms: int = 40):
    """Partial sum of sum_n c_n / (ell^(n-1) |GL2(Z/ell^n)|) and a tail bound."""
    total = Q(0)
    for n in range(1, terms + 1):
        total += Q(gl2_cn(ell, n), ell ** (n - 1) * gl2_order(ell, n))
    return total, Q(1, ell**terms)


def gm_series_density(ell: int, terms: int = 60):
    total = Q(ell - 2, ell - 1)
    for k in range(1, terms + 1):
        total += Q(1, ell ** (2 * k))
    return total, Q(1, ell ** (2 * terms))


FAMILIES = ("gm", "gl2", "cm", "split-torus-pair", "gsp4-bounds")


def closed_form(family: str, ell: int, variant: str | None = None):
    if family == "gm":
        return gm_density(ell)
    if family == "gl2":
        return gl2_density(ell)
    if family == "split-torus-pair":
        return split_torus_pair_density(ell)
    if family == "cm":
        if not variant:
            raise ValueError("cm needs a variant like split-normalizer")
        kind, _, shape = variant.partition("-")
        return cm_density(ell, kind, shape or "cartan")
    if family == "gsp4-bounds":
        return gsp4_bounds(ell)
    raise ValueError(f"unknown family {family!r}")
