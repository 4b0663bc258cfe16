"""Closed matrix groups mod ell^n: enumeration, exact Haar sampling, and the
level-n fixed-point bounds.

Matrices are handled in batches as int64 numpy arrays of shape (N, d, d)
with entries in [0, ell^n).
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from arboreal.densities import DensityInterval
from arboreal.errors import CardinalityGuardExceeded, UnsupportedSpec

GUARD = 10**7


# ---------------------------------------------------------------- specs


@dataclass(frozen=True)
class GL2Full:
    ell: int
    dim = 2

    def order(self, n):
        l = self.ell
        return l ** (4 * (n - 1)) * (l * l - 1) * (l * l - l)


@dataclass(frozen=True)
class CartanSplit:
    ell: int
    dim = 2

    def order(self, n):
        return _units(self.ell, n) ** 2


@dataclass(frozen=True)
class CartanNonsplit:
    """Units of Z_l[g] with g^2 + c g + d = 0, acting on the basis (1, g)."""

    ell: int
    c: int = None
    d: int = None
    dim = 2

    def __post_init__(self):
        if self.c is None or self.d is None:
            c, d = default_nonsplit_params(self.ell)
            object.__setattr__(self, "c", c)
            object.__setattr__(self, "d", d)
        l = self.ell
        if any((x * x + self.c * x + self.d) % l == 0 for x in range(l)):
            raise ValueError(f"x^2 + {self.c}x + {self.d} is reducible mod {l}")

    def order(self, n):
        l = self.ell
        return (l * l - 1) * l ** (2 * (n - 1))


@dataclass(frozen=True)
class CartanNormalizer:
    inner: object
    dim = 2

    @property
    def ell(self):
        return self.inner.ell

    def order(self, n):
        return 2 * self.inner.order(n)


@dataclass(frozen=True)
class GSp:
    ell: int
    g: int = 2

    @property
    def dim(self):
        return 2 * self.g

    def order(self, n):
        l, g = self.ell, self.g
        sp = l ** ((n - 1) * (2 * g * g + g))
        for j in range(1, g + 1):
            sp *= l ** (2 * j - 1) * (l ** (2 * j) - 1)
        return sp * _units(l, n)


@dataclass(frozen=True)
class ScalarUnits:
    ell: int
    dim = 1

    def order(self, n):
        return _units(self.ell, n)


@dataclass(frozen=True)
class SplitTorusPair:
    """Scalar units acting on a rank-2 module."""

    ell: int
    dim = 2

    def order(self, n):
        return _units(self.ell, n)


@dataclass(frozen=True)
class BigTorusS3:
    """S3 (standard integral representation) times scalar units, rank 2."""

    ell: int
    dim = 2

    def order(self, n):
        return 6 * _units(self.ell, n)


@dataclass(frozen=True)
class AffineElement:
    translation: tuple
    linear: tuple  # row-major tuple of rows


@dataclass(frozen=True)
class Generated:
    ell: int
    level: int
    generators: tuple = field(default_factory=tuple)
    dim: int = 2

    @property
    def is_affine(self):
        return bool(self.generators) and isinstance(self.generators[0], AffineElement)

    def order(self, n):
        return None


def _units(l, n):
    return (l - 1) * l ** (n - 1)


def default_nonsplit_params(ell):
    for d in range(1, ell + 1):
        for c in range(0, ell):
            if all((x * x + c * x + d) % ell for x in range(ell)):
                return c, d
    raise ValueError("no irreducible quadratic")


def symplectic_form(dim):
    J = np.zeros((dim, dim), dtype=np.int64)
    h = dim // 2
    for i in range(dim):
        J[i, dim - 1 - i] = 1 if i < h else -1
    return J


# ---------------------------------------------------------------- helpers


def _matmul(A, B, q):
    return np.einsum("nij,njk->nik", A, B) % q


def _units_arr(l, n):
    q = l**n
    x = np.arange(q, dtype=np.int64)
    return x[x % l != 0]


def _inverse_table(q, ell):
    inv = np.zeros(q, dtype=np.int64)
    for x in range(q):
        if x % ell:
            inv[x] = pow(x, -1, q)
    return inv


@lru_cache(maxsize=None)
def _inv_table(q, ell):
    return _inverse_table(q, ell)


@lru_cache(maxsize=None)
def _val_table(ell, n):
    q = ell**n
    out = np.full(q, n, dtype=np.int64)
    for x in range(1, q):
        k = 0
        while x % ell == 0:
            x //= ell
            k += 1
        out[x * ell**k] = k
    return out


def det_mod(A, q):
    """Batched determinant mod q for d <= 4 by cofactor expansion."""
    d = A.shape[-1]
    if d == 1:
        return A[:, 0, 0] % q
    if d == 2:
        return (A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]) % q
    total = np.zeros(A.shape[0], dtype=np.int64)
    for j in range(d):
        minor = np.delete(np.delete(A, 0, axis=1), j, axis=2)
        term = A[:, 0, j] * det_mod(minor, q) % q
        total = (total + (term if j % 2 == 0 else -term)) % q
    return total


def smith_valuations_batch(A, ell, n):
    """Batched elementary-divisor valuations (capped at n) over Z/ell^n."""
    q = ell**n
    A = np.array(A, dtype=np.int64) % q
    N, d, _ = A.shape
    vt = _val_table(ell, n)
    inv = _inv_table(q, ell)
    rows = np.arange(N)
    out = np.empty((N, d), dtype=np.int64)
    for k in range(d):
        sub = vt[A[:, k:, k:]].reshape(N, -1)
        idx = sub.argmin(axis=1)
        vmin = sub[rows, idx]
        i = idx // (d - k) + k
        j = idx % (d - k) + k
        tmp = A[rows, k, :].copy()
        A[rows, k, :] = A[rows, i, :]
        A[rows, i, :] = tmp
        tmp = A[rows, :, k].copy()
        A[rows, :, k] = A[rows, :, j]
        A[rows, :, j] = tmp
        live = vmin < n
        scale = np.where(live, ell ** np.minimum(vmin, n), 1)
        uinv = np.where(live, inv[(A[:, k, k] // scale) % q], 0)
        for r in range(k + 1, d):
            f = (A[:, r, k] // scale) * uinv % q
            A[:, r, :] = (A[:, r, :] - f[:, None] * A[:, k, :]) % q
        for c in range(k + 1, d):
            f = (A[:, k, c] // scale) * uinv % q
            A[:, :, c] = (A[:, :, c] - f[:, None] * A[:, :, k]) % q
        out[:, k] = vmin
    out.sort(axis=1)
    return out


def image_cardinality(X, ell, n):
    """Size of X (Z/ell^n)^d for a single matrix X."""
    X = np.asarray(X, dtype=np.int64)[None]
    d = X.shape[-1]
    s = int(smith_valuations_batch(X, ell, n)[0].sum())
    return ell ** (d * n - s)


# ------------------------------------------------------------ enumeration


def _all_matrices(q, d):
    grid = np.array(list(itertools.product(range(q), repeat=d * d)), dtype=np.int64)
    return grid.reshape(-1, d, d)


@lru_cache(maxsize=None)
def _gl_level1(ell, d):
    M = _all_matrices(ell, d)
    return M[det_mod(M, ell) % ell != 0]


def _sp_level1(ell, g):
    """All of GSp_{2g}(F_ell) by column-wise backtracking on the pairings."""
    dim = 2 * g
    J = symplectic_form(dim)
    vecs = np.array(list(itertools.product(range(ell), repeat=dim)), dtype=np.int64)
    vJ = (vecs @ J) % ell  # row v -> v^T J
    out = []

    def rec(cols, m):
        k = len(cols)
        mask = vecs.any(axis=1)
        for i, c in enumerate(cols):
            mask &= (vJ @ c) % ell == (-m * J[i, k]) % ell
        cand = vecs[mask]
        if k == dim - 1:
            if len(cand):
                head = np.broadcast_to(np.stack(cols, axis=1), (len(cand), dim, dim - 1))
                out.append(np.concatenate([head, cand[:, :, None]], axis=2))
            return
        for v in cand:
            rec(cols + [v], m)

    for m in range(1, ell):
        rec([], m)
    return np.concatenate(out).astype(np.int64)


@lru_cache(maxsize=None)
def _gsp_level1(ell, g):
    res = _sp_level1(ell, g)
    # drop matrices that are not invertible (only possible via degenerate
    # first columns, which the pairing constraints already exclude)
    return res[det_mod(res, ell) % ell != 0]


def multiplier(M, ell, n):
    """Multipliers m with M^T J M = m J, for a batch of GSp matrices."""
    q = ell**n
    dim = M.shape[-1]
    J = symplectic_form(dim)
    P = np.einsum("nji,jk,nkl->nil", M, J, M) % q
    return P[:, 0, dim - 1] % q


def hensel_lift_gsp(M, m, ell, k0, n):
    """Lift GSp matrices valid mod ell^k0 (multiplier m) to level n."""
    q = ell**n
    M = np.array(M, dtype=np.int64) % q
    m = np.asarray(m, dtype=np.int64) % q
    dim = M.shape[-1]
    J = symplectic_form(dim)
    Jinv = (-J) % q
    inv = _inv_table(ell, ell)
    low = np.tril(np.ones((dim, dim), dtype=np.int64), -1)
    for k in range(k0, n):
        lk = ell**k
        P = np.einsum("nji,jk,nkl->nil", M, J, M)
        E = ((P - m[:, None, None] * J) % (lk * ell)) // lk
        S = (-E * inv[m % ell][:, None, None]) % ell
        W = S * low
        Z = np.einsum("ij,njk->nik", Jinv, W) % q
        M = (M + lk * _matmul(M, Z, q)) % q
    return M


def sp_kernel_sample(ell, g, n, size, rng):
    """Uniform elements of ker(Sp_{2g}(Z/ell^n) -> Sp_{2g}(F_ell))."""
    dim = 2 * g
    q = ell**n
    J = symplectic_form(dim)
    Jinv = (-J) % q
    K = np.broadcast_to(np.eye(dim, dtype=np.int64), (size, dim, dim)).copy()
    iu = np.triu_indices(dim)
    ones = np.ones(size, dtype=np.int64)
    for k in range(1, n):
        S = np.zeros((size, dim, dim), dtype=np.int64)
        vals = rng.integers(0, ell, size=(size, len(iu[0])))
        S[:, iu[0], iu[1]] = vals
        S[:, iu[1], iu[0]] = vals
        A = np.einsum("ij,njk->nik", Jinv, S) % ell
        C = (np.eye(dim, dtype=np.int64) + ell**k * A) % q
        C = hensel_lift_gsp(C, ones, ell, k + 1, n)
        K = _matmul(K, C, q)
    return K


def sp_kernel_all(ell, g, n):
    dim = 2 * g
    q = ell**n
    J = symplectic_form(dim)
    Jinv = (-J) % q
    iu = np.triu_indices(dim)
    K = np.eye(dim, dtype=np.int64)[None]
    syms = np.array(list(itertools.product(range(ell), repeat=len(iu[0]))), dtype=np.int64)
    for k in range(1, n):
        S = np.zeros((len(syms), dim, dim), dtype=np.int64)
        S[:, iu[0], iu[1]] = syms
        S[:, iu[1], iu[0]] = syms
        A = np.einsum("ij,njk->nik", Jinv, S) % ell
        C = (np.eye(dim, dtype=np.int64) + ell**k * A) % q
        C = hensel_lift_gsp(C, np.ones(len(C), dtype=np.int64), ell, k + 1, n)
        K = np.einsum("aij,bjk->abik", K, C).reshape(-1, dim, dim) % q
    return K


S3_MATRICES = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, -1], [1, -1]],
        [[-1, 1], [-1, 0]],
        [[0, 1], [1, 0]],
        [[-1, 0], [-1, 1]],
        [[1, -1], [0, -1]],
    ],
    dtype=np.int64,
)


def _cartan_nonsplit(a, b, c, d, q):
    M = np.empty((len(a), 2, 2), dtype=np.int64)
    M[:, 0, 0] = a
    M[:, 0, 1] = -b * d
    M[:, 1, 0] = b
    M[:, 1, 1] = a - b * c
    return M % q


def _nonsplit_coset(a, b, c, d, q):
    M = np.empty((len(a), 2, 2), dtype=np.int64)
    M[:, 0, 0] = a
    M[:, 0, 1] = b * d - a * c
    M[:, 1, 0] = b
    M[:, 1, 1] = -a
    return M % q


def _diag(a, b, q):
    M = np.zeros((len(a), 2, 2), dtype=np.int64)
    M[:, 0, 0] = a
    M[:, 1, 1] = b
    return M % q


def _antidiag(a, b, q):
    M = np.zeros((len(a), 2, 2), dtype=np.int64)
    M[:, 0, 1] = a
    M[:, 1, 0] = b
    return M % q


def _check_guard(spec, n):
    size = spec.order(n)
    if size is not None and size > GUARD:
        raise CardinalityGuardExceeded(f"{spec} at level {n} has {size} elements")


def enumerate_group(spec, n: int):
    """All elements of the level-n reduction, as an (N, d, d) array."""
    _check_guard(spec, n)
    l = spec.ell
    q = l**n
    if isinstance(spec, GL2Full):
        base = _gl_level1(l, 2)
        R = _all_matrices(l ** (n - 1), 2) if n > 1 else np.zeros((1, 2, 2), dtype=np.int64)
        return ((base[:, None] + l * R[None]) % q).reshape(-1, 2, 2)
    if isinstance(spec, ScalarUnits):
        return _units_arr(l, n).reshape(-1, 1, 1)
    if isinstance(spec, SplitTorusPair):
        u = _units_arr(l, n)
        return _diag(u, u, q)
    if isinstance(spec, BigTorusS3):
        u = _units_arr(l, n)
        return (S3_MATRICES[:, None] * u[None, :, None, None]).reshape(-1, 2, 2) % q
    if isinstance(spec, CartanSplit):
        a, b = np.meshgrid(_units_arr(l, n), _units_arr(l, n), indexing="ij")
        return _diag(a.ravel(), b.ravel(), q)
    if isinstance(spec, CartanNonsplit):
        a, b = _nonsplit_params(spec, n)
        return _cartan_nonsplit(a, b, spec.c, spec.d, q)
    if isinstance(spec, CartanNormalizer):
        inner = spec.inner
        if isinstance(inner, CartanSplit):
            a, b = np.meshgrid(_units_arr(l, n), _units_arr(l, n), indexing="ij")
            a, b = a.ravel(), b.ravel()
            return np.concatenate([_diag(a, b, q), _antidiag(a, b, q)])
        a, b = _nonsplit_params(inner, n)
        return np.concatenate([
            _cartan_nonsplit(a, b, inner.c, inner.d, q),
            _nonsplit_coset(a, b, inner.c, inner.d, q),
        ])
    if isinstance(spec, GSp):
        base = _gsp_level1(l, spec.g)
        if n == 1:
            return base
        m1 = multiplier(base, l, 1)
        lifts = []
        for t in range(l ** (n - 1)):
            m = m1 + l * t
            lifts.append(hensel_lift_gsp(base, m, l, 1, n))
        lifts = np.concatenate(lifts)
        K = sp_kernel_all(l, spec.g, n)
        d = spec.dim
        return np.einsum("aij,bjk->abik", lifts, K).reshape(-1, d, d) % q
    if isinstance(spec, Generated):
        if n < spec.level:
            raise ValueError("generated groups need n >= their base level")
        if spec.is_affine:
            raise UnsupportedSpec("affine generators: use affine_fixed_fraction")
        gens = [np.array(g, dtype=np.int64) % q for g in spec.generators]
        return close_linear(gens, q)
    raise UnsupportedSpec(f"cannot enumerate {spec!r}")


def _nonsplit_params(spec, n):
    l = spec.ell
    q = l**n
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    a, b = a.ravel(), b.ravel()
    norm = (a * a - a * b * spec.c + spec.d * b * b) % l
    keep = norm != 0
    return a[keep], b[keep]


def close_linear(gens, q, cap=GUARD):
    d = gens[0].shape[0]
    ident = np.eye(d, dtype=np.int64)
    seen = {ident.tobytes(): ident}
    frontier = deque([ident])
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = (x @ g) % q
            key = y.tobytes()
            if key not in seen:
                seen[key] = y
                frontier.append(y)
                if len(seen) > cap:
                    raise CardinalityGuardExceeded("generated group exceeds the cap")
    return np.array(list(seen.values()), dtype=np.int64)


# --------------------------------------------------------------- sampling


def haar_samples(spec, n: int, size: int, rng):
    """`size` independent exactly-uniform elements of the level-n group."""
    l = spec.ell
    q = l**n
    if isinstance(spec, Generated):
        raise UnsupportedSpec("Haar sampling needs a named group")
    if isinstance(spec, GL2Full):
        base = _gl_level1(l, 2)
        M1 = base[rng.integers(0, len(base), size)]
        R = rng.integers(0, l ** (n - 1), size=(size, 2, 2))
        return (M1 + l * R) % q
    if isinstance(spec, GSp):
        base = _gsp_level1(l, spec.g)
        M1 = base[rng.integers(0, len(base), size)]
        m = multiplier(M1, l, 1) + l * rng.integers(0, l ** (n - 1), size)
        L = hensel_lift_gsp(M1, m, l, 1, n)
        if n == 1:
            return L
        K = sp_kernel_sample(l, spec.g, n, size, rng)
        return _matmul(L, K, q)
    units = _units_arr(l, n)
    if isinstance(spec, ScalarUnits):
        return rng.choice(units, size).reshape(-1, 1, 1)
    if isinstance(spec, SplitTorusPair):
        u = rng.choice(units, size)
        return _diag(u, u, q)
    if isinstance(spec, BigTorusS3):
        u = rng.choice(units, size)
        s = S3_MATRICES[rng.integers(0, 6, size)]
        return s * u[:, None, None] % q
    if isinstance(spec, CartanSplit):
        return _diag(rng.choice(units, size), rng.choice(units, size), q)
    if isinstance(spec, (CartanNonsplit, CartanNormalizer)):
        # sampling from the cached parameter list is exactly uniform
        elems = enumerate_group(spec, n)
        return elems[rng.integers(0, len(elems), size)]
    raise UnsupportedSpec(f"cannot sample {spec!r}")


def haar_sample(spec, n: int, seed=None):
    rng = np.random.default_rng(seed)
    return haar_samples(spec, n, 1, rng)[0]


# ---------------------------------------------------------------- densities


def _valuation_sums(elems, ell, n):
    d = elems.shape[-1]
    X = (elems - np.eye(d, dtype=np.int64)) % ell**n
    out = []
    for start in range(0, len(X), 200_000):
        out.append(smith_valuations_batch(X[start : start + 200_000], ell, n).sum(axis=1))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def interval_from_sums(sums, ell, n):
    """Exact (lower, upper) from the per-element sums of capped valuations."""
    counts = np.bincount(sums)
    N = len(sums)
    lower = Fraction(0)
    upper = Fraction(0)
    for s, c in enumerate(counts):
        if c:
            w = Fraction(int(c), ell**s)
            upper += w
            if s < n:
                lower += w
    return lower / N, upper / N


def density_level(spec, n: int) -> DensityInterval:
    elems = enumerate_group(spec, n)
    sums = _valuation_sums(elems, spec.ell, n)
    lower, upper = interval_from_sums(sums, spec.ell, n)
    return DensityInterval(lower, upper, n)


def fixed_point_ratio(elems, ell, n):
    """Average of ell^-min(ord det(M - I), n) over the given elements."""
    sums = _valuation_sums(elems, ell, n)
    return Fraction(int(sum(int(c) * ell ** (n - s) for s, c in enumerate(np.bincount(np.minimum(sums, n))))), len(sums) * ell**n)


@dataclass
class MCEstimate:
    """Monte Carlo estimate of F with a 99% half-width.

    `estimate` averages ell^-min(ord det(M - I), sample_level) over draws at
    the deeper `sample_level`; `level_mean` caps at `level` instead, which
    estimates the level-n upper bound rather than F itself.
    """

    estimate: float
    half_width: float
    samples: int
    level: int
    sample_level: int
    level_mean: float
    level_half_width: float

    def interval(self):
        return self.estimate - self.half_width, self.estimate + self.half_width


Z99 = 2.5758293035489004


def _mc_chunk(args):
    spec, n, top, k, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    l = spec.ell
    elems = haar_samples(spec, top, k, rng)
    v = _valuation_sums(elems, l, top)
    deep = float(l) ** (-np.minimum(v, top).astype(float))
    capped = float(l) ** (-np.minimum(v, n).astype(float))
    return np.array([deep.sum(), (deep * deep).sum(), capped.sum(), (capped * capped).sum()])


def density_mc(spec, n: int, samples: int, seed=0, refine: int = 4, chunk=100_000, workers: int = 1) -> MCEstimate:
    """Each chunk draws from its own generator spawned from `seed`, so the
    result does not depend on `workers`."""
    if isinstance(spec, Generated):
        raise UnsupportedSpec("Monte Carlo needs a named group")
    top = n + refine
    sizes = [min(chunk, samples - s) for s in range(0, samples, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(spec, n, top, k, ss) for k, ss in zip(sizes, seeds)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_mc_chunk, jobs))
    else:
        parts = [_mc_chunk(j) for j in jobs]
    acc = np.sum(parts, axis=0)

    def stats(s, s2):
        mean = s / samples
        var = max(s2 / samples - mean * mean, 0.0)
        return float(mean), Z99 * math.sqrt(var / samples)

    mean, hw = stats(acc[0], acc[1])
    lmean, lhw = stats(acc[2], acc[3])
    return MCEstimate(mean, hw, samples, n, top, lmean, lhw)


# ----------------------------------------------------------- affine oracle


def _image_set(M, q):
    d = M.shape[0]
    vecs = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64)
    img = (vecs @ (M - np.eye(d, dtype=np.int64)).T) % q
    return {tuple(r) for r in img}


def close_affine(generators, q, cap=GUARD):
    d = len(generators[0].translation)
    ident = (tuple([0] * d), tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))
    gens = [(np.array(g.translation, dtype=np.int64) % q, np.array(g.linear, dtype=np.int64) % q) for g in generators]
    seen = {ident}
    frontier = deque([ident])
    while frontier:
        a, M = frontier.popleft()
        a_arr = np.array(a, dtype=np.int64)
        M_arr = np.array(M, dtype=np.int64)
        for b, N in gens:
            c = (a_arr + M_arr @ b) % q
            P = (M_arr @ N) % q
            key = (tuple(int(x) for x in c), tuple(tuple(int(x) for x in row) for row in P))
            if key not in seen:
                seen.add(key)
                frontier.append(key)
                if len(seen) > cap:
                    raise CardinalityGuardExceeded("affine closure exceeds the cap")
    return seen


def affine_fixed_fraction(generators, n: int, ell: int) -> Fraction:
    """Exact share of elements (a, M) of the generated affine group over
    Z/ell^n with a in the image of M - I, by direct enumeration."""
    q = ell**n
    group = close_affine(generators, q)
    images = {}
    good = 0
    for a, M in group:
        if M not in images:
            images[M] = _image_set(np.array(M, dtype=np.int64), q)
        good += a in images[M]
    return Fraction(good, len(group))


def affine_fixed_interval(generators, n: int, ell: int) -> DensityInterval:
    """Bounds on F for a generated affine group known only mod ell^n.

    upper: share of level-n elements with a fixed point (every element of
    the profinite group with a fixed point has one mod ell^n).
    lower: share of elements with M - I invertible mod ell, whose lifts all
    have a fixed point."""
    q = ell**n
    group = close_affine(generators, q)
    images = {}
    fixed = free = 0
    for a, M in group:
        if M not in images:
            Ma = np.array(M, dtype=np.int64)
            images[M] = _image_set(Ma, q)
            images[M, "unit"] = int(det_mod((Ma - np.eye(len(M), dtype=np.int64))[None], ell)[0]) % ell != 0
        fixed += a in images[M]
        free += images[M, "unit"]
    return DensityInterval(Fraction(free, len(group)), Fraction(fixed, len(group)), n)


def full_affine_generators(spec, n):
    """Generators of (Z/ell^n)^d semidirect the level-n group of spec."""
    elems = enumerate_group(spec, n)
    d = elems.shape[-1]
    eye = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    gens = [AffineElement(tuple(int(i == k) for i in range(d)), eye) for k in range(d)]
    gens += [AffineElement(tuple([0] * d), tuple(map(tuple, M.tolist()))) for M in elems]
    return gens


# ---------------------------------------------------------------- parsing


def load_generated(path, ell):
    with open(path) as fh:
        data = json.load(fh)
    level = int(data["level"])
    gens = []
    for g in data["generators"]:
        if isinstance(g, dict):
            gens.append(AffineElement(tuple(g["translation"]), tuple(map(tuple, g["linear"]))))
        else:
            gens.append(tuple(map(tuple, g)))
    dim = len(gens[0].linear) if isinstance(gens[0], AffineElement) else len(gens[0])
    return Generated(int(data.get("ell", ell)), level, tuple(gens), dim)


def _kv(text):
    out = {}
    for part in text.split(","):
        if part:
            k, _, v = part.partition("=")
            out[k.strip()] = int(v)
    return out


def parse_spec(text: str, ell: int):
    """Parse the textual form of a group spec, e.g. `gl2`, `cartan:split`,
    `cartan-normalizer:nonsplit:c=1,d=1`, `gsp:2`, `generated:@file`."""
    head, _, rest = text.partition(":")
    if head == "gl2":
        return GL2Full(ell)
    if head == "gsp":
        return GSp(ell, int(rest or 2))
    if head in ("scalar-units", "gm"):
        return ScalarUnits(ell)
    if head == "split-torus-pair":
        return SplitTorusPair(ell)
    if head == "bigtorus-s3":
        return BigTorusS3(ell)
    if head in ("cartan", "cartan-normalizer"):
        kind, _, params = rest.partition(":")
        if kind == "split":
            inner = CartanSplit(ell)
        elif kind == "nonsplit":
            kv = _kv(params)
            inner = CartanNonsplit(ell, kv.get("c"), kv.get("d"))
        else:
            raise ValueError(f"unknown Cartan type {kind!r}")
        return inner if head == "cartan" else CartanNormalizer(inner)
    if head == "generated":
        if not rest.startswith("@"):
            raise ValueError("generated specs are written generated:@path")
        return load_generated(rest[1:], ell)
    raise ValueError(f"unknown group spec {text!r}")
