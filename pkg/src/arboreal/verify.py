"""The acceptance battery behind `arboreal verify-all`."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float


def _closed_forms():
    from arboreal.densities import cm_density, gl2_density, gm_density

    got = {
        "gl2(2)": gl2_density(2),
        "gl2(5)": gl2_density(5),
        "gm(2)": gm_density(2),
        "cm(2,split,normalizer)": cm_density(2, "split", "normalizer"),
        "cm(2,inert,normalizer)": cm_density(2, "inert", "normalizer"),
        "cm(5,split,normalizer)": cm_density(5, "split", "normalizer"),
    }
    want = [Fraction(11, 21), Fraction(2381, 2976), Fraction(1, 3), Fraction(2, 9), Fraction(8, 15), Fraction(817, 1152)]
    ok = list(got.values()) == want
    return ok, ", ".join(f"{k}={v}" for k, v in got.items())


def _gl2_intervals():
    from arboreal.matgroups import GL2Full, affine_fixed_fraction, density_level, full_affine_generators

    target = Fraction(11, 21)
    ivs = [density_level(GL2Full(2), n) for n in (1, 2, 3)]
    ok = all(iv.contains(target) and iv.width <= Fraction(1, 2**iv.level) for iv in ivs)
    ok &= all(b.lower >= a.lower and b.upper <= a.upper for a, b in zip(ivs, ivs[1:]))
    ok &= (ivs[0].lower, ivs[0].upper) == (Fraction(1, 3), Fraction(5, 8))
    oracle = affine_fixed_fraction(full_affine_generators(GL2Full(2), 1), 1, 2)
    ok &= oracle == ivs[0].upper
    return ok, "; ".join(f"n={iv.level}: [{iv.lower}, {iv.upper}]" for iv in ivs) + f"; oracle {oracle}"


def _counting():
    import itertools

    from arboreal.densities import gl2_cn, pair_count
    from arboreal.matgroups import GL2Full, enumerate_group, det_mod
    from arboreal.arith import ord_ell

    bad = []
    for ell, n in ((2, 1), (2, 2), (3, 1), (3, 2)):
        G = enumerate_group(GL2Full(ell), n)
        q = ell**n
        d = det_mod((G - np.eye(2, dtype=np.int64)) % q, q)
        count = sum(1 for x in d.tolist() if x and ord_ell(x, ell) == n - 1)
        if count != gl2_cn(ell, n):
            bad.append(("cn", ell, n))
    for ell in (2, 3, 5):
        for n in (2, 3):
            q = ell**n
            tally = {}
            for al, be in itertools.product(range(q), repeat=2):
                key = (al % ell, be % ell, al * be % q)
                tally[key] = tally.get(key, 0) + 1
            for a in range(ell):
                for b in range(ell):
                    for c in range(q):
                        if pair_count(a, b, c, ell, n) != tally.get((a, b, c), 0):
                            bad.append(("pairs", a, b, c, ell, n))
    return not bad, "all match" if not bad else f"{len(bad)} mismatches, first {bad[0]}"


def _gsp4(mc_samples=10**6, workers=1, seed=2024):
    from arboreal.densities import GSP4_TABLE, gsp4_bounds
    from arboreal.matgroups import GSp, density_level, density_mc

    lvl = density_level(GSp(2, 2), 1)
    ok = lvl.lower == gsp4_bounds(2).lower
    parts = [f"level-1 lower {lvl.lower} vs closed form {gsp4_bounds(2).lower}"]
    for ell, n in ((2, 4), (3, 2)):
        est = density_mc(GSp(ell, 2), n, mc_samples, seed=seed + ell, workers=workers)
        table = GSP4_TABLE[ell]
        inside = table.lower <= est.estimate <= table.upper
        ok &= inside and est.half_width < 0.002
        parts.append(f"l={ell} n={n}: {est.estimate:.5f} +- {est.half_width:.5f} in [{float(table.lower):.5f}, {float(table.upper):.5f}]")
    return ok, "; ".join(parts)


def _genus_asymptotics():
    from arboreal.gsp_asym import (
        convolution_check,
        discrepancy_report,
        finite_level_gap_check,
        slice_counts,
    )

    ok = True
    conv = convolution_check(2, 2) + convolution_check(2, 3)
    ok &= all(r.passed for r in conv)
    sc = slice_counts(3, 1, 1)
    ok &= sc.a == Fraction(3, 8) and sc.b == Fraction(5, 8)
    gaps = finite_level_gap_check(2, 3) + finite_level_gap_check(3, 2)
    ok &= all(r.passed for r in gaps)
    disc = [d for d in discrepancy_report(3, 1) if d.quantity.startswith("a^(m=2)") and d.g == 1]
    ok &= len(disc) == 1 and disc[0].closed_form == Fraction(1, 4) and disc[0].brute_force == Fraction(1, 2)
    return ok, (f"{len(conv)} convolution rows, a1={sc.a}, b1={sc.b}, "
                f"m=2 closed {disc[0].closed_form if disc else '?'} vs exhaustive {disc[0].brute_force if disc else '?'}")


def _reference_tables(bounds=(10**3, 10**4), workers=1):
    from arboreal.redscan import EXAMPLE_NAMES, compare_reference, example_config, run_scan

    diffs = {}
    for name in EXAMPLE_NAMES:
        rep = run_scan(example_config(name, bounds), workers=workers)
        d = compare_reference(rep, name)
        if d:
            diffs[name] = d
    return not diffs, "all cells equal" if not diffs else str(diffs)


def _somos():
    from arboreal.somos import (
        quartic_invariant,
        scaling_identity_holds,
        somos_ec_identity_check,
        somos_oddorder_equivalence,
        somos_terms,
    )

    t = somos_terms(104)
    ok = t[11] == 8209
    ok &= all(quartic_invariant(*t[i : i + 4]) == 0 for i in range(0, 98))
    ok &= all(scaling_identity_holds(t, n) for n in range(4, 101))
    ok &= somos_ec_identity_check(8).passed
    eq = somos_oddorder_equivalence(10**4)
    ok &= not eq.counterexamples and not eq.undetermined and eq.divides == 654
    return ok, f"a11={t[11]}, {eq.divides} of {eq.checked} primes divide a term, {len(eq.counterexamples)} counterexamples"


def _diagnostics():
    from arboreal.algebraic import WeierstrassCurve
    from arboreal.galdiag import frobenius_statistics, torsion_polynomial

    import sympy

    x = sympy.Symbol("x")
    p4 = torsion_polynomial(WeierstrassCurve((0, 0, 0, 0, 3)), 4).primitive
    ok = p4 == sympy.Poly(x**6 + 60 * x**3 - 72, x)
    noncm = WeierstrassCurve((0, 0, 1, -1, 0))
    disc = torsion_polynomial(noncm, 2).discriminant()
    ok &= disc == 592
    tv1 = frobenius_statistics(noncm, 2, 2, 10**5).tv_distance
    tv2 = frobenius_statistics(WeierstrassCurve((0, 0, 0, 3, 0)), 2, 1, 10**5).tv_distance
    ok &= tv1 < 0.02 and tv2 > 0.1
    return ok, f"psi4 primitive = {p4.as_expr()}, disc = {disc}, TV {tv1:.4f} / {tv2:.4f}"


def _reference_tables_slow(workers=1):
    return _reference_tables(bounds=(10**5,), workers=workers)


CHECKS = [
    ("1", "closed-form constants", _closed_forms),
    ("2", "GL2 level intervals", _gl2_intervals),
    ("3", "counting identities", _counting),
    ("4", "GSp4 bounds and Monte Carlo", _gsp4),
    ("5", "genus asymptotics", _genus_asymptotics),
    ("6", "reference prime tables (10^3, 10^4)", _reference_tables),
    ("7", "Somos-4", _somos),
    ("8", "torsion and Frobenius diagnostics", _diagnostics),
]
SLOW_CHECKS = [("6s", "reference prime tables (10^5)", _reference_tables_slow)]


def run_battery(only=None, mc_samples=10**6, workers=1, progress=None, slow=False, seed=2024):
    """Run the fast tier (and the 10^5 scans with slow=True).  A crash in
    one check is reported as a failure and the rest still run."""
    out = []
    for key, title, fn in CHECKS + (SLOW_CHECKS if slow else []):
        if only and key not in only:
            continue
        t = time.time()
        kwargs = {}
        if fn is _gsp4:
            kwargs = {"mc_samples": mc_samples, "workers": workers, "seed": seed}
        elif fn in (_reference_tables, _reference_tables_slow):
            kwargs = {"workers": workers}
        try:
            ok, detail = fn(**kwargs)
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckResult(key, title, bool(ok), detail, time.time() - t)
        out.append(res)
        if progress:
            progress(res)
    return out
