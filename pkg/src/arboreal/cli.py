"""Command-line entry point: `arboreal <subcommand> ...`.

Exit codes: 0 success, 1 computation error or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from arboreal.errors import ArborealError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _bound(text):
    try:
        if "e" in text.lower():
            return int(float(text))
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a bound: {text!r}")


def _frac(x):
    return None if x is None else str(Fraction(x))


# -------------------------------------------------------------- output


def emit(payload: dict, fmt: str, out=None, csv_rows=None, text=None):
    """Print payload as JSON, CSV (csv_rows: header + rows) or text."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        if csv_rows is None:
            csv_rows = [["key", "value"]] + [[k, json.dumps(v) if isinstance(v, (dict, list)) else v] for k, v in payload.items()]
        w = csv.writer(out, lineterminator="\n")
        w.writerows(csv_rows)
    else:
        if text is None:
            text = "\n".join(f"{k}: {v}" for k, v in payload.items())
        out.write(text.rstrip("\n") + "\n")


# -------------------------------------------------------------- commands


def _validating_spec(family, ell, variant):
    from arboreal import matgroups as mg

    if family == "gl2":
        return mg.GL2Full(ell)
    if family == "gm":
        return mg.ScalarUnits(ell)
    if family == "split-torus-pair":
        return mg.SplitTorusPair(ell)
    if family == "gsp4-bounds":
        return mg.GSp(ell, 2)
    if family == "cm":
        kind, _, shape = (variant or "").partition("-")
        inner = mg.CartanSplit(ell) if kind == "split" else mg.CartanNonsplit(ell)
        return mg.CartanNormalizer(inner) if shape == "normalizer" else inner
    return None


def _validating_level(spec, budget=300_000):
    n = 1
    while n < 4 and spec.order(n + 1) <= budget:
        n += 1
    return n


def cmd_density(args):
    from arboreal.densities import FAMILIES, DensityInterval, closed_form
    from arboreal.matgroups import density_level

    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILIES)}")
    if args.family == "cm" and not args.variant:
        raise UsageError("cm needs --variant split-cartan|split-normalizer|inert-cartan|inert-normalizer")
    value = closed_form(args.family, args.ell, args.variant)
    payload = {"family": args.family, "ell": args.ell}
    if args.variant:
        payload["variant"] = args.variant
    if isinstance(value, DensityInterval):
        payload.update(lower=_frac(value.lower), upper=_frac(value.upper),
                       lower_decimal=round(float(value.lower), 10), upper_decimal=round(float(value.upper), 10))
        text = f"{args.family} ell={args.ell}\n[{value.lower}, {value.upper}]\n[{float(value.lower):.10f}, {float(value.upper):.10f}]"
    else:
        payload.update(value=_frac(value), decimal=round(float(value), 10))
        text = f"{args.family} ell={args.ell}\n{value}\n{float(value):.10f}"
    if not args.no_validate:
        spec = _validating_spec(args.family, args.ell, args.variant)
        n = _validating_level(spec) if args.level is None else args.level
        iv = density_level(spec, n)
        payload["validation"] = {"level": n, "lower": _frac(iv.lower), "upper": _frac(iv.upper)}
        if not isinstance(value, DensityInterval):
            payload["validation"]["contains"] = iv.contains(value)
        text += f"\nlevel-{n} interval [{iv.lower}, {iv.upper}]"
    emit(payload, args.format, text=text)
    return EXIT_OK


def cmd_bounds(args):
    from arboreal.densities import GSP4_TABLE, gsp4_bounds
    from arboreal.matgroups import GSp, density_level

    cf = gsp4_bounds(args.ell)
    payload = {"ell": args.ell, "closed_form": {"lower": _frac(cf.lower), "upper": _frac(cf.upper)}}
    if args.ell in GSP4_TABLE:
        t = GSP4_TABLE[args.ell]
        payload["table"] = {"lower": _frac(t.lower), "upper": _frac(t.upper), "level": t.level}
    if args.enumerate:
        iv = density_level(GSp(args.ell, 2), 1)
        payload["level1"] = {"lower": _frac(iv.lower), "upper": _frac(iv.upper)}
    emit(payload, args.format)
    return EXIT_OK


def _spec(args):
    from arboreal.matgroups import parse_spec

    try:
        return parse_spec(args.spec, args.ell)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc))


def cmd_level(args):
    from arboreal.matgroups import Generated, affine_fixed_interval, density_level

    spec = _spec(args)
    if isinstance(spec, Generated) and spec.is_affine:
        iv = affine_fixed_interval(list(spec.generators), args.n, spec.ell)
    else:
        iv = density_level(spec, args.n)
    payload = {"spec": args.spec, "ell": spec.ell, "level": args.n,
               "lower": _frac(iv.lower), "upper": _frac(iv.upper),
               "lower_decimal": float(iv.lower), "upper_decimal": float(iv.upper)}
    emit(payload, args.format)
    return EXIT_OK


def cmd_mc(args):
    from arboreal.matgroups import density_mc

    spec = _spec(args)
    seed = 0 if args.seed is None else args.seed
    est = density_mc(spec, args.n, args.samples, seed=seed, refine=args.refine, workers=args.workers)
    payload = {"spec": args.spec, "ell": spec.ell, "level": args.n, "samples": args.samples,
               "seed": seed, "estimate": est.estimate, "half_width_99": est.half_width,
               "sample_level": est.sample_level, "level_mean": est.level_mean,
               "level_half_width_99": est.level_half_width}
    emit(payload, args.format)
    return EXIT_OK


def cmd_gsp_limit(args):
    from arboreal.gsp_asym import gsp_limit_report

    payload = gsp_limit_report(args.ell, args.order)
    fmt = args.format if args.format != "text" else "json"
    emit(payload, fmt)
    return EXIT_OK if all(r["passed"] for r in payload["convolution"]) else EXIT_FAIL


def _scan_bounds(top):
    out = []
    x = 1000
    while x < top:
        out.append(x)
        x *= 10
    out.append(top)
    return out


def cmd_scan(args):
    from arboreal.redscan import compare_reference, example_config, load_config, run_scan

    if bool(args.example) == bool(args.config):
        raise UsageError("give exactly one of --example or --config")
    bounds = _scan_bounds(args.bound)
    if args.example:
        try:
            cfg = example_config(args.example, bounds)
        except ArborealError:
            raise UsageError(f"unknown example {args.example!r}")
    else:
        cfg = load_config(args.config)
        if args.bound:
            cfg.bounds = [b for b in cfg.bounds if b <= args.bound] or [args.bound]
    report = run_scan(cfg, workers=args.workers)
    payload = report.as_dict()
    diffs = []
    if args.example:
        diffs = compare_reference(report, args.example)
        payload["reference_mismatches"] = [list(d) for d in diffs]
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    elif args.format == "json":
        emit(payload, "json")
    else:
        lines = [f"{r.x:>10} {r.good:>8} {r.total:>8} {r.ratio:.5f}" for r in report.rows]
        if args.example:
            lines.append("reference: " + ("match" if not diffs else f"{len(diffs)} mismatches"))
        emit(payload, "text", text="\n".join(["         x     good    total ratio"] + lines))
    return EXIT_FAIL if diffs else EXIT_OK


def cmd_somos(args):
    from arboreal import somos

    chosen = [a is not None for a in (args.terms, args.divides, args.equivalence_bound)]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --terms, --divides, --equivalence-bound")
    if args.terms is not None:
        terms = somos.somos_terms(args.terms)
        payload = {"terms": [str(t) for t in terms]}
        text = "\n".join(f"a_{i} = {t}" for i, t in enumerate(terms))
        emit(payload, args.format, csv_rows=[["n", "a_n"]] + [[i, t] for i, t in enumerate(terms)], text=text)
        return EXIT_OK
    if args.divides is not None:
        res = somos.somos_divides(args.divides)
        payload = {"p": args.divides, "divides": res if res is not somos.UNDETERMINED else "undetermined"}
        emit(payload, args.format)
        return EXIT_OK
    rep = somos.somos_oddorder_equivalence(args.equivalence_bound)
    payload = {"bound": rep.bound, "checked": rep.checked, "divides": rep.divides, "odd_order": rep.good,
               "counterexamples": rep.counterexamples, "undetermined": rep.undetermined}
    emit(payload, args.format)
    return EXIT_OK if not rep.counterexamples else EXIT_FAIL


def cmd_diag(args):
    from arboreal.algebraic import WeierstrassCurve, parse_config
    from arboreal.galdiag import (
        curve_square_conditions,
        frobenius_statistics,
        torsion_polynomial,
    )

    try:
        curve = parse_config(args.curve)
    except ValueError as exc:
        raise UsageError(str(exc))
    if not isinstance(curve, WeierstrassCurve):
        raise UsageError("diag needs a weierstrass:a1,a2,a3,a4,a6 curve")
    payload = {"curve": args.curve}
    if args.torsion:
        tp = torsion_polynomial(curve, args.torsion)
        payload["torsion"] = {"m": args.torsion, "primitive": str(tp.primitive.as_expr()),
                              "discriminant": _frac(tp.discriminant()) if tp.primitive.degree() <= 12 else None}
    sq = curve_square_conditions(curve)
    payload["square_tests"] = {str(v): s for v, s in zip(sq.values, sq.squares)}
    if args.bound:
        rep = frobenius_statistics(curve, args.ell, args.level, args.bound)
        payload["frobenius"] = {"ell": args.ell, "level": args.level, "bound": args.bound,
                                "primes": rep.primes_used, "tv_distance": rep.tv_distance,
                                "evidence": rep.evidence}
    emit(payload, args.format)
    return EXIT_OK


def cmd_verify_all(args):
    from arboreal.redscan import reference_checksum
    from arboreal.verify import run_battery

    only = set(args.only.split(",")) if args.only else None
    print(f"reference tables sha256 {reference_checksum()}", file=sys.stderr)

    def progress(r):
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.key} {r.title} ({r.seconds:.1f}s): {r.detail}", file=sys.stderr)

    results = run_battery(only, mc_samples=args.mc_samples, workers=args.workers, progress=progress,
                          slow=args.slow and not args.fast, seed=2024 if args.seed is None else args.seed)
    payload = {"checksum": reference_checksum(),
               "results": [{"criterion": r.key, "title": r.title, "passed": r.passed,
                            "seconds": round(r.seconds, 2), "detail": r.detail} for r in results]}
    text = "\n".join(f"{r.key:>2} {'PASS' if r.passed else 'FAIL'} {r.title}" for r in results)
    emit(payload, args.format, csv_rows=[["criterion", "passed", "seconds"]] + [[r.key, r.passed, f"{r.seconds:.2f}"] for r in results], text=text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = _Parser(prog="arboreal", description="Fixed-point densities for arboreal representations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("density", parents=[common], help="closed-form density with a validating interval")
    d.add_argument("family")
    d.add_argument("--ell", type=int, required=True)
    d.add_argument("--variant")
    d.add_argument("--level", type=int)
    d.add_argument("--no-validate", action="store_true")
    d.set_defaults(func=cmd_density)

    b = sub.add_parser("bounds", parents=[common], help="GSp4 bounds")
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--enumerate", action="store_true", help="also enumerate GSp4(F_ell)")
    b.set_defaults(func=cmd_bounds)

    lv = sub.add_parser("level", parents=[common], help="exact level-n interval")
    lv.add_argument("spec")
    lv.add_argument("--ell", type=int, required=True)
    lv.add_argument("--n", type=int, required=True)
    lv.set_defaults(func=cmd_level)

    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo estimate")
    mc.add_argument("spec")
    mc.add_argument("--ell", type=int, required=True)
    mc.add_argument("--n", type=int, required=True)
    mc.add_argument("--samples", type=_bound, default=10**5)
    mc.add_argument("--refine", type=int, default=4)
    mc.set_defaults(func=cmd_mc)

    g = sub.add_parser("gsp-limit", parents=[common], help="large-genus coefficient report (JSON)")
    g.add_argument("--ell", type=int, required=True)
    g.add_argument("--order", type=int, default=12)
    g.set_defaults(func=cmd_gsp_limit)

    s = sub.add_parser("scan", parents=[common], help="prime scan")
    s.add_argument("--example")
    s.add_argument("--config")
    s.add_argument("--bound", type=_bound, default=10**4)
    s.set_defaults(func=cmd_scan)

    so = sub.add_parser("somos", parents=[common], help="Somos-4 tools")
    so.add_argument("--terms", type=int)
    so.add_argument("--divides", type=int)
    so.add_argument("--equivalence-bound", type=_bound)
    so.set_defaults(func=cmd_somos)

    dg = sub.add_parser("diag", parents=[common], help="torsion and Frobenius diagnostics")
    dg.add_argument("--curve", required=True)
    dg.add_argument("--ell", type=int, default=2)
    dg.add_argument("--level", type=int, default=1)
    dg.add_argument("--bound", type=_bound)
    dg.add_argument("--torsion", type=int, choices=(2, 3, 4, 9))
    dg.set_defaults(func=cmd_diag)

    v = sub.add_parser("verify-all", parents=[common], help="run the acceptance battery")
    v.add_argument("--fast", action="store_true", help="fast tier only (the default)")
    v.add_argument("--slow", action="store_true", help="also rescan all examples to 10^5")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.add_argument("--mc-samples", type=_bound, default=10**6)
    v.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "ell", None) is not None:
            from arboreal.arith import is_prime

            if not is_prime(args.ell):
                raise UsageError(f"--ell {args.ell} is not prime")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ArborealError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
