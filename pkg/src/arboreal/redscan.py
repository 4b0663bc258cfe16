"""Prime scans: count primes p <= x at which a rational point has order
prime to ell modulo p, and compare against the shipped reference tables."""

from __future__ import annotations

import csv
import hashlib
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from arboreal import __version__
from arboreal.algebraic import (
    INF_PLUS,
    ConicTorus,
    CubicNormTorus,
    Genus2Jacobian,
    WeierstrassCurve,
    order_coprime_to_ell,
    parse_config,
    parse_point,
)
from arboreal.arith import is_prime, sieve_primes
from arboreal.errors import ArborealError, BadReduction, UnknownReference

REFERENCE_SHA256 = "4617f0c097c392aa1b4ed359c419f848dd58897bf7d3a6d59a272779e6f22acc"
MAX_BOUND = 10**7


@dataclass
class ScanConfig:
    """`exclusions=None` applies the config's default bad-prime policy.
    An explicit list replaces it; primes where reduction is impossible
    (vanishing denominators, singular curves) are skipped either way."""

    group: object
    alpha: object
    ell: int
    bounds: list
    exclusions: list | None = None
    predicted: Fraction | None = None
    name: str = "custom"

    def __post_init__(self):
        self.bounds = sorted(int(b) for b in self.bounds)
        if not is_prime(self.ell):
            raise ValueError(f"ell={self.ell} is not prime")
        if self.bounds and self.bounds[-1] > MAX_BOUND:
            raise ValueError(f"bound above {MAX_BOUND}")

    def excluded(self):
        if self.exclusions is None:
            return set(self.group.default_bad_primes())
        return set(self.exclusions)


@dataclass
class ScanRow:
    x: int
    good: int
    total: int
    predicted: Fraction | None = None

    @property
    def ratio(self):
        return self.good / self.total if self.total else 0.0

    def as_dict(self):
        return {
            "x": self.x,
            "good": self.good,
            "total": self.total,
            "ratio": round(self.ratio, 5),
            "predicted": None if self.predicted is None else str(self.predicted),
        }


@dataclass
class ScanReport:
    name: str
    ell: int
    rows: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def row_at(self, x):
        for r in self.rows:
            if r.x == x:
                return r
        return None

    def as_dict(self):
        return {
            "name": self.name,
            "ell": self.ell,
            "rows": [r.as_dict() for r in self.rows],
            "skipped": {str(p): why for p, why in sorted(self.skipped.items())},
            "provenance": self.provenance,
        }

    def to_csv(self):
        buf = io.StringIO()
        buf.write("x,good,total,ratio,predicted\n")
        for r in self.rows:
            pred = "" if r.predicted is None else f"{float(r.predicted):.5f}"
            buf.write(f"{r.x},{r.good},{r.total},{r.ratio:.5f},{pred}\n")
        return buf.getvalue()


def classify_prime(cfg: ScanConfig, p: int, excluded=None):
    """'good', 'bad' (order divisible by ell) or a skip reason."""
    if excluded is None:
        excluded = cfg.excluded()
    if p in excluded:
        return "excluded"
    try:
        G = cfg.group.at(p, strict=False)
        x = G.reduce(cfg.alpha)
    except BadReduction as exc:
        return exc.reason
    try:
        return "good" if order_coprime_to_ell(G, x, cfg.ell) else "bad"
    except ArborealError as exc:
        raise type(exc)(f"p={p}: {exc}") from exc


def _scan_range(args):
    cfg, primes = args
    excluded = cfg.excluded()
    return [(p, classify_prime(cfg, p, excluded)) for p in primes]


def _chunks(seq, k):
    size = max(1, -(-len(seq) // k))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def run_scan(cfg: ScanConfig, workers: int = 1) -> ScanReport:
    if not cfg.bounds:
        return ScanReport(cfg.name, cfg.ell)
    primes = [int(p) for p in sieve_primes(cfg.bounds[-1])]
    if workers > 1:
        jobs = [(cfg, chunk) for chunk in _chunks(primes, 4 * workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_scan_range, jobs))
        results = [r for part in parts for r in part]
    else:
        results = _scan_range((cfg, primes))

    report = ScanReport(
        cfg.name,
        cfg.ell,
        provenance={"version": __version__, "config": describe(cfg)},
    )
    good = total = 0
    bi = 0
    for p, status in results:
        while bi < len(cfg.bounds) and p > cfg.bounds[bi]:
            report.rows.append(ScanRow(cfg.bounds[bi], good, total, cfg.predicted))
            bi += 1
        if status in ("good", "bad"):
            total += 1
            good += status == "good"
        else:
            report.skipped[p] = status
    while bi < len(cfg.bounds):
        report.rows.append(ScanRow(cfg.bounds[bi], good, total, cfg.predicted))
        bi += 1
    return report


def describe(cfg: ScanConfig):
    return {
        "group": repr(cfg.group),
        "alpha": repr(cfg.alpha),
        "ell": cfg.ell,
        "bounds": cfg.bounds,
        "exclusions": None if cfg.exclusions is None else sorted(cfg.exclusions),
    }


# ---------------------------------------------------------- reference data


def _reference_bytes():
    return resources.files("arboreal").joinpath("data/reference_tables.csv").read_bytes()


def reference_checksum():
    return hashlib.sha256(_reference_bytes()).hexdigest()


def load_reference():
    raw = _reference_bytes()
    if hashlib.sha256(raw).hexdigest() != REFERENCE_SHA256:
        raise ArborealError("reference table checksum mismatch")
    table = {}
    for row in csv.DictReader(io.StringIO(raw.decode())):
        table.setdefault(row["example"], {})[int(row["x"])] = (int(row["good"]), int(row["total"]))
    return table


def compare_reference(report: ScanReport, reference_id: str):
    """List of (bound, field, got, expected) mismatches; empty means equal."""
    table = load_reference()
    if reference_id not in table:
        raise UnknownReference(reference_id)
    ref = table[reference_id]
    diffs = []
    for r in report.rows:
        if r.x not in ref:
            continue
        good, total = ref[r.x]
        if r.good != good:
            diffs.append((r.x, "good", r.good, good))
        if r.total != total:
            diffs.append((r.x, "total", r.total, total))
    return diffs


def density_gap(report: ScanReport, predicted) -> float:
    if not report.rows:
        raise ValueError("empty report")
    return abs(report.rows[-1].ratio - float(Fraction(predicted)))


# ---------------------------------------------------------- shipped examples

# Exclusion lists were chosen to reproduce the reference totals: only primes
# where the point or curve genuinely fails to reduce are dropped.  In
# particular bigtorus keeps 2 and 3 and badtwist keeps 7.
_EXAMPLES = {
    "untwistedtorus": dict(
        group=ConicTorus(1), alpha=(Fraction(5, 3), Fraction(4, 3)), ell=2,
        exclusions=[], predicted=Fraction(1, 3)),
    "badtwist": dict(
        group=ConicTorus(-7), alpha=(Fraction(3, 4), Fraction(1, 4)), ell=7,
        exclusions=[], predicted=Fraction(17, 24)),
    "bigtorus": dict(
        group=CubicNormTorus((1, 0, 0, -2)), alpha=(-1, 1, 0), ell=2,
        exclusions=[], predicted=Fraction(67, 168)),
    "noncmex": dict(
        group=WeierstrassCurve((0, 0, 1, -1, 0)), alpha=(0, 0), ell=2,
        exclusions=[37], predicted=Fraction(11, 21)),
    "cmnonsplit": dict(
        group=WeierstrassCurve((0, 0, 0, 0, 3)), alpha=(1, 2), ell=2,
        exclusions=[2, 3], predicted=Fraction(8, 15)),
    "cmsplit": dict(
        group=WeierstrassCurve((0, 0, 0, -207515, 44740234)), alpha=(253, 2904), ell=2,
        exclusions=None, predicted=Fraction(2, 9)),
    "cmramified": dict(
        group=WeierstrassCurve((0, 0, 0, 3, 0)), alpha=(1, -2), ell=2,
        exclusions=[2, 3], predicted=Fraction(17, 32)),
    "abvarex": dict(
        group=Genus2Jacobian((4, -8, 4, 0, 4, -8, 5), inf_plus_sign=-1),
        alpha=[(INF_PLUS, 1), ((1, 1), -1)], ell=2,
        exclusions=None, predicted=None),
}

EXAMPLE_NAMES = tuple(_EXAMPLES)


def example_config(name: str, bounds=(10**3, 10**4)) -> ScanConfig:
    if name not in _EXAMPLES:
        raise UnknownReference(name)
    return ScanConfig(bounds=list(bounds), name=name, **_EXAMPLES[name])


# ---------------------------------------------------------- config files


def _parse_bound(text):
    text = text.strip().lower()
    if "e" in text:
        base, _, exp = text.partition("e")
        return int(base or 1) * 10 ** int(exp)
    return int(text)


def parse_config_text(text: str) -> ScanConfig:
    """Line-oriented `key = value`; keys group, point, ell, bounds,
    exclusions (optional, comma separated or `default`), predicted, name."""
    kv = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {line!r}")
        k, _, v = line.partition("=")
        kv[k.strip()] = v.strip()
    missing = {"group", "point", "ell", "bounds"} - set(kv)
    if missing:
        raise ValueError(f"config missing keys: {sorted(missing)}")
    excl = kv.get("exclusions", "default")
    exclusions = None if excl == "default" else [int(t) for t in excl.split(",") if t.strip()]
    return ScanConfig(
        group=parse_config(kv["group"]),
        alpha=parse_point(kv["point"]),
        ell=int(kv["ell"]),
        bounds=[_parse_bound(b) for b in kv["bounds"].split(",")],
        exclusions=exclusions,
        predicted=Fraction(kv["predicted"]) if "predicted" in kv else None,
        name=kv.get("name", "custom"),
    )


def load_config(path) -> ScanConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())
