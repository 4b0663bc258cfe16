"""Rerun the eight reference prime scans and compare with the shipped tables.

    python scripts/reproduce_tables.py --bound 1e5 --workers 4 --out results/tables.csv
"""

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass, field

from arboreal.redscan import EXAMPLE_NAMES, compare_reference, example_config, run_scan


@dataclass
class TableRun:
    bound: int = 10**4
    workers: int = 1
    examples: list = field(default_factory=lambda: list(EXAMPLE_NAMES))
    out: str | None = None


def bounds_up_to(top):
    out, x = [], 1000
    while x <= top:
        out.append(x)
        x *= 10
    return out


def main(cfg: TableRun):
    rows, failures = [], 0
    for name in cfg.examples:
        t = time.time()
        rep = run_scan(example_config(name, bounds_up_to(cfg.bound)), workers=cfg.workers)
        diffs = compare_reference(rep, name)
        failures += bool(diffs)
        for r in rep.rows:
            rows.append([name, r.x, r.good, r.total, f"{r.ratio:.5f}"])
        last = rep.rows[-1]
        print(f"{name:15s} {last.good:>7}/{last.total:<7} {'ok' if not diffs else diffs}  {time.time() - t:.1f}s")
    if cfg.out:
        os.makedirs(os.path.dirname(cfg.out) or ".", exist_ok=True)
        with open(cfg.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["example", "x", "good", "total", "ratio"])
            w.writerows(rows)
    return 1 if failures else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=lambda s: int(float(s)), default=10**4)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--examples", nargs="*", default=list(EXAMPLE_NAMES))
    ap.add_argument("--out")
    a = ap.parse_args()
    sys.exit(main(TableRun(a.bound, a.workers, a.examples, a.out)))
