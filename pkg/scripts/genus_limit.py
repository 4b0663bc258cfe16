"""Print the large-genus coefficient report for several primes."""

import argparse
import json

from arboreal.gsp_asym import gsp_limit_report

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--ell", type=int, nargs="*", default=[2, 3, 5, 7])
    ap.add_argument("--order", type=int, default=12)
    a = ap.parse_args()
    for ell in a.ell:
        rep = gsp_limit_report(ell, a.order)
        for key, entry in rep["classes"].items():
            print(f"ell={ell} {key}: limit ~ {entry.get('limit_decimal')}, tail bound {entry.get('tail_bound')}")
        print(json.dumps(rep["discrepancies"]))
