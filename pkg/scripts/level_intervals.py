"""Exact level-n intervals next to the closed forms, for every small family."""

import argparse

from arboreal.densities import cm_density, gl2_density, gm_density, split_torus_pair_density
from arboreal.matgroups import (
    CartanNonsplit,
    CartanNormalizer,
    CartanSplit,
    GL2Full,
    ScalarUnits,
    SplitTorusPair,
    density_level,
)
from arboreal.errors import CardinalityGuardExceeded


def families(ell):
    yield "gm", ScalarUnits(ell), gm_density(ell)
    yield "gl2", GL2Full(ell), gl2_density(ell)
    yield "split-torus-pair", SplitTorusPair(ell), split_torus_pair_density(ell)
    yield "cm split cartan", CartanSplit(ell), cm_density(ell, "split", "cartan")
    yield "cm split normalizer", CartanNormalizer(CartanSplit(ell)), cm_density(ell, "split", "normalizer")
    yield "cm inert cartan", CartanNonsplit(ell), cm_density(ell, "inert", "cartan")
    yield "cm inert normalizer", CartanNormalizer(CartanNonsplit(ell)), cm_density(ell, "inert", "normalizer")


def main(ells, max_level):
    for ell in ells:
        for name, spec, value in families(ell):
            for n in range(1, max_level + 1):
                try:
                    iv = density_level(spec, n)
                except CardinalityGuardExceeded:
                    break
                flag = "" if iv.contains(value) else "  OUTSIDE"
                print(f"ell={ell} {name:22s} n={n}  [{float(iv.lower):.6f}, {float(iv.upper):.6f}]  F={float(value):.6f}{flag}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--ell", type=int, nargs="*", default=[2, 3, 5])
    ap.add_argument("--max-level", type=int, default=3)
    a = ap.parse_args()
    main(a.ell, a.max_level)
