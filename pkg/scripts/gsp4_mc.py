"""Monte Carlo estimates for GSp4 against the tabulated bounds."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from arboreal.densities import GSP4_TABLE, gsp4_bounds
from arboreal.matgroups import GSp, density_level, density_mc


@dataclass
class MCRun:
    samples: int = 10**6
    seed: int = 2024
    workers: int = 1
    refine: int = 4


def main(cfg: MCRun):
    lvl1 = density_level(GSp(2, 2), 1)
    out = {"config": asdict(cfg), "level1_lower": str(lvl1.lower), "closed_form_lower": str(gsp4_bounds(2).lower), "runs": []}
    for ell, n in ((2, 4), (3, 2)):
        t = time.time()
        est = density_mc(GSp(ell, 2), n, cfg.samples, seed=cfg.seed + ell, refine=cfg.refine, workers=cfg.workers)
        tab = GSP4_TABLE[ell]
        out["runs"].append({
            "ell": ell, "n": n, "estimate": est.estimate, "half_width_99": est.half_width,
            "table": [str(tab.lower), str(tab.upper)],
            "inside": bool(tab.lower <= est.estimate <= tab.upper),
            "seconds": round(time.time() - t, 1),
        })
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=lambda s: int(float(s)), default=10**6)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    main(MCRun(a.samples, a.seed, a.workers))
