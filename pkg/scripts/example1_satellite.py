"""Hopf pattern with trefoil and figure-eight companions: fibration check and word."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

from pfiber import braidword as bw
from pfiber.curves import library, satellite
from pfiber.fibercheck import check, companion_power_bound
from pfiber.wordextract import extract


@dataclass
class Config:
    eps: float = 0.1
    grid: int = 4096
    margin: float = 1e-4


def run(cfg: Config) -> dict:
    hopf, tre, f8 = library("hopf"), library("trefoil_neg"), library("figure8")
    sat = satellite(hopf, [tre, f8], cfg.eps)
    rep = check(sat, cfg.grid, cfg.margin)
    ex = extract(sat)
    return {
        "config": asdict(cfg),
        "verdict": rep.verdict,
        "branch_minima": [round(b.min, 6) for b in rep.branches],
        "total_winding": round(rep.total_winding, 9),
        "word": str(ex.word),
        "writhe": bw.writhe(ex.word),
        "projection_angle": ex.angle,
        "power_bound": companion_power_bound(hopf, [tre, f8], cfg.grid),
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=Config.eps)
    ap.add_argument("--grid", type=int, default=Config.grid)
    args = ap.parse_args()
    print(json.dumps(run(Config(eps=args.eps, grid=args.grid)), indent=2))
