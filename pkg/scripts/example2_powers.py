"""Figure-eight pattern with a sigma_1 companion: limit terms, power bound and a sweep over r and eps."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

import numpy as np

from pfiber.curves import CurveError, library, satellite
from pfiber.fibercheck import check, companion_power_bound, t1_limit, t2_range


@dataclass
class Config:
    powers: list[int] = field(default_factory=lambda: [1, 3, 5, 8, 9, 12])
    eps_values: list[float] = field(default_factory=lambda: [1e-1, 1e-2, 1e-3])
    grid: int = 4096


def main(cfg: Config) -> None:
    pattern, comp = library("figure8"), library("sigma1_2strand")
    t1 = min(float(np.min(np.abs(t1_limit(comp, 3, j, cfg.grid)[1]))) for j in (1, 2, 3))
    lo, hi = t2_range(pattern, comp.n, cfg.grid)
    print(f"min |T1| = {t1:.9f}   T2 range = [{lo:.6f}, {hi:.6f}]")
    print(f"power bound = {companion_power_bound(pattern, [comp], cfg.grid)}")
    print("r, eps, verdict, min |dphi/dt|, total winding")
    for r in cfg.powers:
        for eps in cfg.eps_values:
            try:
                rep = check(satellite(pattern, [comp], eps, [r]), cfg.grid)
            except CurveError as exc:
                print(f"{r}, {eps:g}, error, {exc}")
                continue
            print(f"{r}, {eps:g}, {rep.verdict}, {rep.global_min_abs:.4g}, {rep.total_winding:.6g}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=Config.grid)
    ap.add_argument("--powers", type=int, nargs="+")
    args = ap.parse_args()
    cfg = Config(grid=args.grid)
    if args.powers:
        cfg.powers = args.powers
    main(cfg)
