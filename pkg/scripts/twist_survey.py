"""Full twists on the library braids: minimal |dphi/dt| per twist count and the word-level bound."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from pfiber import braidword as bw
from pfiber.curves import LIBRARY_NAMES, library, twist
from pfiber.fibercheck import check, word_twist_plan
from pfiber.wordextract import extract_word


@dataclass
class Config:
    k_min: int = -3
    k_max: int = 3
    grid: int = 2048


def main(cfg: Config) -> None:
    print("braid, k, verdict, branch minima, branch maxima")
    for name in LIBRARY_NAMES:
        b = library(name)
        w = extract_word(b)
        plan = word_twist_plan(w)
        print(f"# {name}: word {w}, k+={plan.k_plus}, k-={plan.k_minus}, "
              f"twist bounds {bw.twist_bound(w)}, lower bound {plan.lower_bound:.4f}")
        for k in range(cfg.k_min, cfg.k_max + 1):
            rep = check(twist(b, k), cfg.grid)
            mins = " ".join(f"{br.min:.3f}" for br in rep.branches)
            maxs = " ".join(f"{br.max:.3f}" for br in rep.branches)
            print(f"{name}, {k}, {rep.verdict}, {mins}, {maxs}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmin", type=int, default=Config.k_min)
    ap.add_argument("--kmax", type=int, default=Config.k_max)
    args = ap.parse_args()
    main(Config(args.kmin, args.kmax))
