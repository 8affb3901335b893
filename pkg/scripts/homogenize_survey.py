"""Random words through the homogenization pipeline: sizes and property checks."""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass

from pfiber import braidword as bw


@dataclass
class Config:
    count: int = 200
    max_n: int = 6
    max_len: int = 16
    seed: int = 0


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    failures = 0
    growth = []
    for _ in range(cfg.count):
        n = rng.randint(2, cfg.max_n)
        w = bw.random_word(rng, n, rng.randint(0, cfg.max_len))
        h = bw.homogenize(w)
        sq = bw.power(h, 2)
        ok = (bw.is_alternating(h)
              and bw.forget_strands(sq, range(n + 1, 2 * n + 1)) == w
              and bw.forget_strands(sq, range(1, n + 1)) == w)
        failures += not ok
        if len(w):
            growth.append(len(h) / len(w))
    print(f"{cfg.count} words, {failures} failures")
    if growth:
        print(f"length ratio |B''| / |B|: mean {sum(growth) / len(growth):.2f}, max {max(growth):.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    main(Config(count=args.count, seed=args.seed))
