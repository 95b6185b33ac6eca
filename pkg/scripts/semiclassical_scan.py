#!/usr/bin/env python3
"""Shifted norm ratio as hbar -> 0 for several weights, with the empirical decay rate."""

import argparse
import math
from dataclasses import dataclass

from kshcst import complexifier as cx
from kshcst import core
from kshcst import rootsys as rs


@dataclass
class Config:
    group: str = "s1"
    h: str = "quartic:0.1"
    tau2: float = 1.0
    lambda_max: int = 2
    hbars: tuple = (1.0, 0.5, 0.25, 0.125, 0.0625)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default=Config.group)
    ap.add_argument("--h", default=Config.h)
    ap.add_argument("--tau2", type=float, default=Config.tau2)
    ap.add_argument("--lambda-max", type=int, default=Config.lambda_max)
    args = ap.parse_args()
    cfg = Config(args.group, args.h, args.tau2, args.lambda_max)
    sys_, c = rs.parse_group(cfg.group), cx.parse_h(cfg.h)
    print("lambda,hbar,ratio,abs_gap,log2_rate")
    for lam in rs.enumerate_dominant(sys_, cfg.lambda_max):
        ratios = core.semiclassical_scan(sys_, c, lam, cfg.tau2, cfg.hbars)
        gaps = [abs(r - 1) for r in ratios]
        for i, (hbar, ratio, g) in enumerate(zip(cfg.hbars, ratios, gaps)):
            # order p of |ratio - 1| ~ hbar^p from successive halvings
            rate = math.log2(gaps[i - 1] / g) if i and g > 0 else float("nan")
            print(f"{lam},{hbar:g},{ratio:.12g},{g:.6e},{rate:.4f}")


if __name__ == "__main__":
    main()
