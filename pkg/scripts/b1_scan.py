#!/usr/bin/env python3
"""Fitted 1/tau2 coefficient of the circle-group norm defect against the two closed forms.

For each mode n and hbar the script fits a^2 exp(-2 tau2 h/hbar) - 1 over a
tau2 grid and compares with the 24-denominator closed form and the Laplace
coefficient hbar (5 h'''^2 - 3 h'' h'''') / (48 h''^3).
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from kshcst import complexifier as cx
from kshcst import core
from kshcst import rootsys as rs


@dataclass
class Config:
    h: str = "quartic:0.1"
    modes: tuple = (0, 1, 2, 3)
    hbars: tuple = (1.0, 0.5)
    tau2_grid: tuple = core.DEFAULT_TAU2_GRID


def scan(cfg: Config):
    s1, c = rs.torus(1), cx.parse_h(cfg.h)
    for hbar in cfg.hbars:
        for n in cfg.modes:
            fit = core.fit_b1(s1, c, n, hbar, cfg.tau2_grid)
            closed = core.b1_circle_closed(c, n, hbar)
            laplace = core.b1_circle_laplace(c, n, hbar)
            yield {"n": n, "hbar": hbar, "b1_fit": fit.b1_estimate, "b1_closed": closed,
                   "b1_laplace": laplace, "fit_over_closed": fit.b1_estimate / closed,
                   "fit_over_laplace": fit.b1_estimate / laplace}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", default=Config.h)
    ap.add_argument("--modes", default="0,1,2,3")
    ap.add_argument("--hbar", default="1,0.5")
    args = ap.parse_args()
    cfg = Config(args.h, tuple(int(x) for x in args.modes.split(",")),
                 tuple(float(x) for x in args.hbar.split(",")))
    w = None
    for row in scan(cfg):
        if w is None:
            w = csv.DictWriter(sys.stdout, fieldnames=list(row), lineterminator="\n")
            w.writeheader()
        w.writerow({k: format(v, ".10g") for k, v in row.items()})


if __name__ == "__main__":
    main()
