#!/usr/bin/env python3
"""Star, constant and growth defects of the truncated circle model over a tau2 sweep."""

import argparse
from dataclasses import dataclass

import numpy as np

from kshcst import complexifier as cx
from kshcst import core, opsim
from kshcst import rootsys as rs


@dataclass
class Config:
    h: str = "quartic:0.1"
    N: int = 16
    modes: tuple = (1, 2, 4)
    tau2_grid: tuple = (0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0)
    hbar: float = 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", default=Config.h)
    ap.add_argument("-N", type=int, default=Config.N)
    ap.add_argument("--hbar", type=float, default=Config.hbar)
    args = ap.parse_args()
    cfg = Config(args.h, args.N, hbar=args.hbar)
    space = opsim.TruncatedHilbert(cfg.N)
    s1, c = rs.torus(1), cx.parse_h(cfg.h)
    print("tau2," + ",".join(f"star_m{m}" for m in cfg.modes) + ",const_defect,growth_defect,tau2_x_growth")
    for tau2 in cfg.tau2_grid:
        coeffs = opsim.ksh_coefficients(space, s1, c, core.QuantParams(0.0, tau2, cfg.hbar))
        inner = coeffs[space.interior]
        star = [opsim.star_defect(space, m, coeffs) for m in cfg.modes]
        const = np.abs(inner - coeffs[cfg.N]).max()
        growth = np.abs(inner - 1).max()
        print(f"{tau2:g}," + ",".join(f"{s:.6e}" for s in star)
              + f",{const:.6e},{growth:.6e},{tau2 * growth:.6e}")


if __name__ == "__main__":
    main()
