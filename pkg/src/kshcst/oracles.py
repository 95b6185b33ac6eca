"""Independent reference evaluations used to cross-check the main quadrature.

These deliberately share no integration code with :mod:`kshcst.core`: they
use adaptive scipy quadrature, closed-form rank-one characters and the full
Hessian on the Lie algebra.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad


__all__ = ["su2_spherical_a2_shifted", "circle_a2_shifted"]


def _log_sinh(x):
    x = abs(x)
    if x < 1e-8:
        return math.log(x) if x > 0 else -math.inf
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2.0)


def su2_spherical_a2_shifted(c, k: int, tau2: float, hbar: float) -> float:
    """a_k^2 exp(-2 tau2 h_k/hbar) for SU(2), integrating over su(2) = R^3 in spherical shells.

    Ad-invariance reduces the integral over the Lie algebra to 4 pi s^2 ds.
    For |Y| = s the root pairing is alpha(Y) = sqrt(2) s, and the product of
    the character at exp(2i tau2 u) with eta(tau2 u) is sinh((k+1)a)/a with
    a = tau2 alpha(u(Y)).
    """
    scale = 2.0 * tau2 / hbar
    mu = (k + 1) / math.sqrt(2.0)
    h_k = float(c.p(hbar**2 * mu**2))

    def log_f(s):
        s2 = s * s
        g = 2.0 * c.p(s2, 1)
        a = tau2 * math.sqrt(2.0) * g * s
        phi = 2.0 * s2 * c.p(s2, 1) - c.p(s2)
        H = 2.0 * c.p(s2, 1) * np.eye(3) + 4.0 * c.p(s2, 2) * np.outer([s, 0, 0], [s, 0, 0])
        if a < 1e-6:
            log_ce = math.log(k + 1)
        else:
            log_ce = _log_sinh((k + 1) * a) - math.log(a)
        return (2 * math.log(s) + log_ce - scale * (phi + h_k)
                + 0.5 * math.log(np.linalg.det(H)))

    def f(s):
        return math.exp(log_f(s)) if s > 0 else 0.0

    peak = hbar * mu
    width = 1.0 / math.sqrt(scale * c.c2)
    upper = peak + 12.0 * width
    pts = [x for x in (peak - width, peak, peak + width) if 0 < x < upper]
    val, _ = quad(f, 0.0, upper, points=pts, epsabs=0.0, epsrel=1e-13, limit=400)
    pref = (tau2 / (math.pi * hbar)) ** 1.5 * 4.0 * math.pi / (k + 1)
    return pref * val


def circle_a2_shifted(c, n: int, tau2: float, hbar: float) -> float:
    """a_n^2 exp(-2 tau2 h_n/hbar) for the circle, by adaptive quadrature in one variable."""
    y0 = -hbar * n
    h0 = float(c.p(y0 * y0))
    scale = 2.0 * tau2 / hbar

    def f(y):
        s = y * y
        hp = 2.0 * y * c.p(s, 1)
        hpp = 2.0 * c.p(s, 1) + 4.0 * s * c.p(s, 2)
        return math.exp(-scale * ((y - y0) * hp - c.p(s) + h0)) * math.sqrt(hpp)

    width = 1.0 / math.sqrt(scale * c.c2)
    val, _ = quad(f, y0 - 12 * width, y0 + 12 * width, points=[y0], epsabs=0.0,
                  epsrel=1e-13, limit=400)
    return math.sqrt(tau2 / (math.pi * hbar)) * val

