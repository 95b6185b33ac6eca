"""Structural self-checks run by ``kshcst validate``.

Each check returns a :class:`Check` row; nothing here raises on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kshcst import complexifier as cx
from kshcst import core
from kshcst import rootsys as rs
from kshcst.errors import KSHError


@dataclass(frozen=True)
class Check:
    suite: str
    value: float
    tolerance: float
    passed: bool

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "passed", bool(self.passed))


def weyl_alternating_identity(sys, rng, samples=100) -> Check:
    """sum_w (-1)^w P(wX) = |W| P(X), worst relative violation."""
    worst = 0.0
    for X in rng.normal(size=(samples, sys.rank)):
        P = rs.vandermonde_P(sys, X)
        alt = sum(s * rs.vandermonde_P(sys, v) for v, s in rs.weyl_orbit(sys, X))
        worst = max(worst, abs(alt - sys.weyl_order * P) / (sys.weyl_order * max(abs(P), 1e-300)))
    return Check("weyl_alternating_identity", worst, 1e-9, worst <= 1e-9)


def character_dimension_limit(sys, cutoff=2, directions=10, rng=None) -> Check:
    """chi_lambda(exp(2i t d)) -> d_lambda as t -> 0 along random regular directions."""
    rng = rng or np.random.default_rng(0)
    worst = 0.0
    for lam in rs.enumerate_dominant(sys, cutoff):
        d = rs.dim_irrep(sys, lam)
        for v in rng.normal(size=(directions, sys.rank)):
            v /= np.linalg.norm(v)
            vals = [float(rs.char_imag_exp(sys, lam, t * v)) for t in (1e-2, 1e-4, 1e-6, 1e-8)]
            worst = max(worst, abs(vals[-1] - d) / d)
    return Check("character_dimension_limit", worst, 1e-6, worst <= 1e-6)


def gradient_consistency(c, dim, rng, samples=100) -> Check:
    """Central differences of h against u, and of u against H."""
    worst = 0.0
    for Y in rng.normal(scale=1.5, size=(samples, dim)):
        step = 1e-5 * max(1.0, float(np.linalg.norm(Y)))
        E = np.eye(dim) * step
        fd_grad = np.array([(cx.eval_h(c, Y + e) - cx.eval_h(c, Y - e)) / (2 * step) for e in E])
        fd_hess = np.array([(cx.eval_grad(c, Y + e) - cx.eval_grad(c, Y - e)) / (2 * step) for e in E])
        g, H = cx.eval_grad(c, Y), cx.eval_hess(c, Y)
        worst = max(worst,
                    np.linalg.norm(fd_grad - g) / max(np.linalg.norm(g), 1.0),
                    np.linalg.norm(fd_hess - H) / max(np.linalg.norm(H), 1.0))
    return Check("gradient_hessian_fd", float(worst), 1e-6, worst <= 1e-6)


def _eta_direct(sys, Y):
    return float(np.prod([math.sinh(b) / b if b != 0 else 1.0 for b in sys.positive_roots @ Y]))


def eta_wall_limit(sys) -> Check:
    """eta is 1 on the walls and matches the direct product on both sides of the series cutoff."""
    worst = abs(float(rs.eta(sys, np.zeros(sys.rank))) - 1.0)
    for alpha in sys.positive_roots:
        for a in (0.0, rs.WALL_THRESHOLD * (1 - 1e-9), rs.WALL_THRESHOLD * (1 + 1e-9), 0.5):
            Y = a * alpha / (alpha @ alpha)
            worst = max(worst, abs(float(rs.eta(sys, Y)) / _eta_direct(sys, Y) - 1.0))
    return Check("eta_wall_limit", worst, 1e-12, worst <= 1e-12)


def weyl_invariance(sys, c, rng, samples=20) -> Check:
    """h, eta and P^2 are unchanged by every Weyl image."""
    worst = 0.0
    for Y in rng.normal(size=(samples, sys.rank)):
        h0, e0, p0 = cx.eval_h(c, Y), rs.eta(sys, Y), rs.vandermonde_P(sys, Y) ** 2
        for v, _ in rs.weyl_orbit(sys, Y):
            worst = max(worst, abs(cx.eval_h(c, v) - h0) / max(abs(h0), 1.0),
                        abs(rs.eta(sys, v) - e0) / e0,
                        abs(rs.vandermonde_P(sys, v) ** 2 - p0) / max(p0, 1.0))
    return Check("weyl_invariance", float(worst), 1e-12, worst <= 1e-12)


def convexity(c, radius=5.0) -> Check:
    cert = cx.validate_convexity(c, radius)
    return Check("convexity_certificate", cert.min_eig, 2.0 * c.c2, cert.passed)


def tau1_independence(sys, c, lam=None, tau2=1.0, hbar=1.0) -> Check:
    lam = lam if lam is not None else rs.enumerate_dominant(sys, 0)[0]
    try:
        vals = [core.a_lambda(sys, c, lam, core.QuantParams(t1, tau2, hbar)).log_a2_shifted
                for t1 in (0.0, 1.0, -3.0)]
    except KSHError:
        return Check("tau1_independence", math.nan, 0.0, False)
    spread = max(vals) - min(vals)
    return Check("tau1_independence", spread, 0.0, spread == 0.0)


def run_all(sys, c, seed=0) -> list:
    rng = np.random.default_rng(seed)
    return [
        weyl_alternating_identity(sys, rng),
        character_dimension_limit(sys, rng=rng),
        gradient_consistency(c, max(sys.rank, 2), rng),
        eta_wall_limit(sys),
        weyl_invariance(sys, c, rng),
        convexity(c),
        tau1_independence(sys, c),
    ]
