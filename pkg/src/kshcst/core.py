"""Normalization constants of the KSH coherent-state transform.

The central object is the shifted square norm

    a_lambda(hbar, tau2)^2 * exp(-2 tau2 h_lambda / hbar),   h_lambda = h(-hbar (lambda + rho)),

which equals 1 for every lambda exactly when the transform is unitary.  It is
computed from the integral over the Cartan subalgebra

    (2 tau2)^(r/2) / (2 pi hbar)^(n/2) / (|W| vol T d_lambda) * (-1)^|roots+|
      * int sum_w (-1)^w exp(-(2 tau2/hbar)(phi(X) + hbar w(lambda+rho)(u(X)) + h_lambda))
            * sqrt(det H(X)) P(X)^2 / P(u(X)) dX

with phi the Legendre exponent and u the gradient of h.  The sign
(-1)^|roots+| comes from the sinh denominator of the Weyl character at an
imaginary argument.  All quantities stay in the log domain; a_lambda itself is
never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from kshcst import complexifier as cx
from kshcst import rootsys as rs
from kshcst.errors import ConvexityError, FitError, NumericRangeError
from kshcst.quadrature import QuadratureSpec, auto_truncation, integrate_refined

__all__ = [
    "QuantParams",
    "NormResult",
    "AsymptoticFit",
    "ContractionReport",
    "q_spectrum",
    "a_lambda",
    "a_lambda_single_saddle",
    "unitarity_defect",
    "fit_b1",
    "b1_circle_closed",
    "b1_circle_laplace",
    "i_lambda",
    "semiclassical_scan",
    "kahler_potential",
    "bks_density",
    "contraction_check",
    "DEFAULT_TAU2_GRID",
]

DEFAULT_TAU2_GRID = (5.0, 10.0, 20.0, 40.0, 80.0)
TRUNCATION_TOL = 1e-16
TARGET_REL_TOL = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuantParams:
    tau1: float = 0.0
    tau2: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.tau2 > 0:
            raise ValueError(f"tau2 must be positive, got {self.tau2}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class NormResult:
    lam: rs.DominantWeight
    h_lambda: float
    log_a2_shifted: float
    defect: float
    quad_err: float
    points_per_axis: int = 0

    @property
    def a2_shifted(self) -> float:
        return math.exp(self.log_a2_shifted)


@dataclass(frozen=True)
class AsymptoticFit:
    b1_estimate: float
    residual: float
    tau2_grid: tuple
    b2_estimate: float = float("nan")


@dataclass(frozen=True)
class ContractionReport:
    sup_norm: float
    passed: bool


def q_spectrum(sys, c, lam, hbar: float) -> float:
    """Eigenvalue h(-hbar(lambda+rho)) of the momentum-space quantization of h."""
    lam = rs.as_weight(sys, lam)
    return float(cx.eval_h(c, -hbar * (lam.vector + sys.weyl_vector)))


def _check_convex(c, radius):
    cert = cx.validate_convexity(c, max(radius, 1.0), grid_points=21)
    if not cert.passed:
        raise ConvexityError(
            f"{c!r} fails convexity: min Hessian eigenvalue {cert.min_eig:.3g} at {cert.worst_point}")


def _box(sys, c, center_weight, scale, tol, target, inflate=True):
    """Truncation box around -center_weight, widened to cover its Weyl orbit."""
    spec = auto_truncation(c, scale, np.zeros(sys.rank), tol, center=-center_weight,
                           target_rel_tol=target)
    diam = 0.0
    if inflate:
        orbit = sys.weyl_matrices @ center_weight
        diam = float(np.linalg.norm(orbit - center_weight, axis=1).max())
    R = spec.truncation_radius + diam
    # start with enough nodes to resolve the narrowest Gaussian in the box
    H = cx.eval_hess(c, -center_weight)
    sd = 1.0 / math.sqrt(scale * float(np.linalg.eigvalsh(H).max()))
    n = 16
    while n < 2.0 * R / sd and n < 256:
        n *= 2
    return replace(spec, truncation_radius=R, points_per_axis=n)


def _log_prefactor(sys, c, X):
    """log|sqrt(det_k H) P(X)^2 / P(u(X))| and its sign, via P(u) = g^k P(X)."""
    k = sys.n_positive
    P = rs.vandermonde_P(sys, X)
    g = 2.0 * c.p(np.einsum("ni,ni->n", X, X), 1)
    with np.errstate(divide="ignore"):
        logp = 0.5 * cx.log_det_hess_full(sys, c, X) + np.log(np.abs(P)) - k * np.log(g)
    return logp, np.sign(P)


def _finish(sys, lam, h_lam, log_const, res, scale, spec_floor):
    if res.sign <= 0:
        raise NumericRangeError(
            f"non-positive a_lambda^2 quadrature for lambda={lam} (sign {res.sign})")
    log_a2 = log_const + res.log_value
    floor = spec_floor * _EPS * (1.0 + scale * abs(h_lam))
    return NormResult(lam, h_lam, log_a2, math.expm1(0.5 * log_a2),
                      max(res.rel_err_estimate, floor), res.points_per_axis)


def _norm_constant(sys, lam, p):
    r, n = sys.rank, sys.group_dim
    return (0.5 * r * math.log(2 * p.tau2) - 0.5 * n * math.log(2 * math.pi * p.hbar)
            - math.log(sys.weyl_order) - math.log(rs.torus_volume(sys))
            - math.log(rs.dim_irrep(sys, lam)))


def a_lambda(sys, c, lam, p: QuantParams, spec: Optional[QuadratureSpec] = None,
             tol: float = TRUNCATION_TOL, target_rel_tol: float = TARGET_REL_TOL,
             check_convexity: bool = True) -> NormResult:
    """Shifted square norm a_lambda^2 exp(-2 tau2 h_lambda / hbar).

    The Weyl sum is done per node as a signed log-sum-exp.  ``spec`` fixes
    the box and starting grid; by default the box is centered at the
    dominant saddle -hbar(lambda+rho) and widened by the orbit diameter.
    """
    lam = rs.as_weight(sys, lam)
    mu = lam.vector + sys.weyl_vector
    scale = 2.0 * p.tau2 / p.hbar
    h_lam = q_spectrum(sys, c, lam, p.hbar)
    if check_convexity:
        _check_convex(c, p.hbar * np.linalg.norm(mu))
    if spec is None:
        spec = _box(sys, c, p.hbar * mu, scale, tol, target_rel_tol)
    orbit = sys.weyl_matrices @ mu
    signs = sys.weyl_signs
    parity = (-1) ** sys.n_positive

    def f_log(X):
        u = cx.eval_grad(c, X)
        base = -scale * (cx.legendre_exponent(c, X) + h_lam)
        expo = base[:, None] - 2.0 * p.tau2 * (u @ orbit.T)
        with np.errstate(divide="ignore"):
            lse, sgn = logsumexp(expo, axis=1, b=np.broadcast_to(signs, expo.shape),
                                 return_sign=True)
        logp, sp = _log_prefactor(sys, c, X)
        return lse + logp, parity * sgn * sp

    res = integrate_refined(f_log, sys.rank, spec)
    return _finish(sys, lam, h_lam, _norm_constant(sys, lam, p), res, scale, 64)


def a_lambda_single_saddle(sys, c, lam, p: QuantParams, tol: float = TRUNCATION_TOL,
                           target_rel_tol: float = TARGET_REL_TOL) -> NormResult:
    """Same quantity with the Weyl sum folded into one saddle at -hbar(lambda+rho).

    Each Weyl term integrates to the same value after the change of variables
    X -> wX, so the sum is |W| times the identity term.
    """
    lam = rs.as_weight(sys, lam)
    mu = lam.vector + sys.weyl_vector
    scale = 2.0 * p.tau2 / p.hbar
    h_lam = q_spectrum(sys, c, lam, p.hbar)
    spec = _box(sys, c, p.hbar * mu, scale, tol, target_rel_tol, inflate=False)
    parity = (-1) ** sys.n_positive

    def f_log(X):
        u = cx.eval_grad(c, X)
        expo = -scale * (cx.legendre_exponent(c, X) + h_lam) - 2.0 * p.tau2 * (u @ mu)
        logp, sp = _log_prefactor(sys, c, X)
        return expo + logp, parity * sp

    res = integrate_refined(f_log, sys.rank, spec)
    const = _norm_constant(sys, lam, p) + math.log(sys.weyl_order)
    return _finish(sys, lam, h_lam, const, res, scale, 64)


def unitarity_defect(result: NormResult) -> float:
    """a_lambda exp(-tau2 h_lambda/hbar) - 1; zero iff the growth condition holds."""
    return result.defect


def i_lambda(sys, c, lam, hbar: float, b: float, tau2: float,
             spec: Optional[QuadratureSpec] = None, tol: float = TRUNCATION_TOL,
             target_rel_tol: float = TARGET_REL_TOL, with_error: bool = False):
    """log of the deformed integral I_lambda(hbar, b, tau2), shifted by 2 tau2 h(-b(lambda+rho))/hbar.

    The character argument is exp(2i (b tau2/hbar) u); the half-form density
    uses eta(tau2 u(Y)).  At b = hbar this is log a_lambda^2 shifted.
    """
    if b < 0:
        raise ValueError("b must be >= 0")
    lam = rs.as_weight(sys, lam)
    p = QuantParams(0.0, tau2, hbar)
    mu = lam.vector + sys.weyl_vector
    scale = 2.0 * tau2 / hbar
    h_shift = float(cx.eval_h(c, -b * mu))
    if spec is None:
        spec = _box(sys, c, b * mu, scale, tol, target_rel_tol)

    def f_log(X):
        u = cx.eval_grad(c, X)
        P = rs.vandermonde_P(sys, X)
        with np.errstate(divide="ignore"):
            val = (rs.log_char_imag_exp(sys, lam, (b * tau2 / hbar) * u)
                   + rs.log_eta(sys, tau2 * u)
                   - scale * (cx.legendre_exponent(c, X) + h_shift)
                   + 0.5 * cx.log_det_hess_full(sys, c, X)
                   + 2.0 * np.log(np.abs(P)))
        return val, np.ones(len(X))

    res = integrate_refined(f_log, sys.rank, spec)
    n = sys.group_dim
    const = (0.5 * n * math.log(tau2 / (math.pi * hbar)) - math.log(rs.dim_irrep(sys, lam))
             - math.log(sys.weyl_order) - math.log(rs.torus_volume(sys)))
    if res.sign <= 0:
        raise NumericRangeError(f"non-positive I_lambda quadrature for lambda={lam}")
    out = const + res.log_value
    return (out, res.rel_err_estimate) if with_error else out


def fit_b1(sys, c, lam, hbar: float, tau2_grid: Sequence[float] = DEFAULT_TAU2_GRID,
           max_defect: float = 0.2) -> AsymptoticFit:
    """Least-squares fit of a^2 exp(-2 tau2 h/hbar) - 1 against b1/tau2 + b2/tau2^2."""
    grid = tuple(float(t) for t in tau2_grid)
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau2 grid must be strictly increasing with at least 4 points")
    y = []
    for t in grid:
        res = a_lambda(sys, c, lam, QuantParams(0.0, t, hbar))
        if abs(res.defect) >= max_defect:
            raise ValueError(f"tau2={t} not asymptotic: |defect|={abs(res.defect):.3g}")
        y.append(math.expm1(res.log_a2_shifted))
    tau = np.array(grid)
    A = np.column_stack([1.0 / tau, 1.0 / tau**2])
    cond = np.linalg.cond(A)
    if cond > 1e8:
        raise FitError(f"design matrix condition number {cond:.3g} exceeds 1e8")
    coef, *_ = np.linalg.lstsq(A, np.array(y), rcond=None)
    resid = float(np.linalg.norm(A @ coef - y))
    return AsymptoticFit(float(coef[0]), resid, grid, float(coef[1]))


def _circle_derivs(sys, c, n, hbar):
    if sys is not None and not (sys.is_torus and sys.rank == 1):
        raise ValueError("closed-form b1 only exists for the circle group")
    if isinstance(n, rs.DominantWeight):
        n = n.coords[0]
    return cx.radial_derivatives(c, -hbar * n)


def b1_circle_closed(c, n: int, hbar: float, sys=None) -> float:
    """(5 h'''^2 - 3 h'' h'''') / (24 h''^3) at -hbar n, the reference closed form for the circle."""
    _, _, h2, h3, h4 = _circle_derivs(sys, c, n, hbar)
    return float((5 * h3**2 - 3 * h2 * h4) / (24 * h2**3))


def b1_circle_laplace(c, n: int, hbar: float, sys=None) -> float:
    """First Laplace coefficient of the circle-group a_n^2 in powers of 1/tau2.

    Expanding the one-dimensional integral about y = -hbar n with large
    parameter tau2 gives hbar (5 h'''^2 - 3 h'' h'''') / (48 h''^3).
    """
    _, _, h2, h3, h4 = _circle_derivs(sys, c, n, hbar)
    return float(hbar * (5 * h3**2 - 3 * h2 * h4) / (48 * h2**3))


def semiclassical_scan(sys, c, lam, tau2: float, hbar_grid: Sequence[float]) -> list:
    """Shifted ratios a^2 exp(-2 tau2 h_lambda/hbar) along a decreasing hbar grid."""
    grid = [float(h) for h in hbar_grid]
    if not grid or any(h <= 0 for h in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("hbar grid must be positive and strictly decreasing")
    return [a_lambda(sys, c, lam, QuantParams(0.0, tau2, h)).a2_shifted for h in grid]


def kahler_potential(c, Y, tau2: float):
    return 2.0 * tau2 * cx.legendre_exponent(c, Y)


def bks_density(sys, c, Y, p: QuantParams):
    """Squared norm of the half-form: (tau2 hbar)^(n/2) eta(tau2 u) sqrt(det H)."""
    u = cx.eval_grad(c, Y)
    logv = (0.5 * sys.group_dim * math.log(p.tau2 * p.hbar) + rs.log_eta(sys, p.tau2 * u)
            + 0.5 * cx.log_det_hess_full(sys, c, Y))
    return np.exp(logv)


def contraction_check(sys, c, hbar: float, tau2: float, cutoff: int) -> ContractionReport:
    """sup of exp(-tau2 h_lambda/hbar) over weights up to ``cutoff`` and a decay test.

    Weights are ordered by |lambda+rho|; the largest value in the outer decile
    must be strictly below the smallest value in the inner decile.
    """
    weights = rs.enumerate_dominant(sys, cutoff)
    rho = sys.weyl_vector
    weights.sort(key=lambda w: float(np.linalg.norm(w.vector + rho)))
    with np.errstate(over="ignore"):
        vals = np.array([math.exp(min(-tau2 * q_spectrum(sys, c, w, hbar) / hbar, 709.0))
                         for w in weights])
    sup = float(vals.max())
    k = max(1, math.ceil(len(vals) / 10))
    decays = len(vals) > k and vals[-k:].max() < vals[:k].min()
    return ContractionReport(sup, bool(np.isfinite(sup) and sup < math.exp(709.0) and decays))
