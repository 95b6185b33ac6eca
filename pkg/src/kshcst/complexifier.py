"""Radial convex complexifiers h(Y) = p(|Y|^2) on the Cartan subalgebra.

Radial profiles are automatically Weyl invariant, so one implementation
serves every root system.  Everything is expressed through the profile p and
its derivatives in s = |Y|^2; in particular the gradient is u(Y) = g Y with
g = 2 p'(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

__all__ = [
    "Complexifier",
    "ConvexityCertificate",
    "quadratic",
    "quartic",
    "radial",
    "radial_polynomial",
    "parse_h",
    "eval_h",
    "eval_grad",
    "eval_hess",
    "det_hess_hdir",
    "det_hess_full",
    "log_det_hess_full",
    "legendre_exponent",
    "radial_derivatives",
    "validate_convexity",
]


@dataclass(frozen=True, eq=False)
class Complexifier:
    """h(Y) = p(|Y|^2) with profile derivatives supplied as callables.

    ``derivs[k]`` is the k-th derivative of p.  Orders 0-2 are required;
    orders 3-4 are only needed for the closed-form circle coefficient.
    ``convexity_bound`` is (c0, v0, c2) with h(Y) >= c0 + <v0, Y> + c2 |Y|^2.
    """

    family: str
    params: tuple
    derivs: tuple
    convexity_bound: tuple = (0.0, 0.0, 0.5)

    def p(self, s, k=0):
        if k >= len(self.derivs) or self.derivs[k] is None:
            raise ValueError(f"profile derivative of order {k} not available for {self.family}")
        return self.derivs[k](s)

    @property
    def c2(self) -> float:
        return float(self.convexity_bound[2])

    @property
    def spec(self) -> str:
        if self.family == "quadratic":
            return "quadratic"
        if self.family == "quartic":
            return f"quartic:{self.params[0]:g}"
        return "radial:" + ",".join(f"{c:g}" for c in self.params)

    def __repr__(self):
        return f"Complexifier({self.spec})"


def radial_polynomial(coeffs, family="radial", params=None, bound=(0.0, 0.0, 0.5)) -> Complexifier:
    """Profile p(s) = sum_i coeffs[i-1] s^i for i >= 1."""
    coeffs = tuple(float(c) for c in coeffs)
    poly = Polynomial((0.0,) + coeffs)
    derivs = tuple(poly.deriv(k) for k in range(5))
    return Complexifier(family, coeffs if params is None else params, derivs, tuple(bound))


def quadratic() -> Complexifier:
    return radial_polynomial([0.5], "quadratic", ())


def quartic(eps: float) -> Complexifier:
    if eps < 0:
        raise ValueError("quartic coefficient must be >= 0")
    return radial_polynomial([0.5, eps / 4.0], "quartic", (float(eps),))


def radial(p: Callable, dp: Callable, d2p: Callable, bound, d3p: Optional[Callable] = None,
           d4p: Optional[Callable] = None, name: str = "custom") -> Complexifier:
    """Custom radial profile; the caller owns the convexity bound (c0, v0, c2)."""
    return Complexifier(name, (), (p, dp, d2p, d3p, d4p), tuple(bound))


def parse_h(spec: str) -> Complexifier:
    """Parse ``quadratic | quartic:<eps> | radial:<c1,c2,...>``."""
    s = spec.strip().lower()
    if s == "quadratic":
        return quadratic()
    name, sep, arg = s.partition(":")
    if sep and name == "quartic":
        return quartic(float(arg))
    if sep and name == "radial":
        coeffs = [float(t) for t in arg.split(",") if t.strip()]
        if not coeffs:
            raise ValueError("radial profile needs at least one coefficient")
        # c2 from the declared linear coefficient; validate_convexity audits it
        return radial_polynomial(coeffs, bound=(0.0, 0.0, max(coeffs[0], 0.0)))
    raise ValueError(f"unknown complexifier {spec!r}")


def _batch(Y):
    Y = np.asarray(Y, dtype=float)
    single = Y.ndim == 1
    return np.atleast_2d(Y), single


def _sq(Y):
    return np.einsum("ni,ni->n", Y, Y)


def eval_h(c: Complexifier, Y):
    Y, single = _batch(Y)
    val = c.p(_sq(Y))
    return val[0] if single else val


def eval_grad(c: Complexifier, Y):
    Y, single = _batch(Y)
    u = 2.0 * c.p(_sq(Y), 1)[:, None] * Y
    return u[0] if single else u


def eval_hess(c: Complexifier, Y):
    Y, single = _batch(Y)
    s = _sq(Y)
    r = Y.shape[1]
    H = 2.0 * c.p(s, 1)[:, None, None] * np.eye(r) + 4.0 * c.p(s, 2)[:, None, None] * np.einsum(
        "ni,nj->nij", Y, Y)
    return H[0] if single else H


def det_hess_hdir(c: Complexifier, Y):
    """det of the Hessian restricted to the Cartan subalgebra, in closed form."""
    Y, single = _batch(Y)
    s = _sq(Y)
    g = 2.0 * c.p(s, 1)
    val = g ** (Y.shape[1] - 1) * (g + 4.0 * c.p(s, 2) * s)
    return val[0] if single else val


def det_hess_full(sys, c: Complexifier, X):
    """det of the Hessian on the whole Lie algebra: det_h H * g^(2|roots+|)."""
    return np.exp(log_det_hess_full(sys, c, X))


def log_det_hess_full(sys, c: Complexifier, X):
    X, single = _batch(X)
    g = 2.0 * c.p(_sq(X), 1)
    val = np.log(det_hess_hdir(c, X)) + 2 * sys.n_positive * np.log(g)
    return val[0] if single else val


def legendre_exponent(c: Complexifier, Y):
    """phi(Y) = <Y, u(Y)> - h(Y) = 2 s p'(s) - p(s)."""
    Y, single = _batch(Y)
    s = _sq(Y)
    val = 2.0 * s * c.p(s, 1) - c.p(s)
    return val[0] if single else val


def radial_derivatives(c: Complexifier, y: float) -> tuple:
    """(h, h', h'', h''', h'''') of the one-variable function y -> p(y^2)."""
    s = y * y
    p0, p1, p2 = c.p(s), c.p(s, 1), c.p(s, 2)
    p3, p4 = c.p(s, 3), c.p(s, 4)
    return (
        p0,
        2 * y * p1,
        2 * p1 + 4 * s * p2,
        12 * y * p2 + 8 * y * s * p3,
        12 * p2 + 48 * s * p3 + 16 * s * s * p4,
    )


@dataclass(frozen=True)
class ConvexityCertificate:
    min_eig: float
    passed: bool
    worst_point: Optional[np.ndarray] = None


def validate_convexity(c: Complexifier, radius: float, grid_points: int = 41,
                       dim: int = 2) -> ConvexityCertificate:
    """Minimum Hessian eigenvalue over a tensor grid clipped to the ball.

    The bound h >= c0 + <v0, Y> + c2 |Y|^2 is certified by Hessian >= 2 c2.

    ``dim`` >= 2 exposes both the radial and the tangential eigenvalue of a
    radial profile.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    axis = np.linspace(-radius, radius, grid_points)
    grid = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    grid = grid[_sq(grid) <= radius * radius * (1 + 1e-12)]
    grid = np.vstack([np.zeros(dim), grid])
    eigs = np.linalg.eigvalsh(eval_hess(c, grid)).min(axis=1)
    i = int(np.argmin(eigs))
    min_eig = float(eigs[i])
    passed = math.isfinite(min_eig) and min_eig >= 2.0 * c.c2 * (1 - 1e-6)
    return ConvexityCertificate(min_eig, passed, None if passed else grid[i])
