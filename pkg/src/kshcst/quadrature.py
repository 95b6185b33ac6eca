"""Tensor Gauss-Legendre quadrature on a box, evaluated in the log domain.

Integrands are passed as vectorized callables ``f_log(nodes) -> (log_abs, sign)``
with ``nodes`` of shape ``(N, r)``.  A ``log_abs`` of ``-inf`` is a legitimate
zero; NaN or ``+inf`` aborts with :class:`QuadratureError`.

Summation subtracts the largest node exponent and adds the rescaled terms
with ``math.fsum`` in node order, so the result for a fixed spec is
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from kshcst.errors import QuadratureError

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "integrate_logdomain",
    "integrate_refined",
    "auto_truncation",
    "MAX_POINTS",
]

MAX_DIM = 4
# per-dimension cap on points_per_axis reached by refinement
MAX_POINTS = {1: 4096, 2: 512, 3: 96, 4: 40}


@dataclass(frozen=True)
class QuadratureSpec:
    points_per_axis: int
    truncation_radius: float
    center: tuple
    target_rel_tol: float = 1e-9

    def __post_init__(self):
        if self.points_per_axis < 8 or self.points_per_axis % 2:
            raise ValueError(f"points_per_axis must be even and >= 8, got {self.points_per_axis}")
        if not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        object.__setattr__(self, "center", tuple(float(x) for x in np.atleast_1d(self.center)))

    @property
    def dim(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class QuadResult:
    log_value: float
    sign: int
    rel_err_estimate: float
    points_per_axis: int

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_value)


@lru_cache(maxsize=64)
def _leggauss(n):
    x, w = roots_legendre(n)
    return x, np.log(w)


def _grid(spec, n):
    x, logw = _leggauss(n)
    r = spec.dim
    R = spec.truncation_radius
    axes = np.meshgrid(*([x] * r), indexing="ij")
    nodes = np.stack([a.ravel() for a in axes], axis=-1) * R + np.asarray(spec.center)
    wgrid = np.meshgrid(*([logw] * r), indexing="ij")
    log_w = sum(w.ravel() for w in wgrid) + r * math.log(R)
    return nodes, log_w


def _signed_logsum(log_terms, signs):
    keep = signs != 0
    log_terms, signs = log_terms[keep], signs[keep]
    if log_terms.size == 0 or not np.isfinite(log_terms).any():
        return -math.inf, 0
    m = float(log_terms.max())
    total = math.fsum((signs * np.exp(log_terms - m)).tolist())
    if total == 0.0:
        return -math.inf, 0
    return m + math.log(abs(total)), 1 if total > 0 else -1


def _single(f_log, spec, n):
    nodes, log_w = _grid(spec, n)
    log_abs, sign = f_log(nodes)
    log_abs = np.asarray(log_abs, dtype=float)
    sign = np.asarray(sign, dtype=float)
    bad = np.isnan(log_abs) | (log_abs == math.inf) | np.isnan(sign)
    if bad.any():
        i = int(np.argmax(bad))
        raise QuadratureError(f"non-finite integrand {log_abs[i]} at node {nodes[i].tolist()}",
                              node=nodes[i])
    zero = log_abs == -math.inf
    sign = np.where(zero, 0.0, np.sign(sign))
    return _signed_logsum(np.where(zero, 0.0, log_abs) + log_w, sign)


def _rel_gap(a, b):
    (la, sa), (lb, sb) = a, b
    if sa == 0 and sb == 0:
        return 0.0
    if sa != sb:
        return math.inf
    return abs(math.expm1(la - lb))


def integrate_logdomain(f_log, r: int, spec: QuadratureSpec) -> QuadResult:
    """Integrate over the box; error estimate from the half-size grid."""
    if r != spec.dim:
        raise ValueError(f"dimension {r} does not match spec center of length {spec.dim}")
    if r > MAX_DIM:
        raise ValueError(f"quadrature limited to r <= {MAX_DIM}")
    fine = _single(f_log, spec, spec.points_per_axis)
    coarse = _single(f_log, spec, spec.points_per_axis // 2)
    return QuadResult(fine[0], fine[1], _rel_gap(fine, coarse), spec.points_per_axis)


def integrate_refined(f_log, r: int, spec: QuadratureSpec, max_points: int | None = None) -> QuadResult:
    """Double points_per_axis until the halving estimate meets spec.target_rel_tol.

    Returns the last result even if the cap is reached; the caller sees the
    unmet tolerance in ``rel_err_estimate``.
    """
    if r > MAX_DIM:
        raise ValueError(f"quadrature limited to r <= {MAX_DIM}")
    cap = max_points or MAX_POINTS[r]
    n = spec.points_per_axis
    prev = _single(f_log, spec, n // 2)
    while True:
        cur = _single(f_log, replace(spec, points_per_axis=n), n)
        err = _rel_gap(cur, prev)
        if err < spec.target_rel_tol or 2 * n > cap:
            return QuadResult(cur[0], cur[1], err, n)
        prev, n = cur, 2 * n


def auto_truncation(c, scale: float, linear_shift, tol: float, center=None,
                    points_per_axis: int = 32, target_rel_tol: float = 1e-9) -> QuadratureSpec:
    """Box radius R with exp(-scale*c2*R^2 + |shift|*R) <= tol.

    ``c`` supplies the quadratic lower bound c2 on the Legendre exponent;
    ``scale`` is 2*tau2/hbar.
    """
    if not 0 < tol < 1:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    if scale <= 0:
        raise ValueError("scale must be positive")
    shift = np.atleast_1d(np.asarray(linear_shift, dtype=float))
    a = scale * c.c2
    b = float(np.linalg.norm(shift))
    L = -math.log(tol)
    R = (b + math.sqrt(b * b + 4.0 * a * L)) / (2.0 * a)
    if center is None:
        center = np.zeros(len(shift))
    return QuadratureSpec(points_per_axis, R, tuple(np.atleast_1d(center)), target_rel_tol)
