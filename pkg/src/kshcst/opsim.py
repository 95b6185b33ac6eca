"""Truncated Peter-Weyl model of the circle group.

Modes n = -N..N label both the Schrodinger basis and its image under the
intertwiner U, so U is the identity and the KSH map is the positive diagonal
operator diag(c_n) with c_n = a_n exp(-tau2 h_n/hbar).  Multiplication by the
mode-m character becomes the shift n -> n+m, and its conjugate by the KSH map
has entries c_{n+m}/c_n.  All defect norms are taken on the interior block
|n| <= N/2, which keeps truncation edges out of the measurement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kshcst import core

__all__ = [
    "TruncatedHilbert",
    "ksh_coefficients",
    "nu_matrix",
    "translation_operator",
    "star_defect",
    "covariance_defect",
    "u_unitarity",
    "multiplicativity_defect",
]


@dataclass(frozen=True)
class TruncatedHilbert:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def labels(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @property
    def interior(self) -> np.ndarray:
        return np.abs(self.labels) <= self.N // 2


def ksh_coefficients(space: TruncatedHilbert, sys, c, p: core.QuantParams) -> np.ndarray:
    """c_n = 1 + defect_n for every mode, from the a_lambda quadrature."""
    if not (sys.is_torus and sys.rank == 1):
        raise ValueError("the operator model covers the circle group only")
    return np.array([1.0 + core.a_lambda(sys, c, int(n), p).defect for n in space.labels])


def _check(space, coeffs):
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (space.size,):
        raise ValueError(f"expected {space.size} coefficients, got shape {coeffs.shape}")
    if np.any(coeffs <= 0):
        raise ValueError("KSH coefficients must be positive")
    return coeffs


def nu_matrix(space: TruncatedHilbert, m: int, coeffs) -> np.ndarray:
    """C f_m C^{-1}: entry (n+m, n) is c_{n+m}/c_n where both modes are in range."""
    coeffs = _check(space, coeffs)
    if abs(m) > space.N:
        raise ValueError(f"|m| must be <= N={space.N}")
    out = np.zeros((space.size, space.size), dtype=complex)
    cols = np.arange(space.size)
    rows = cols + m
    ok = (rows >= 0) & (rows < space.size)
    out[rows[ok], cols[ok]] = coeffs[rows[ok]] / coeffs[cols[ok]]
    return out


def translation_operator(space: TruncatedHilbert, theta1: float, theta2: float) -> np.ndarray:
    """Action of (x1, x2) on f(x) -> f(x1^{-1} x x2): mode n picks up exp(2 pi i n (theta2 - theta1))."""
    return np.diag(np.exp(2j * math.pi * space.labels * (theta2 - theta1)))


def _interior_max(space, M):
    mask = space.interior
    return float(np.abs(M[np.ix_(mask, mask)]).max())


def star_defect(space: TruncatedHilbert, m: int, coeffs) -> float:
    """max |nu(conj f_m) - nu(f_m)^dagger| on the interior, i.e. max |c_n/c_{n+m} - c_{n+m}/c_n|."""
    if abs(m) > space.N // 2:
        raise ValueError("|m| must be <= N/2")
    D = nu_matrix(space, -m, coeffs) - nu_matrix(space, m, coeffs).conj().T
    return _interior_max(space, D)


def covariance_defect(space: TruncatedHilbert, theta1: float, theta2: float, m: int,
                      coeffs) -> float:
    """max |R nu(f_m) R^dagger - nu((theta1, theta2) . f_m)| on the interior."""
    R = translation_operator(space, theta1, theta2)
    nu = nu_matrix(space, m, coeffs)
    moved = np.exp(2j * math.pi * m * (theta2 - theta1)) * nu
    return _interior_max(space, R @ nu @ R.conj().T - moved)


def multiplicativity_defect(space: TruncatedHilbert, m1: int, m2: int, coeffs) -> float:
    """max |nu(f_m1) nu(f_m2) - nu(f_{m1+m2})| on the interior."""
    prod = nu_matrix(space, m1, coeffs) @ nu_matrix(space, m2, coeffs)
    return _interior_max(space, prod - nu_matrix(space, m1 + m2, coeffs))


def u_unitarity(space: TruncatedHilbert) -> float:
    """||U^dagger U - I|| for the intertwiner; U is the identity in matched bases."""
    U = np.eye(space.size)
    return float(np.linalg.norm(U.conj().T @ U - np.eye(space.size), 2))
