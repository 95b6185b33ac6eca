"""Root systems, Weyl groups, characters and the scalar densities P and eta.

Vectors live in an orthonormal basis of the Cartan subalgebra with respect to
the invariant form.  For type A(r) the roots are e_i - e_j of R^{r+1},
expressed in a fixed orthonormal basis of the sum-zero hyperplane, so every
root has squared length 2.

Functions taking points accept a single vector of shape ``(r,)`` or a batch of
shape ``(N, r)`` and return a scalar or an ``(N,)`` array accordingly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from kshcst.errors import NumericRangeError

__all__ = [
    "RootSystem",
    "DominantWeight",
    "torus",
    "type_a",
    "parse_group",
    "weight",
    "as_weight",
    "weyl_orbit",
    "dim_irrep",
    "char_imag_exp",
    "log_char_imag_exp",
    "vandermonde_P",
    "eta",
    "log_eta",
    "torus_volume",
    "enumerate_dominant",
]

WALL_THRESHOLD = 1e-4
_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    positive_roots: np.ndarray
    simple_roots: np.ndarray
    fundamental_weights: np.ndarray
    weyl_matrices: np.ndarray
    weyl_signs: np.ndarray
    label: str = ""

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def weyl_vector(self) -> np.ndarray:
        if self.n_positive == 0:
            return np.zeros(self.rank)
        return 0.5 * self.positive_roots.sum(axis=0)

    @property
    def weyl_order(self) -> int:
        return len(self.weyl_matrices)

    @property
    def group_dim(self) -> int:
        return self.rank + 2 * self.n_positive

    @property
    def is_torus(self) -> bool:
        return self.family == "torus"

    def __repr__(self):
        return f"RootSystem({self.family}({self.rank}))"


@dataclass(frozen=True)
class DominantWeight:
    """Highest weight in fundamental-weight coordinates plus its embedding."""

    coords: tuple
    vector: np.ndarray = field(compare=False, repr=False)

    def __str__(self):
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def torus(r: int) -> RootSystem:
    if r < 1:
        raise ValueError(f"torus rank must be >= 1, got {r}")
    empty = np.zeros((0, r))
    return RootSystem(
        family="torus",
        rank=r,
        positive_roots=empty,
        simple_roots=empty,
        fundamental_weights=np.eye(r),
        weyl_matrices=np.eye(r)[None, :, :],
        weyl_signs=np.array([1]),
        label=f"torus:{r}",
    )


def _sum_zero_basis(m: int) -> np.ndarray:
    """Orthonormal basis of {x in R^m : sum x = 0}, as columns of an (m, m-1) matrix."""
    q = np.zeros((m, m - 1))
    for j in range(1, m):
        q[:j, j - 1] = 1.0
        q[j, j - 1] = -float(j)
        q[:, j - 1] /= math.sqrt(j * (j + 1))
    return q


def _parity(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def type_a(r: int) -> RootSystem:
    """A(r), the root system of SU(r+1)."""
    if r < 1:
        raise ValueError(f"A(r) needs r >= 1, got {r}")
    m = r + 1
    q = _sum_zero_basis(m)
    eye = np.eye(m)
    pos = np.array([q.T @ (eye[i] - eye[j]) for i in range(m) for j in range(i + 1, m)])
    simple = np.array([q.T @ (eye[i] - eye[i + 1]) for i in range(r)])
    fund = np.array([q.T @ eye[: i + 1].sum(axis=0) for i in range(r)])
    mats, signs = [], []
    # lexicographic one-line notation; w acts by permuting coordinates
    for perm in itertools.permutations(range(m)):
        p = np.zeros((m, m))
        p[np.arange(m), perm] = 1.0
        mats.append(q.T @ p @ q)
        signs.append(_parity(perm))
    return RootSystem(
        family="A",
        rank=r,
        positive_roots=pos,
        simple_roots=simple,
        fundamental_weights=fund,
        weyl_matrices=np.array(mats),
        weyl_signs=np.array(signs),
        label=f"a:{r}",
    )


def parse_group(spec: str) -> RootSystem:
    """Parse ``s1 | su2 | a:<r> | torus:<r>``."""
    s = spec.strip().lower()
    if s == "s1":
        return torus(1)
    if s == "su2":
        return type_a(1)
    name, sep, arg = s.partition(":")
    if sep and name in ("a", "torus"):
        try:
            r = int(arg)
        except ValueError:
            raise ValueError(f"bad group rank in {spec!r}") from None
        return type_a(r) if name == "a" else torus(r)
    raise ValueError(f"unknown group {spec!r}; expected s1, su2, a:<r> or torus:<r>")


def weight(sys: RootSystem, coords) -> DominantWeight:
    """Build a dominant weight from fundamental-weight coordinates."""
    if np.isscalar(coords):
        coords = (coords,)
    coords = tuple(int(c) for c in coords)
    if len(coords) != sys.rank:
        raise ValueError(f"expected {sys.rank} coordinates, got {len(coords)}")
    vec = np.asarray(coords, dtype=float) @ sys.fundamental_weights
    for alpha in sys.simple_roots:
        pairing = 2.0 * vec @ alpha / (alpha @ alpha)
        if pairing < -1e-9 or abs(pairing - round(pairing)) > 1e-9:
            raise ValueError(f"weight {coords} is not dominant for {sys!r}")
    return DominantWeight(coords, vec)


def as_weight(sys: RootSystem, lam) -> DominantWeight:
    return lam if isinstance(lam, DominantWeight) else weight(sys, lam)


def weyl_orbit(sys: RootSystem, v) -> list:
    """All (w(v), (-1)^w), in the fixed enumeration order of the Weyl group."""
    v = np.asarray(v, dtype=float)
    return [(m @ v, int(s)) for m, s in zip(sys.weyl_matrices, sys.weyl_signs)]


def dim_irrep(sys: RootSystem, lam) -> int:
    lam = as_weight(sys, lam)
    if sys.n_positive == 0:
        return 1
    rho = sys.weyl_vector
    num = (sys.positive_roots @ (lam.vector + rho)).prod()
    den = (sys.positive_roots @ rho).prod()
    d = num / den
    if abs(d - round(d)) > 1e-9 * max(1.0, d):
        raise ArithmeticError(f"Weyl dimension {d} not an integer")
    return int(round(d))


def _batch(x, r):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] != r:
        raise ValueError(f"expected vectors of length {r}, got shape {x.shape}")
    return x, single


def _alt_sum_log(sys, v, zeta):
    """log|sum_w (-1)^w exp(-2 w(v)(zeta))| and its sign, batched over zeta."""
    orbit = sys.weyl_matrices @ v
    expo = -2.0 * zeta @ orbit.T
    signs = np.broadcast_to(sys.weyl_signs, expo.shape)
    with np.errstate(divide="ignore"):
        return logsumexp(expo, axis=1, b=signs, return_sign=True)


def _log_char_regular(sys, shifted, zeta):
    num, _ = _alt_sum_log(sys, shifted, zeta)
    den, _ = _alt_sum_log(sys, sys.weyl_vector, zeta)
    return num - den


def log_char_imag_exp(sys: RootSystem, lam, zeta):
    """log of chi_lambda(exp(2i zeta)) for real zeta; the character is positive there.

    Uses the alternating-sum quotient.  Within ``WALL_THRESHOLD`` of a
    reflection wall the point is moved to the dominant chamber (the character
    is a class function) and the value is extrapolated to the wall from six
    points stepped into the chamber interior along rho.
    """
    lam = as_weight(sys, lam)
    zeta, single = _batch(zeta, sys.rank)
    shifted = lam.vector + sys.weyl_vector
    out = np.empty(len(zeta))
    if sys.n_positive == 0:
        out[:] = -2.0 * zeta @ lam.vector
        return out[0] if single else out
    near = np.abs(zeta @ sys.positive_roots.T).min(axis=1) < WALL_THRESHOLD
    if (~near).any():
        out[~near] = _log_char_regular(sys, shifted, zeta[~near])
    if near.any():
        out[near] = _log_char_wall(sys, shifted, zeta[near])
    return out[0] if single else out


def _log_char_wall(sys, shifted, zeta):
    rho = sys.weyl_vector
    images = np.einsum("wij,nj->nwi", sys.weyl_matrices, zeta)
    best = np.argmax(images @ rho, axis=1)
    dom = images[np.arange(len(zeta)), best]
    direction = rho / np.linalg.norm(rho)
    step = 0.01 / max(1.0, 2.0 * np.linalg.norm(shifted))
    ts = step * np.arange(1, 7)
    pts = dom[:, None, :] + ts[None, :, None] * direction
    vals = _log_char_regular(sys, shifted, pts.reshape(-1, sys.rank)).reshape(len(zeta), len(ts))
    # Lagrange weights for extrapolating to t = 0 from t_j = j*step
    lw = np.array([np.prod([tk / (tk - tj) for tk in ts if tk != tj]) for tj in ts])
    ref = vals[:, :1]
    return ref[:, 0] + np.log((np.exp(vals - ref) * lw).sum(axis=1))


def char_imag_exp(sys: RootSystem, lam, zeta):
    """chi_lambda(exp(2i zeta)); raises NumericRangeError instead of overflowing."""
    logv = log_char_imag_exp(sys, lam, zeta)
    if np.any(logv > _LOG_MAX):
        raise NumericRangeError(f"character value exp({np.max(logv):.6g}) overflows double")
    return np.exp(logv)


def vandermonde_P(sys: RootSystem, X):
    """Product of alpha(X) over positive roots (1 for a torus)."""
    X, single = _batch(X, sys.rank)
    val = (X @ sys.positive_roots.T).prod(axis=1)
    return val[0] if single else val


def log_eta(sys: RootSystem, Y):
    """log of prod sinh(alpha(Y))/alpha(Y), even in each alpha(Y)."""
    Y, single = _batch(Y, sys.rank)
    a = np.abs(Y @ sys.positive_roots.T)
    small = a < WALL_THRESHOLD
    safe = np.where(small, 1.0, a)
    big = safe + np.log(-np.expm1(-2.0 * safe)) - math.log(2.0) - np.log(safe)
    series = np.log1p(a * a / 6.0 + a**4 / 120.0)
    val = np.where(small, series, big).sum(axis=1)
    return val[0] if single else val


def eta(sys: RootSystem, Y):
    return np.exp(log_eta(sys, Y))


def torus_volume(sys: RootSystem) -> float:
    """Volume of the maximal torus when the group has unit volume."""
    if sys.n_positive == 0:
        return 1.0
    p_rho = float((sys.positive_roots @ sys.weyl_vector).prod())
    return p_rho / (2.0 * math.pi) ** sys.n_positive


def enumerate_dominant(sys: RootSystem, cutoff: int) -> list:
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if sys.is_torus:
        rng = range(-cutoff, cutoff + 1)
    else:
        rng = range(cutoff + 1)
    return [weight(sys, c) for c in itertools.product(rng, repeat=sys.rank)]
