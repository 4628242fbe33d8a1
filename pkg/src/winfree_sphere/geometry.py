"""Spherical geometry and skew-matrix primitives shared by the whole package.

Vectors are plain float64 numpy arrays of length D = d + 1; configurations are
(N, D) arrays of row unit vectors. Everything here is a pure function of its
inputs; randomness always flows through an explicit ``numpy.random.Generator``
supplied by the caller.
"""

from __future__ import annotations

import math

import numpy as np

UNIT_NORM_TOL = 1e-12


class ZeroVectorError(ValueError):
    """Vector too short to normalize."""


class DegeneratePointError(ValueError):
    """The unit direction toward the attraction point is undefined at +-e."""


def attraction_point(dim: int) -> np.ndarray:
    """First standard basis vector of R^(dim+1), the point everything is pulled toward."""
    e = np.zeros(dim + 1)
    e[0] = 1.0
    return e


def unit_vector(coords) -> np.ndarray:
    """Validated copy of ``coords``; the norm must be 1 within 1e-12."""
    x = np.asarray(coords, dtype=float).copy()
    if abs(np.linalg.norm(x) - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"not unit length: |x| = {np.linalg.norm(x)!r}")
    return x


def renormalize(x) -> np.ndarray:
    """Project onto the unit sphere. Raises ZeroVectorError below norm 1e-12."""
    x = np.asarray(x, dtype=float)
    n = np.linalg.norm(x)
    if n <= UNIT_NORM_TOL:
        raise ZeroVectorError(f"cannot normalize vector of norm {n!r}")
    return x / n


def angle(x, y) -> float:
    """Geodesic angle arccos<x, y> between two unit vectors.

    The inner product is clamped to [-1, 1] first, so rounding in the inputs
    can never push arccos out of its domain.
    """
    return math.acos(min(1.0, max(-1.0, float(np.dot(x, y)))))


def polar_angles(X, e=None) -> np.ndarray:
    """Angles from the attraction point for every row of ``X`` (vectorized)."""
    X = np.asarray(X, dtype=float)
    ip = X[..., 0] if e is None else X @ np.asarray(e, dtype=float)
    return np.arccos(np.clip(ip, -1.0, 1.0))


def tangent_toward(x, e, normalize: bool = False) -> np.ndarray:
    """Component of ``e`` orthogonal to ``x``: e - <x,e> x.

    The result is tangent to the sphere at ``x`` and has norm sin(angle(x, e)).
    With ``normalize=True`` returns the unit direction instead, which is
    undefined at x = +-e (raises DegeneratePointError).
    """
    x = np.asarray(x, dtype=float)
    e = np.asarray(e, dtype=float)
    t = e - float(np.dot(x, e)) * x
    if not normalize:
        return t
    n = np.linalg.norm(t)
    if n <= UNIT_NORM_TOL:
        raise DegeneratePointError("unit tangent toward e undefined at x = +-e")
    return t / n


def operator_norm(omega) -> float:
    """Spectral norm (largest singular value) of a matrix."""
    return float(np.linalg.norm(np.asarray(omega, dtype=float), 2))


def is_skew(omega) -> bool:
    """Exact antisymmetry check: omega + omega.T == 0 entrywise."""
    omega = np.asarray(omega)
    return bool(np.all(omega == -omega.T))


def skew_symmetrize(m) -> np.ndarray:
    """(m - m.T)/2, which is exactly antisymmetric in floating point."""
    m = np.asarray(m, dtype=float)
    return (m - m.T) / 2.0


def planar_rotation_generator(rate: float) -> np.ndarray:
    """2x2 generator [[0, -rate], [rate, 0]] of a planar rotation."""
    return np.array([[0.0, -rate], [rate, 0.0]])


def hat(u) -> np.ndarray:
    """3x3 cross-product matrix: hat(u) x = u x x."""
    u = np.asarray(u, dtype=float)
    return np.array(
        [
            [0.0, -u[2], u[1]],
            [u[2], 0.0, -u[0]],
            [-u[1], u[0], 0.0],
        ]
    )


def axis_rotation_generator(axis, rate: float = 1.0) -> np.ndarray:
    """3x3 rotation generator about a (normalized) axis with angular speed ``rate``."""
    return rate * hat(renormalize(axis))


def structured_frequency(nu: float, axis, dim: int) -> np.ndarray:
    """Skew matrix acting only on span{axis, e}: maps axis -> -nu e, e -> nu axis.

    ``axis`` must be a unit vector orthogonal to the attraction point; the
    matrix annihilates the orthogonal complement of span{axis, e} and has
    operator norm |nu|.
    """
    e = attraction_point(dim)
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-9 or abs(np.dot(n, e)) > 1e-9:
        raise ValueError("axis must be unit length and orthogonal to the attraction point")
    return nu * (np.outer(n, e) - np.outer(e, n))


def _expm_series(a: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor series for exp(a), any square matrix."""
    nrm = np.abs(a).sum(axis=1).max()
    squarings = 0 if nrm <= 0.5 else int(math.ceil(math.log2(nrm / 0.5)))
    b = a / (2.0**squarings)
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, 40):
        term = term @ b / k
        out = out + term
        if np.abs(term).max() < 1e-18:
            break
    for _ in range(squarings):
        out = out @ out
    return out


def skew_exponential(omega, t: float) -> np.ndarray:
    """Rotation matrix exp(t * omega) for a skew-symmetric generator.

    Closed form in dimensions 2 (planar rotation) and 3 (axis-angle); a
    scaling-and-squaring Taylor series in higher dimensions.
    """
    omega = np.asarray(omega, dtype=float)
    d = omega.shape[0]
    if d == 2:
        th = t * omega[1, 0]
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, -s], [s, c]])
    if d == 3:
        w = np.array([omega[2, 1], omega[0, 2], omega[1, 0]])
        lam = np.linalg.norm(w)
        if lam * abs(t) < 1e-300:
            return np.eye(3)
        k = hat(w / lam)
        th = t * lam
        return np.eye(3) + math.sin(th) * k + (1.0 - math.cos(th)) * (k @ k)
    return _expm_series(t * omega)


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the unit sphere in R^(dim+1)."""
    while True:
        v = rng.standard_normal(dim + 1)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return v / n


def random_in_cap(dim: int, gamma: float, rng: np.random.Generator) -> np.ndarray:
    """Unit vector at angle <= gamma from the attraction point.

    The polar angle is uniform on [0, gamma] and the direction within the
    orthogonal sphere is uniform, so gamma = 0 returns e exactly and gamma = pi
    can reach the whole sphere. Deterministic given the generator state.
    """
    if not 0.0 <= gamma <= math.pi:
        raise ValueError(f"cap radius must be in [0, pi], got {gamma!r}")
    phi = rng.uniform(0.0, gamma)
    while True:
        u = rng.standard_normal(dim)
        n = np.linalg.norm(u)
        if n > 1e-6:
            u = u / n
            break
    x = np.empty(dim + 1)
    x[0] = math.cos(phi)
    x[1:] = math.sin(phi) * u
    return x


def random_skew(dim: int, rng: np.random.Generator, op_norm: float | None = None) -> np.ndarray:
    """Random skew matrix in R^(dim+1), optionally rescaled to a given spectral norm."""
    g = rng.standard_normal((dim + 1, dim + 1))
    a = skew_symmetrize(g)
    if op_norm is not None:
        cur = operator_norm(a)
        a = a * (op_norm / cur) if cur > 0 else a
    return a
