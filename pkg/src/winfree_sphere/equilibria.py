"""Equilibrium existence, construction, classification, and certification.

For structured generators the rest states solve a scalar balance: the gain
lambda = kappa * (mean influence at rest) must satisfy
F(lambda) = lambda/kappa - mean_k I(arcsin(|nu_k| / lambda)) = 0, and each
oscillator then sits at polar angle arcsin(nu_k / lambda) in its own rotation
plane. F is non-decreasing past max|nu| / sin(beta) and grows without bound,
but its value at the lower bracket is not negative for all admissible data,
so "no root" is a first-class outcome rather than an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dynamics import ModelParams, rhs
from .geometry import attraction_point, hat, operator_norm, renormalize
from .influence import InfluenceProfile

ROOT_TOL = 1e-12
RESIDUAL_TOL = 1e-10


class OutOfRangeError(ValueError):
    """A frequency magnitude exceeds the candidate gain."""


class UnsupportedAxisError(ValueError):
    """Rest-state classification on the 2-sphere needs the rotation axis parallel
    or perpendicular to the attraction point."""


@dataclass(frozen=True)
class LambdaEquation:
    """The scalar balance F(lambda) = lambda/kappa - mean_k I(arcsin(|nu_k|/lambda)).

    F is continuous on [bracket_low, inf) and eventually grows like
    lambda/kappa, but it is NOT monotone in general: near the bracket the
    subtracted influence mean can rise faster than lambda/kappa (the slope of
    arcsin blows up as its argument nears sin(beta)). Since the mean is at
    most 1, F(lambda) >= lambda/kappa - 1 > 0 for lambda > kappa, so every
    root lies in the finite window [bracket_low, kappa].
    """

    kappa: float
    nus: np.ndarray
    profile: InfluenceProfile

    def __post_init__(self):
        object.__setattr__(self, "nus", np.asarray(self.nus, dtype=float))

    @cached_property
    def bracket_low(self) -> float:
        return float(np.max(np.abs(self.nus))) / math.sin(self.profile.support_beta)

    def __call__(self, lam: float) -> float:
        if lam < self.bracket_low:
            raise OutOfRangeError(f"lambda {lam} below bracket {self.bracket_low}")
        if lam == 0.0:
            # only reachable when every nu is zero; arcsin(0) = 0 and I(0) = 1
            return -1.0
        ratios = np.clip(np.abs(self.nus) / lam, 0.0, 1.0)
        mean_infl = float(np.mean(self.profile.evaluate(np.arcsin(ratios))))
        return lam / self.kappa - mean_infl


@dataclass(frozen=True)
class EquilibriumState:
    """A realized rest configuration with its balance gain and polar angles."""

    lambda_star: float
    phis: np.ndarray
    axes: np.ndarray
    configuration: np.ndarray


def _bisect(eq: LambdaEquation, a: float, fa: float, b: float, fb: float) -> float:
    """Root inside [a, b] given a sign change; orientation-agnostic, |F| <= 1e-12."""
    for _ in range(400):
        mid = 0.5 * (a + b)
        f_mid = eq(mid)
        if abs(f_mid) <= ROOT_TOL:
            return mid
        if (f_mid < 0.0) == (fa < 0.0):
            a, fa = mid, f_mid
        else:
            b, fb = mid, f_mid
    return 0.5 * (a + b)


def solve_lambda(eq: LambdaEquation, scan_points: int = 20001) -> float | None:
    """Leftmost root of the balance, or None when it stays positive.

    When F is negative at the lower bracket a sign change is guaranteed (F is
    positive past kappa), so bisection applies directly. When F starts
    positive, the lack of monotonicity means a root may still hide in a dip;
    the finite window [bracket_low, kappa] is scanned densely for one before
    reporting that no root exists.
    """
    lo = eq.bracket_low
    f_lo = eq(lo)
    if f_lo == 0.0:
        return lo
    if f_lo < 0.0:
        hi = max(lo, eq.kappa, 1.0)
        f_hi = eq(hi)
        while f_hi <= 0.0:
            hi *= 2.0
            f_hi = eq(hi)
            if hi > 1e12:
                raise RuntimeError("bracket expansion failed; balance never turned positive")
        return _bisect(eq, lo, f_lo, hi, f_hi)
    hi = max(eq.kappa, lo) + 1.0
    grid = np.linspace(lo, hi, scan_points)
    prev_x, prev_f = lo, f_lo
    for x in grid[1:]:
        f = eq(float(x))
        if f <= 0.0:
            return _bisect(eq, prev_x, prev_f, float(x), f)
        prev_x, prev_f = float(x), f
    return None


def build_equilibrium(lambda_star: float, nus, axes=None) -> EquilibriumState:
    """Rest configuration x_k = cos(phi_k) e + sin(phi_k) n_k with sin(phi_k) = nu_k / lambda.

    Axes default to a shared direction orthogonal to the attraction point;
    each must be unit length and orthogonal to it. Frequencies beyond the gain
    in magnitude have no resting angle and raise OutOfRangeError.
    """
    nus = np.asarray(nus, dtype=float)
    if np.any(np.abs(nus) > lambda_star * (1.0 + 1e-15)):
        raise OutOfRangeError("some |nu| exceeds lambda; no resting angle exists")
    if axes is None:
        axes = np.zeros((len(nus), 2))
        axes[:, 1] = 1.0
    axes = np.asarray(axes, dtype=float)
    dim = axes.shape[1] - 1
    e = attraction_point(dim)
    for k, ax in enumerate(axes):
        if abs(np.linalg.norm(ax) - 1.0) > 1e-9 or abs(float(ax @ e)) > 1e-9:
            raise ValueError(f"axis {k} must be unit length and orthogonal to the attraction point")
    phis = np.arcsin(np.clip(nus / lambda_star, -1.0, 1.0))
    config = np.cos(phis)[:, None] * e[None, :] + np.sin(phis)[:, None] * axes
    return EquilibriumState(
        lambda_star=float(lambda_star), phis=phis, axes=axes, configuration=config
    )


def residual(params: ModelParams, X) -> float:
    """Largest velocity magnitude; at most 1e-10 certifies a rest state."""
    return float(np.linalg.norm(rhs(params, X), axis=1).max())


def classify_zero_frequency(X, beta: float) -> str:
    """Rest-state family for vanishing generators.

    "outside-support" when every oscillator sits at angle >= beta from the
    attraction point; "bipolar" when every oscillator coincides with +-e;
    "not-equilibrium" otherwise.
    """
    X = np.asarray(X, dtype=float)
    e = attraction_point(X.shape[1] - 1)
    at_poles = np.minimum(
        np.linalg.norm(X - e[None, :], axis=1), np.linalg.norm(X + e[None, :], axis=1)
    )
    if np.all(at_poles <= 1e-9):
        return "bipolar"
    phis = np.arccos(np.clip(X[:, 0], -1.0, 1.0))
    if np.all(phis >= beta - 1e-9):
        return "outside-support"
    return "not-equilibrium"


@dataclass(frozen=True)
class SphereRestReport:
    """Rest-state check on the 2-sphere for a single rotation generator."""

    axis_alignment: str  # "parallel" | "perpendicular"
    is_equilibrium: bool
    mu: float | None
    branches: tuple[str, ...]
    max_circle_distance: float
    component_residual: float
    velocity_residual: float
    note: str = ""


def classify_s2(X, omega, kappa: float, profile: InfluenceProfile) -> SphereRestReport:
    """Check a configuration against the rest-state geometry on the 2-sphere.

    The generator must be a rotation about an axis parallel or perpendicular
    to the attraction point. In the perpendicular case every resting
    oscillator lies on one of two great circles through the frame
    (e, axis, e x axis), pinned by the ratio mu = kappa * I_c / rate; the
    report carries which branch each oscillator satisfies.
    """
    X = np.asarray(X, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if X.shape[1] != 3 or omega.shape != (3, 3):
        raise ValueError("classification implemented for the 2-sphere only")
    e = attraction_point(2)
    rate = operator_norm(omega)
    if rate <= 1e-14:
        raise UnsupportedAxisError("generator is zero; use the zero-frequency classification")
    u = np.array([omega[2, 1], omega[0, 2], omega[1, 0]]) / rate
    if np.linalg.norm(omega - rate * hat(u)) > 1e-9:
        raise UnsupportedAxisError("generator is not a single-axis rotation")
    align = abs(float(u @ e))
    ic = profile.mean_influence(X)
    vres = residual(
        ModelParams(kappa=kappa, omegas=np.broadcast_to(omega, (X.shape[0], 3, 3)).copy(),
                    profile=profile),
        X,
    )
    if align > 1.0 - 1e-9:
        at_poles = np.minimum(
            np.linalg.norm(X - e[None, :], axis=1), np.linalg.norm(X + e[None, :], axis=1)
        )
        is_eq = bool(np.all(at_poles <= 1e-9))
        return SphereRestReport(
            axis_alignment="parallel",
            is_equilibrium=is_eq,
            mu=None,
            branches=tuple("pole" if d <= 1e-9 else "off-pole" for d in at_poles),
            max_circle_distance=float(at_poles.max()),
            component_residual=math.nan,
            velocity_residual=vres,
            note="axis through the attraction point: rest states are the poles",
        )
    if align > 1e-9:
        raise UnsupportedAxisError(
            f"axis neither parallel nor perpendicular to the attraction point "
            f"(|<u, e>| = {align:.3g})"
        )
    f1 = e
    f2 = u
    f3 = np.cross(e, u)
    coords = X @ np.stack([f1, f2, f3]).T
    mu = kappa * ic / rate
    branches = []
    circle_dist = []
    comp_res = 0.0
    for c in coords:
        x1, x2, x3 = float(c[0]), float(c[1]), float(c[2])
        eq1 = x3 + mu * (1.0 - x1 * x1)
        eq2 = mu * x1 * x2
        eq3 = x1 * (1.0 + mu * x3)
        comp_res = max(comp_res, abs(eq1), abs(eq2), abs(eq3))
        if abs(x1) <= 1e-9:
            branches.append("circle-x1=0")
            circle_dist.append(abs(x1))
        elif abs(x2) <= 1e-9:
            branches.append("circle-x2=0")
            circle_dist.append(abs(x2))
        else:
            branches.append("off-circle")
            circle_dist.append(min(abs(x1), abs(x2)))
    return SphereRestReport(
        axis_alignment="perpendicular",
        is_equilibrium=bool(comp_res <= 1e-9 and vres <= RESIDUAL_TOL),
        mu=float(mu),
        branches=tuple(branches),
        max_circle_distance=float(max(circle_dist)),
        component_residual=float(comp_res),
        velocity_residual=vres,
        note="|mu| <= 1 selects the x1 = 0 circle, |mu| >= 1 the x2 = 0 circle",
    )


def branch_point(mu: float, sign: int = 1) -> np.ndarray:
    """A point on the x1 = 0 rest circle for |mu| <= 1: (0, +-sqrt(1 - mu^2), -mu)."""
    if abs(mu) > 1.0:
        raise OutOfRangeError("the x1 = 0 branch needs |mu| <= 1")
    return renormalize(np.array([0.0, sign * math.sqrt(max(0.0, 1.0 - mu * mu)), -mu]))
