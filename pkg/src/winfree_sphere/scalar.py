"""The classic phase model on the circle and its bridge to the sphere model.

Phases evolve as dtheta_i/dt = nu_i + (kappa / N) * S(theta_i) * sum_k I(theta_k).
With the sensitivity S(theta) = -sin(theta) * eta(theta) this is exactly the
d = 1 sphere model written in the polar angle, which makes the scalar
integrator an independent oracle for the sphere integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

from .dynamics import BlowUpError, _profile_value
from .geometry import planar_rotation_generator
from .influence import InfluenceProfile


class UnsupportedDimError(ValueError):
    """Embedding dimension outside {1, 2}."""


@dataclass(frozen=True)
class ScalarParams:
    kappa: float
    nus: np.ndarray
    sensitivity: Callable[[np.ndarray], np.ndarray]
    influence: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "nus", np.asarray(self.nus, dtype=float))

    @property
    def n(self) -> int:
        return len(self.nus)


def angle_from_zero(theta) -> np.ndarray:
    """Absolute angular distance from phase 0, folded into [0, pi]."""
    theta = np.asarray(theta, dtype=float)
    a = np.abs(theta) % (2.0 * np.pi)
    return np.minimum(a, 2.0 * np.pi - a)


def influence_on_circle(profile: InfluenceProfile) -> Callable[[np.ndarray], np.ndarray]:
    """Lift a radial profile to an even function of the phase.

    The returned callable carries the profile's breakpoint tables so the
    integrator can route standard runs through its compiled kernel.
    """

    def infl(theta):
        return profile._raw(angle_from_zero(theta))

    infl._profile_kernel = (profile.kind_code, *profile._table_arrays)
    return infl


def sine_sensitivity(eta: Callable[[np.ndarray], np.ndarray] | None = None):
    """S(theta) = -sin(theta) * eta(theta); the shape matching the sphere coupling."""

    def sens(theta):
        theta = np.asarray(theta, dtype=float)
        s = -np.sin(theta)
        return s if eta is None else s * eta(theta)

    sens._plain_sine = eta is None
    return sens


def scalar_rhs(params: ScalarParams, theta) -> np.ndarray:
    """Phase velocities nu_i + (kappa / N) S(theta_i) sum_k I(theta_k)."""
    theta = np.asarray(theta, dtype=float)
    total = float(np.sum(params.influence(theta)))
    return params.nus + (params.kappa / params.n) * params.sensitivity(theta) * total


@numba.njit(cache=True, nogil=True)
def _circle_field(theta, nus, gain_scale, kind, tab_ang, tab_val, out):
    n = theta.shape[0]
    total = 0.0
    two_pi = 2.0 * math.pi
    for k in range(n):
        a = abs(theta[k]) % two_pi
        if a > math.pi:
            a = two_pi - a
        total += _profile_value(a, kind, tab_ang, tab_val)
    g = gain_scale * total
    for i in range(n):
        out[i] = nus[i] - g * math.sin(theta[i])


@numba.njit(cache=True, nogil=True)
def _rk4_circle(theta0, nus, gain_scale, dt, n_steps, kind, tab_ang, tab_val, rec_steps):
    n = theta0.shape[0]
    m = rec_steps.shape[0]
    thetas = np.empty((m, n))
    th = theta0.copy()
    tt = np.empty(n)
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    p = 0
    if rec_steps[0] == 0:
        thetas[0] = th
        p = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        _circle_field(th, nus, gain_scale, kind, tab_ang, tab_val, k1)
        for i in range(n):
            tt[i] = th[i] + half * k1[i]
        _circle_field(tt, nus, gain_scale, kind, tab_ang, tab_val, k2)
        for i in range(n):
            tt[i] = th[i] + half * k2[i]
        _circle_field(tt, nus, gain_scale, kind, tab_ang, tab_val, k3)
        for i in range(n):
            tt[i] = th[i] + dt * k3[i]
        _circle_field(tt, nus, gain_scale, kind, tab_ang, tab_val, k4)
        ok = True
        for i in range(n):
            th[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not math.isfinite(th[i]):
                ok = False
        if not ok:
            return thetas, False
        if p < m and step == rec_steps[p]:
            thetas[p] = th
            p += 1
    return thetas, True


def integrate_scalar(
    params: ScalarParams, theta0, dt: float, T: float, record_every: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Fixed-step fourth-order integration of the phase model.

    Returns (times, thetas) with thetas of shape (M, N); phases are not
    wrapped, so winding is visible to callers.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    theta = np.asarray(theta0, dtype=float).copy()
    if theta.shape != (params.n,):
        raise ValueError(f"expected {params.n} phases, got shape {theta.shape}")
    n_steps = max(1, int(round(T / dt))) if T > 0.0 else 0
    dt = T / n_steps if n_steps else dt
    rec_steps = np.arange(0, n_steps + 1, record_every, dtype=np.int64)
    if rec_steps[-1] != n_steps:
        rec_steps = np.append(rec_steps, np.int64(n_steps))

    kernel = getattr(params.influence, "_profile_kernel", None)
    if kernel is not None and getattr(params.sensitivity, "_plain_sine", False):
        kind, tab_ang, tab_val = kernel
        thetas, ok = _rk4_circle(
            theta,
            params.nus,
            params.kappa / params.n,
            float(dt),
            n_steps,
            kind,
            tab_ang,
            tab_val,
            rec_steps,
        )
        if not ok:
            raise BlowUpError("non-finite phase during integration")
        return rec_steps.astype(float) * dt, thetas

    thetas = np.empty((len(rec_steps), params.n))
    p = 0
    if rec_steps[0] == 0:
        thetas[0] = theta
        p = 1
    for step in range(1, n_steps + 1):
        k1 = scalar_rhs(params, theta)
        k2 = scalar_rhs(params, theta + 0.5 * dt * k1)
        k3 = scalar_rhs(params, theta + 0.5 * dt * k2)
        k4 = scalar_rhs(params, theta + dt * k3)
        theta = theta + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(theta)):
            raise BlowUpError(f"non-finite phase at step {step}")
        if p < len(rec_steps) and step == rec_steps[p]:
            thetas[p] = theta
            p += 1
    times = rec_steps.astype(float) * dt
    return times, thetas



def embed_circle(thetas, target_dim: int) -> np.ndarray:
    """Map phases onto the sphere: (cos t, sin t) for d=1, (cos t, sin t, 0) for d=2."""
    if target_dim not in (1, 2):
        raise UnsupportedDimError(f"circle states embed into d = 1 or 2, not {target_dim}")
    thetas = np.asarray(thetas, dtype=float)
    out = np.zeros(thetas.shape + (target_dim + 1,))
    out[..., 0] = np.cos(thetas)
    out[..., 1] = np.sin(thetas)
    return out


def lift_frequencies(nus, target_dim: int) -> np.ndarray:
    """Planar rotation generators matching embed_circle, zero-padded for d=2."""
    if target_dim not in (1, 2):
        raise UnsupportedDimError(f"circle frequencies lift to d = 1 or 2, not {target_dim}")
    nus = np.asarray(nus, dtype=float)
    d = target_dim + 1
    out = np.zeros((len(nus), d, d))
    for k, nu in enumerate(nus):
        out[k, :2, :2] = planar_rotation_generator(float(nu))
    return out
