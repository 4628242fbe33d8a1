"""Vector fields and fixed-step integrators for the sphere model.

The evolution pulls every oscillator toward the attraction point e (the first
basis vector) with gain proportional to the mean influence broadcast by the
population, on top of free rotation by per-oscillator skew generators:

    dx_i/dt = W_i x_i + (kappa / N) * (e - <x_i, e> x_i) * eta(x_i) * sum_j I(x_j)

Integration is classical fourth-order Runge-Kutta with a projection back onto
the sphere after every step; the pre-projection norm drift is monitored and
reported on the trajectory. The circle reduction (d = 1) and the transform
that strips a shared rotation from a solution live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numba
import numpy as np

from .geometry import attraction_point, is_skew, skew_exponential
from .influence import InfluenceProfile

# Test-only hook: fractional radial inflation applied after every step, before
# the norm monitor. Leave at 0.0; mutating it breaks norm conservation on
# purpose so the verification harness can prove it would notice.
RADIAL_STEP_INFLATION = 0.0


class LengthMismatchError(ValueError):
    """Configuration size disagrees with the model parameters."""


class BlowUpError(RuntimeError):
    """Non-finite state during integration; the field is globally Lipschitz, so this is a bug."""


class HypothesisViolatedError(ValueError):
    """A transform was applied outside its stated hypothesis."""


@dataclass(frozen=True)
class ModelParams:
    """Coupling gain, per-oscillator rotation generators, influence profile.

    ``eta`` optionally reshapes the pull strength per oscillator; it maps an
    (N, D) configuration to (N,) factors and defaults to the constant 1.
    """

    kappa: float
    omegas: np.ndarray
    profile: InfluenceProfile
    eta: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.ndim != 3 or omegas.shape[1] != omegas.shape[2]:
            raise ValueError("omegas must have shape (N, D, D)")
        if omegas.shape[1] < 2:
            raise ValueError("ambient dimension must be at least 2")
        for k, w in enumerate(omegas):
            if not is_skew(w):
                raise ValueError(f"omega[{k}] is not exactly skew-symmetric")
        if self.kappa < 0:
            raise ValueError("coupling strength must be nonnegative")
        object.__setattr__(self, "omegas", omegas)

    @property
    def n(self) -> int:
        return self.omegas.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.omegas.shape[1]

    @property
    def dim(self) -> int:
        return self.ambient_dim - 1

    @cached_property
    def max_op_norm(self) -> float:
        return max(float(np.linalg.norm(w, 2)) for w in self.omegas)

    @cached_property
    def identical(self) -> bool:
        return all(np.array_equal(self.omegas[0], w) for w in self.omegas[1:])


@dataclass(frozen=True)
class Trajectory:
    """Recorded states plus the observables every checker consumes.

    ``states`` has shape (M, N, D) aligned with ``times``; angles, mean
    influence and the order parameter are precomputed per record. The largest
    pre-projection norm drift seen at any step (recorded or not) is kept for
    conservation checks.
    """

    times: np.ndarray
    states: np.ndarray
    phis: np.ndarray
    mean_influence: np.ndarray
    order_parameter: np.ndarray
    max_step_norm_drift: float
    dt: float
    record_every: int

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.states.shape[2]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    def pairwise_chords(self, k: int) -> np.ndarray:
        """(N, N) Euclidean distances between oscillators at record ``k``."""
        x = self.states[k]
        g = x @ x.T
        d2 = np.clip(np.diag(g)[:, None] + np.diag(g)[None, :] - 2.0 * g, 0.0, None)
        return np.sqrt(d2)

    def pairwise_angles(self, k: int) -> np.ndarray:
        """(N, N) geodesic angles between oscillators at record ``k``."""
        x = self.states[k]
        return np.arccos(np.clip(x @ x.T, -1.0, 1.0))

    def chord_series(self, i: int, j: int) -> np.ndarray:
        """Distance between oscillators i and j at every record."""
        return np.linalg.norm(self.states[:, i, :] - self.states[:, j, :], axis=1)

    @cached_property
    def max_pairwise_chord(self) -> np.ndarray:
        """Largest pairwise distance at every record."""
        out = np.empty(len(self.times))
        for k in range(len(self.times)):
            out[k] = self.pairwise_chords(k).max()
        return out

    def inner_with(self, v) -> np.ndarray:
        """(M, N) inner products of every oscillator with a fixed vector."""
        return self.states @ np.asarray(v, dtype=float)


def check_configuration(X, n: int | None = None, tol: float = 1e-9) -> np.ndarray:
    """Validate an (N, D) configuration of unit rows; returns a float copy."""
    X = np.array(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("configuration must be a 2-d array of row vectors")
    if n is not None and X.shape[0] != n:
        raise LengthMismatchError(f"expected {n} oscillators, got {X.shape[0]}")
    norms = np.linalg.norm(X, axis=1)
    if np.any(np.abs(norms - 1.0) > tol):
        k = int(np.argmax(np.abs(norms - 1.0)))
        raise ValueError(f"row {k} has norm {norms[k]!r}, not unit within {tol}")
    return X


def rhs(params: ModelParams, X) -> np.ndarray:
    """Velocity field at configuration ``X``; each row is tangent to the sphere."""
    X = np.asarray(X, dtype=float)
    if X.shape != (params.n, params.ambient_dim):
        raise LengthMismatchError(
            f"configuration shape {X.shape} does not match (N, D) = "
            f"({params.n}, {params.ambient_dim})"
        )
    phi = np.arccos(np.clip(X[:, 0], -1.0, 1.0))
    total = float(np.sum(params.profile.evaluate(phi)))
    drift = (params.omegas @ X[:, :, None])[:, :, 0]
    tang = -X[:, 0:1] * X
    tang[:, 0] += 1.0
    gain = (params.kappa / params.n) * total
    if params.eta is not None:
        gain = gain * np.asarray(params.eta(X), dtype=float)[:, None]
    return drift + gain * tang


@numba.njit(cache=True, nogil=True)
def _profile_value(phi, kind, tab_ang, tab_val):
    if kind == 0:
        v = 1.0 - phi
        return v if v > 0.0 else 0.0
    if kind == 1:
        if phi < 0.5:
            u = 2.0 * phi - 1.0
            return u * u
        return 0.0
    if phi <= tab_ang[0]:
        return tab_val[0]
    if phi >= tab_ang[-1]:
        return tab_val[-1]
    j = np.searchsorted(tab_ang, phi)
    w = (phi - tab_ang[j - 1]) / (tab_ang[j] - tab_ang[j - 1])
    return tab_val[j - 1] * (1.0 - w) + tab_val[j] * w


@numba.njit(cache=True, nogil=True)
def _field(x, omegas, gain_scale, kind, tab_ang, tab_val, out):
    n, d = x.shape
    total = 0.0
    for i in range(n):
        c = x[i, 0]
        if c > 1.0:
            c = 1.0
        elif c < -1.0:
            c = -1.0
        total += _profile_value(math.acos(c), kind, tab_ang, tab_val)
    g = gain_scale * total
    for i in range(n):
        c = x[i, 0]
        for a in range(d):
            acc = 0.0
            for b in range(d):
                acc += omegas[i, a, b] * x[i, b]
            t = -c * x[i, a]
            if a == 0:
                t += 1.0
            out[i, a] = acc + g * t


@numba.njit(cache=True, nogil=True)
def _rk4_sphere(x0, omegas, gain_scale, dt, n_steps, kind, tab_ang, tab_val, rec_steps, inflate):
    n, d = x0.shape
    m = rec_steps.shape[0]
    states = np.empty((m, n, d))
    x = x0.copy()
    xt = np.empty((n, d))
    k1 = np.empty((n, d))
    k2 = np.empty((n, d))
    k3 = np.empty((n, d))
    k4 = np.empty((n, d))
    p = 0
    if rec_steps[0] == 0:
        states[0] = x
        p = 1
    max_drift = 0.0
    half = 0.5 * dt
    sixth = dt / 6.0
    for step in range(1, n_steps + 1):
        _field(x, omegas, gain_scale, kind, tab_ang, tab_val, k1)
        for i in range(n):
            for a in range(d):
                xt[i, a] = x[i, a] + half * k1[i, a]
        _field(xt, omegas, gain_scale, kind, tab_ang, tab_val, k2)
        for i in range(n):
            for a in range(d):
                xt[i, a] = x[i, a] + half * k2[i, a]
        _field(xt, omegas, gain_scale, kind, tab_ang, tab_val, k3)
        for i in range(n):
            for a in range(d):
                xt[i, a] = x[i, a] + dt * k3[i, a]
        _field(xt, omegas, gain_scale, kind, tab_ang, tab_val, k4)
        for i in range(n):
            for a in range(d):
                x[i, a] += sixth * (k1[i, a] + 2.0 * k2[i, a] + 2.0 * k3[i, a] + k4[i, a])
        if inflate != 0.0:
            for i in range(n):
                for a in range(d):
                    x[i, a] *= 1.0 + inflate
        for i in range(n):
            s = 0.0
            for a in range(d):
                s += x[i, a] * x[i, a]
            nrm = math.sqrt(s)
            if not math.isfinite(nrm) or nrm <= 1e-12:
                return states, max_drift, False
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            for a in range(d):
                x[i, a] /= nrm
        if p < m and step == rec_steps[p]:
            states[p] = x
            p += 1
    return states, max_drift, True


def _integrate_python(params, X, dt, n_steps, rec_steps):
    """Reference path, used whenever a custom eta makes the compiled kernel inapplicable."""
    states = np.empty((len(rec_steps), params.n, params.ambient_dim))
    p = 0
    if rec_steps[0] == 0:
        states[0] = X
        p = 1
    max_drift = 0.0
    for step in range(1, n_steps + 1):
        k1 = rhs(params, X)
        k2 = rhs(params, X + 0.5 * dt * k1)
        k3 = rhs(params, X + 0.5 * dt * k2)
        k4 = rhs(params, X + dt * k3)
        X = X + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if RADIAL_STEP_INFLATION != 0.0:
            X = X * (1.0 + RADIAL_STEP_INFLATION)
        norms = np.linalg.norm(X, axis=1)
        if not np.all(np.isfinite(norms)) or np.any(norms <= 1e-12):
            raise BlowUpError(f"non-finite state at step {step}")
        max_drift = max(max_drift, float(np.abs(norms - 1.0).max()))
        X = X / norms[:, None]
        if p < len(rec_steps) and step == rec_steps[p]:
            states[p] = X
            p += 1
    return states, max_drift


def default_record_every(T: float, dt: float) -> int:
    """Every step for short runs, every tenth step for long ones."""
    return 1 if T <= 10.0 else 10


def integrate(
    params: ModelParams,
    X0,
    dt: float,
    T: float,
    record_every: int | None = None,
) -> Trajectory:
    """Integrate from ``X0`` to time ``T`` with fixed steps of roughly ``dt``.

    The horizon is split into round(T / dt) equal steps so the final record
    lands on T exactly. Records every ``record_every``-th step (plus the
    initial and final states) and raises BlowUpError if the state ever goes
    non-finite. Identical inputs produce bit-identical trajectories.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if T < 0.0:
        raise ValueError("T must be nonnegative")
    X0 = check_configuration(X0, params.n)
    if X0.shape[1] != params.ambient_dim:
        raise LengthMismatchError(
            f"configuration dimension {X0.shape[1]} does not match D = {params.ambient_dim}"
        )
    n_steps = max(1, int(round(T / dt))) if T > 0.0 else 0
    h = T / n_steps if n_steps else dt
    if record_every is None:
        record_every = default_record_every(T, dt)
    rec_steps = np.arange(0, n_steps + 1, record_every, dtype=np.int64)
    if rec_steps[-1] != n_steps:
        rec_steps = np.append(rec_steps, np.int64(n_steps))

    if params.eta is None:
        tab_ang, tab_val = params.profile._table_arrays
        states, max_drift, ok = _rk4_sphere(
            X0,
            params.omegas,
            params.kappa / params.n,
            float(h),
            n_steps,
            params.profile.kind_code,
            tab_ang,
            tab_val,
            rec_steps,
            float(RADIAL_STEP_INFLATION),
        )
        if not ok:
            raise BlowUpError("non-finite state during integration")
    else:
        states, max_drift = _integrate_python(params, X0, h, n_steps, rec_steps)

    times = rec_steps.astype(float) * h
    phis = np.arccos(np.clip(states[:, :, 0], -1.0, 1.0))
    mean_infl = np.asarray(params.profile.evaluate(phis)).mean(axis=1)
    order = np.linalg.norm(states.mean(axis=1), axis=1)
    return Trajectory(
        times=times,
        states=states,
        phis=phis,
        mean_influence=mean_infl,
        order_parameter=order,
        max_step_norm_drift=float(max_drift),
        dt=float(h),
        record_every=int(record_every),
    )


def split_transform(traj: Trajectory, omega) -> Trajectory:
    """Rotate a shared drift out of a trajectory: y_i(t) = exp(-t W) x_i(t).

    Requires W e = 0 (the rotation fixes the attraction point); the output
    then solves the coupling-only system with the same initial data, which
    callers verify by re-integration.
    """
    omega = np.asarray(omega, dtype=float)
    e = attraction_point(traj.ambient_dim - 1)
    if np.linalg.norm(omega @ e) > 1e-10:
        raise HypothesisViolatedError("the rotation generator must annihilate the attraction point")
    states = np.empty_like(traj.states)
    for k, t in enumerate(traj.times):
        r = skew_exponential(omega, -float(t))
        states[k] = traj.states[k] @ r.T
    phis = np.arccos(np.clip(states[:, :, 0], -1.0, 1.0))
    order = np.linalg.norm(states.mean(axis=1), axis=1)
    return Trajectory(
        times=traj.times.copy(),
        states=states,
        phis=phis,
        mean_influence=traj.mean_influence.copy(),
        order_parameter=order,
        max_step_norm_drift=traj.max_step_norm_drift,
        dt=traj.dt,
        record_every=traj.record_every,
    )
