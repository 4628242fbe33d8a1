"""Radial influence profiles.

A profile is a nonnegative, non-increasing bump of the polar angle from the
attraction point, normalized to 1 at angle 0 and identically zero beyond a
support radius beta < pi/2. Sphere-level evaluation composes the radial shape
with the polar angle, and the two share the same Lipschitz constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .geometry import polar_angles

VALIDATION_GRID = 100001  # resolves piecewise kinks to ~3e-5 rad on [0, pi]

KIND_LINEAR = "builtin-I1"
KIND_QUADRATIC = "builtin-I2"
KIND_TABLE = "table"


class DomainError(ValueError):
    """Angle outside [0, pi]."""


class EmptyConfigurationError(ValueError):
    """Mean influence of zero oscillators is undefined."""


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one profile condition, with the witnessing grid angle on failure."""

    name: str
    passed: bool
    witness: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class ProfileValidation:
    checks: tuple[ConditionCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class InfluenceProfile:
    """Radial influence shape with support radius ``support_beta``.

    ``lipschitz`` is the analytic Lipschitz constant when known at
    construction; ``lipschitz_estimate`` recomputes it from a dense grid.
    """

    name: str
    support_beta: float
    kind: str
    lipschitz: float
    _raw: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def evaluate(self, phi):
        """Profile value at polar angle(s) ``phi`` in [0, pi]."""
        phi = np.asarray(phi, dtype=float)
        if np.any(phi < 0.0) or np.any(phi > math.pi):
            raise DomainError("influence profile argument must lie in [0, pi]")
        out = self._raw(phi)
        return float(out) if out.ndim == 0 else out

    def evaluate_point(self, x, e=None):
        """Influence broadcast by a unit vector: the profile at its polar angle."""
        return self.evaluate(polar_angles(x, e))

    def mean_influence(self, X) -> float:
        """Average influence over a configuration of shape (N, D)."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyConfigurationError("configuration must contain at least one oscillator")
        return float(np.mean(self.evaluate_point(X)))

    def lipschitz_estimate(self, n: int = VALIDATION_GRID) -> float:
        """Largest difference quotient of the profile on an n-point grid over [0, pi]."""
        grid = np.linspace(0.0, math.pi, n)
        vals = self._raw(grid)
        return float(np.max(np.abs(np.diff(vals) / np.diff(grid))))

    def validate(self, n: int = VALIDATION_GRID) -> ProfileValidation:
        """Grid check of the four profile conditions; failures carry witnesses."""
        grid = np.linspace(0.0, math.pi, n)
        vals = self._raw(grid)
        checks = []

        rises = np.diff(vals) > 1e-12
        if rises.any():
            k = int(np.argmax(rises))
            checks.append(
                ConditionCheck("monotone", False, float(grid[k + 1]), "profile increases")
            )
        else:
            checks.append(ConditionCheck("monotone", True))

        beyond = grid >= self.support_beta
        bad = beyond & (vals != 0.0)
        neg = vals < 0.0
        if not 0.0 < self.support_beta < math.pi / 2:
            checks.append(
                ConditionCheck("support", False, self.support_beta, "beta outside (0, pi/2)")
            )
        elif bad.any():
            k = int(np.argmax(bad))
            checks.append(
                ConditionCheck("support", False, float(grid[k]), "nonzero beyond beta")
            )
        elif neg.any():
            k = int(np.argmax(neg))
            checks.append(ConditionCheck("support", False, float(grid[k]), "negative value"))
        else:
            checks.append(ConditionCheck("support", True))

        ok = abs(float(vals[0]) - 1.0) <= 1e-12
        checks.append(
            ConditionCheck("normalized", ok, None if ok else 0.0, f"value at 0 is {vals[0]!r}")
        )

        est = float(np.max(np.abs(np.diff(vals) / np.diff(grid))))
        checks.append(
            ConditionCheck("lipschitz", math.isfinite(est), None, f"grid estimate {est:.6g}")
        )
        return ProfileValidation(tuple(checks))

    @cached_property
    def _table_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Interpolation breakpoints extended to pi (empty for builtins)."""
        if self.table is None:
            return np.empty(0), np.empty(0)
        return _extend_to_pi(
            np.asarray(self.table[0], dtype=float), np.asarray(self.table[1], dtype=float)
        )

    @property
    def kind_code(self) -> int:
        return {KIND_LINEAR: 0, KIND_QUADRATIC: 1, KIND_TABLE: 2}[self.kind]


def _linear_raw(phi: np.ndarray) -> np.ndarray:
    return np.maximum(1.0 - phi, 0.0)


def _quadratic_raw(phi: np.ndarray) -> np.ndarray:
    return np.where(phi < 0.5, (2.0 * phi - 1.0) ** 2, 0.0)


def linear_cutoff_profile() -> InfluenceProfile:
    """Built-in ramp: 1 - phi on [0, 1], zero beyond."""
    return InfluenceProfile(
        name="linear-cutoff", support_beta=1.0, kind=KIND_LINEAR, lipschitz=1.0, _raw=_linear_raw
    )


def quadratic_cutoff_profile() -> InfluenceProfile:
    """Built-in parabola: (2 phi - 1)^2 on [0, 0.5], zero beyond.

    Steepest at the origin, where the slope is -4.
    """
    return InfluenceProfile(
        name="quadratic-cutoff",
        support_beta=0.5,
        kind=KIND_QUADRATIC,
        lipschitz=4.0,
        _raw=_quadratic_raw,
    )


def _extend_to_pi(angles: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if angles[-1] < math.pi:
        angles = np.append(angles, math.pi)
        values = np.append(values, 0.0)
    return angles, values


def table_profile(name: str, points, beta: float | None = None) -> InfluenceProfile:
    """Piecewise-linear profile from (angle, value) breakpoints.

    Breakpoints must start at angle 0 and be strictly increasing; the last
    breakpoint must carry value 0 and defines beta unless given explicitly.
    The profile is extended by zero out to pi.
    """
    pts = [(float(a), float(v)) for a, v in points]
    if len(pts) < 2:
        raise ValueError("table profile needs at least two breakpoints")
    angles = np.array([a for a, _ in pts])
    values = np.array([v for _, v in pts])
    if angles[0] != 0.0:
        raise ValueError("table profile must start at angle 0")
    if np.any(np.diff(angles) <= 0):
        raise ValueError("table angles must be strictly increasing")
    if values[-1] != 0.0:
        raise ValueError("table profile must end with value 0 at its support radius")
    if beta is None:
        beta = float(angles[-1])
    elif not math.isclose(beta, float(angles[-1]), rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"beta {beta!r} disagrees with final table angle {angles[-1]!r}")
    if not 0.0 < beta < math.pi / 2:
        raise ValueError(f"support radius must lie in (0, pi/2), got {beta!r}")
    ext_angles, ext_values = _extend_to_pi(angles, values)
    lip = float(np.max(np.abs(np.diff(ext_values) / np.diff(ext_angles))))

    def raw(phi: np.ndarray, _a=ext_angles, _v=ext_values) -> np.ndarray:
        return np.interp(phi, _a, _v)

    return InfluenceProfile(
        name=name,
        support_beta=float(beta),
        kind=KIND_TABLE,
        lipschitz=lip,
        _raw=raw,
        table=(tuple(angles), tuple(values)),
    )


def profile_from_spec(spec: dict) -> InfluenceProfile:
    """Build a profile from its config mapping {name, kind, beta, table?}."""
    kind = spec.get("kind")
    if kind == KIND_LINEAR:
        p = linear_cutoff_profile()
    elif kind == KIND_QUADRATIC:
        p = quadratic_cutoff_profile()
    elif kind == KIND_TABLE:
        p = table_profile(spec.get("name", "table"), spec["table"], spec.get("beta"))
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    beta = spec.get("beta")
    if beta is not None and not math.isclose(p.support_beta, float(beta), abs_tol=1e-12):
        raise ValueError(f"profile kind {kind!r} has beta {p.support_beta}, config says {beta}")
    name = spec.get("name")
    if name and name != p.name:
        p = InfluenceProfile(
            name=name,
            support_beta=p.support_beta,
            kind=p.kind,
            lipschitz=p.lipschitz,
            _raw=p._raw,
            table=p.table,
        )
    return p


def profile_spec(profile: InfluenceProfile) -> dict:
    """Config mapping for a profile (inverse of profile_from_spec)."""
    spec = {"name": profile.name, "kind": profile.kind, "beta": profile.support_beta}
    if profile.table is not None:
        angles, values = profile.table
        spec["table"] = [[a, v] for a, v in zip(angles, values)]
    return spec
