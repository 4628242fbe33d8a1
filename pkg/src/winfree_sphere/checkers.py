"""Closed-form thresholds and trajectory-level verdicts.

Every quantitative claim the harness can test is expressed either as a pure
formula (critical coupling, absorption-time bound, cross-ratio, ...) or as a
checker that consumes a finished trajectory and returns a Verdict. Checkers
never raise on a failed conclusion: failures are data. They do mark verdicts
vacuous when the hypothesis of the underlying statement is not met, so a
vacuous verdict is reported rather than silently skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import LengthMismatchError, ModelParams, Trajectory, integrate
from .geometry import attraction_point, skew_exponential, structured_frequency
from .influence import InfluenceProfile

CHORD_FLOOR = 1e-14  # below this a pairwise distance is declared converged


class PreconditionUnmetError(ValueError):
    """A pure computation was asked for outside its stated hypothesis."""


class BoundInapplicableError(ValueError):
    """The absorption-time bound degenerates for starting angles at or past pi/2."""


class DegenerateProfileError(ValueError):
    """The profile vanishes where the formula needs it positive."""


class TrajectoryTooShortError(ValueError):
    """The trajectory ends before the time the check needs to inspect."""


class NonPositiveValuesError(ValueError):
    """Too few values above the convergence floor to fit a rate."""


class DegenerateQuadrupleError(ValueError):
    """Cross-ratio needs four pairwise-distinct points."""


class VanishingInnerProductError(ValueError):
    """The conserved ratio divides by an inner product that is numerically zero."""


@dataclass
class Verdict:
    """One checked statement: the comparison made, its outcome, and a witness.

    ``vacuous`` flags verdicts whose hypothesis failed; they do not count as
    failures. ``witness`` is (time, index) of the worst offender when a check
    fails, or other small structured evidence.
    """

    statement: str
    threshold: float
    observed: float
    tolerance: float
    passed: bool
    witness: tuple | None = None
    vacuous: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.statement,
            "threshold": self.threshold,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
            "witness": list(self.witness) if self.witness is not None else None,
            "vacuous": bool(self.vacuous),
            "note": self.note,
        }


def _vacuous(statement: str, note: str) -> Verdict:
    return Verdict(
        statement=statement,
        threshold=math.nan,
        observed=math.nan,
        tolerance=math.nan,
        passed=False,
        vacuous=True,
        note=f"precondition unmet: {note}",
    )


@dataclass(frozen=True)
class CapCondition:
    """Hypothesis for the invariant cap: the pull at the rim beats every rotation."""

    gamma: float
    kappa: float
    max_op_norm: float
    profile: InfluenceProfile

    def margin(self) -> float:
        return self.kappa * math.sin(self.gamma) * float(
            self.profile.evaluate(self.gamma)
        ) - self.max_op_norm

    def satisfied(self) -> bool:
        return self.margin() > 0.0


@dataclass(frozen=True)
class StructuredFrequency:
    """Rotation acting only in the plane spanned by the attraction point and an axis.

    The realized generator maps axis -> -nu e and e -> nu axis, annihilates the
    orthogonal complement of that plane, and has operator norm |nu|.
    """

    nu: float
    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0]))

    @property
    def op_norm(self) -> float:
        return abs(self.nu)

    def matrix(self, dim: int) -> np.ndarray:
        return structured_frequency(self.nu, self.axis, dim)


def realize_structured(nus: Sequence[float], axes, dim: int) -> np.ndarray:
    """(N, D, D) stack of structured generators; a shared default axis when ``axes`` is None."""
    nus = np.asarray(nus, dtype=float)
    if axes is None:
        axis = np.zeros(dim + 1)
        axis[1] = 1.0
        axes = [axis] * len(nus)
    return np.stack([structured_frequency(float(nu), ax, dim) for nu, ax in zip(nus, axes)])


# ---------------------------------------------------------------------------
# closed-form thresholds


def critical_coupling(
    n: int, max_op_norm: float, beta: float, gamma: float, profile: InfluenceProfile
) -> float:
    """Coupling above which every oscillator is absorbed into the support cap."""
    if not 0.0 < gamma < beta < math.pi / 2:
        raise PreconditionUnmetError("need 0 < gamma < beta < pi/2")
    i_gamma = float(profile.evaluate(gamma))
    if i_gamma <= 0.0:
        raise DegenerateProfileError("profile vanishes at gamma")
    return n * max_op_norm / (math.sin(beta) * i_gamma)


def transition_bound(
    n: int,
    kappa: float,
    beta: float,
    gamma: float,
    profile: InfluenceProfile,
    phi0: float,
    op_norm_j: float,
) -> tuple[float, float]:
    """Absorbed-by angle and a time bound for one oscillator starting at ``phi0``.

    Returns (beta_star, t_j): past t_j the oscillator stays inside the support
    cap. For heterogeneous ensembles pass the largest operator norm to get the
    uniform bound. The bound needs phi0 < pi/2 because its rate constant uses
    cos(phi0) as a positive lower bound; beyond that it refuses rather than
    report a negative time.
    """
    kappa_c = critical_coupling(n, op_norm_j, beta, gamma, profile)
    if kappa <= kappa_c:
        raise PreconditionUnmetError(f"kappa {kappa} must exceed critical coupling {kappa_c}")
    if phi0 >= math.pi / 2:
        raise BoundInapplicableError("starting angle at or past pi/2 degenerates the bound")
    i_gamma = float(profile.evaluate(gamma))
    arg = n * op_norm_j / (kappa * i_gamma)
    if phi0 >= math.pi - math.asin(arg):
        raise PreconditionUnmetError("starting angle violates the admissible range")
    beta_star = math.asin((kappa_c / kappa) * math.sin(beta))
    if phi0 <= beta:
        return beta_star, 0.0
    t_j = (n / (kappa * i_gamma * math.cos(phi0))) * math.log(
        (phi0 - beta_star) / (beta - beta_star)
    )
    return beta_star, t_j


def absorption_time(
    params: ModelParams, beta: float, gamma: float, phis0: np.ndarray
) -> float:
    """Largest per-oscillator bound over those starting outside the support cap."""
    t = 0.0
    for j, phi0 in enumerate(np.asarray(phis0, dtype=float)):
        if phi0 > beta:
            _, t_j = transition_bound(
                params.n, params.kappa, beta, gamma, params.profile, float(phi0),
                params.max_op_norm,
            )
            t = max(t, t_j)
    return t


# ---------------------------------------------------------------------------
# rate fitting


def fit_decay_rate(times, values, floor: float = CHORD_FLOOR) -> float:
    """Least-squares slope of log(values) against time, ignoring values <= floor."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = values > floor
    if int(mask.sum()) < 2:
        raise NonPositiveValuesError("fewer than two values above the convergence floor")
    return float(np.polyfit(times[mask], np.log(values[mask]), 1)[0])


def fit_window_slope(
    times, values, t0: float, t1: float, floor: float = CHORD_FLOOR
) -> float | None:
    """Slope of log(values) restricted to [t0, t1]; None if the window degenerates."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    sel = (times >= t0) & (times <= t1) & (values > floor)
    if int(sel.sum()) < 2:
        return None
    return float(np.polyfit(times[sel], np.log(values[sel]), 1)[0])


# ---------------------------------------------------------------------------
# trajectory checkers


def cap_invariance_check(params: ModelParams, gamma: float, traj: Trajectory) -> Verdict:
    """The cap of radius gamma traps the flow once the rim condition holds."""
    cond = CapCondition(gamma, params.kappa, params.max_op_norm, params.profile)
    if not cond.satisfied():
        return _vacuous("cap-invariance", f"rim condition margin {cond.margin():.3g} <= 0")
    if float(traj.phis[0].max()) > gamma + 1e-12:
        return _vacuous("cap-invariance", "initial data not inside the cap")
    observed = float(traj.phis.max())
    k, j = np.unravel_index(int(np.argmax(traj.phis)), traj.phis.shape)
    return Verdict(
        statement="cap-invariance",
        threshold=gamma,
        observed=observed,
        tolerance=1e-6,
        passed=observed <= gamma + 1e-6,
        witness=(float(traj.times[k]), int(j)),
    )


def entry_check(traj: Trajectory, beta: float, t_bound: float) -> Verdict:
    """All oscillators sit inside the support cap past t_bound, with no re-exit."""
    if traj.final_time <= t_bound:
        raise TrajectoryTooShortError(
            f"trajectory ends at {traj.final_time}, need to see past {t_bound}"
        )
    after = traj.times > t_bound
    observed = float(traj.phis[after].max())
    passed = observed <= beta + 1e-6
    witness = None
    if not passed:
        sub = traj.phis[after]
        k, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        witness = (float(traj.times[after][k]), int(j))

    first_entry = np.full(traj.n, math.nan)
    for j in range(traj.n):
        inside = traj.phis[:, j] < beta
        if inside.any():
            k0 = int(np.argmax(inside))
            first_entry[j] = float(traj.times[k0])
            reexit = traj.phis[k0:, j] > beta + 1e-6
            if reexit.any():
                k = k0 + int(np.argmax(reexit))
                passed = False
                witness = (float(traj.times[k]), j)
                observed = max(observed, float(traj.phis[k, j]))
    latest = float(np.nanmax(first_entry)) if np.isfinite(first_entry).any() else math.nan
    return Verdict(
        statement="support-cap-entry",
        threshold=beta,
        observed=observed,
        tolerance=1e-6,
        passed=passed,
        witness=witness,
        note=f"latest first entry at t = {latest:.6g}",
    )


def l1_distance(A, B) -> float:
    """Sum over oscillators of the Euclidean distance between paired states."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise LengthMismatchError(f"configuration shapes differ: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B, axis=1).sum())


def stability_check(
    params: ModelParams,
    X0,
    X0_tilde,
    gamma: float,
    T: float,
    dt: float = 1e-3,
    record_every: int = 1,
) -> Verdict:
    """Paired runs contract in the summed distance at least at the slower candidate rate.

    The statement's rate constant is C = cos(gamma) I(gamma) - Lip(I); its
    derivation produces kappa * C. Both are reported and the pass bar is the
    slower of the two, at 5 percent slack.
    """
    i_gamma = float(params.profile.evaluate(gamma))
    c_rate = math.cos(gamma) * i_gamma - params.profile.lipschitz
    if c_rate <= 0.0:
        raise PreconditionUnmetError(f"contraction constant {c_rate:.3g} is not positive")
    ta = integrate(params, X0, dt, T, record_every)
    tb = integrate(params, X0_tilde, dt, T, record_every)
    containment = max(float(ta.phis.max()), float(tb.phis.max()))
    if containment > gamma + 1e-6:
        return _vacuous("l1-contraction", f"a run left the cap (max angle {containment:.6g})")
    dist = np.linalg.norm(ta.states - tb.states, axis=2).sum(axis=1)
    rate = min(c_rate, params.kappa * c_rate)
    note = f"C = {c_rate:.6g}, kappa*C = {params.kappa * c_rate:.6g}"
    slope = fit_window_slope(ta.times, dist, T / 4.0, T)
    if slope is None:
        return Verdict(
            statement="l1-contraction",
            threshold=-rate * 0.95,
            observed=0.0,
            tolerance=0.0,
            passed=True,
            note=note + "; distance identically below floor (degenerate pass)",
        )
    supports = [
        name
        for name, r in (("C", c_rate), ("kappa*C", params.kappa * c_rate))
        if slope <= -r * 0.95
    ]
    note += f"; fitted slope supports: {supports or 'neither'}"
    return Verdict(
        statement="l1-contraction",
        threshold=-rate * 0.95,
        observed=slope,
        tolerance=rate * 0.05,
        passed=slope <= -rate * 0.95,
        note=note,
    )


def pairwise_monotonicity_check(traj: Trajectory, beta: float) -> Verdict:
    """Pairwise angles never rise above their initial values (identical generators)."""
    if traj.n == 1:
        return Verdict(
            statement="pairwise-monotonicity",
            threshold=0.0,
            observed=0.0,
            tolerance=1e-6,
            passed=True,
            note="single oscillator, nothing to compare",
        )
    init = traj.pairwise_angles(0)
    iu = np.triu_indices(traj.n, k=1)
    if float(init[iu].max()) >= math.pi / 2 - beta:
        return _vacuous(
            "pairwise-monotonicity",
            f"initial pairwise angle {init[iu].max():.6g} not below pi/2 - beta",
        )
    gram = np.einsum("mni,mki->mnk", traj.states, traj.states)
    angles = np.arccos(np.clip(gram, -1.0, 1.0))
    excess = angles[:, iu[0], iu[1]] - init[iu][None, :]
    observed = float(excess.max())
    k, p = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return Verdict(
        statement="pairwise-monotonicity",
        threshold=0.0,
        observed=observed,
        tolerance=1e-6,
        passed=observed <= 1e-6,
        witness=(float(traj.times[k]), int(iu[0][p])),
    )


def aggregation_check(params: ModelParams, gamma: float, traj: Trajectory) -> Verdict:
    """Chords shrink at least at rate kappa cos(gamma) I(gamma), pointwise and fitted."""
    if not params.identical:
        return _vacuous("exponential-aggregation", "generators are not identical")
    cond = CapCondition(gamma, params.kappa, params.max_op_norm, params.profile)
    if not cond.satisfied():
        return _vacuous("exponential-aggregation", "rim condition fails at gamma")
    if float(traj.phis[0].max()) > gamma + 1e-12:
        return _vacuous("exponential-aggregation", "initial data not inside the cap")
    lam = params.kappa * math.cos(gamma) * float(params.profile.evaluate(gamma))

    iu = np.triu_indices(traj.n, k=1)
    gram = np.einsum("mni,mki->mnk", traj.states, traj.states)
    d2 = np.clip(2.0 - 2.0 * gram[:, iu[0], iu[1]], 0.0, None)
    chords = np.sqrt(d2)
    c0 = chords[0]
    envelope = c0[None, :] * np.exp(-lam * traj.times)[:, None] * (1.0 + 1e-6)
    live = chords > CHORD_FLOOR
    violation = np.where(live, chords - envelope, -np.inf)
    worst = float(violation.max()) if violation.size else -math.inf
    pointwise_ok = worst <= 0.0

    max_chord = chords.max(axis=1) if chords.size else np.zeros(len(traj.times))
    slope = fit_window_slope(traj.times, max_chord, traj.final_time / 4.0, traj.final_time)
    if slope is None:
        return Verdict(
            statement="exponential-aggregation",
            threshold=-lam * 0.95,
            observed=0.0,
            tolerance=lam * 0.05,
            passed=pointwise_ok,
            note="chords below convergence floor; fitted rate not applicable",
        )
    passed = pointwise_ok and slope <= -lam * 0.95
    witness = None
    if not pointwise_ok:
        k, p = np.unravel_index(int(np.argmax(violation)), violation.shape)
        witness = (float(traj.times[k]), int(iu[0][p]))
    return Verdict(
        statement="exponential-aggregation",
        threshold=-lam * 0.95,
        observed=slope,
        tolerance=lam * 0.05,
        passed=passed,
        witness=witness,
        note=f"rate lambda = {lam:.6g}; worst pointwise excess {worst:.3g}",
    )


def order_parameter(X) -> float:
    """Norm of the centroid; 1 means full aggregation at a single point."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("configuration must be a nonempty (N, D) array")
    return float(np.linalg.norm(X.mean(axis=0)))


@dataclass(frozen=True)
class DichotomyResult:
    """Long-run classification of an identical-generator run."""

    outcome: str  # "synchronized" | "escaped" | "undecided"
    r_monotone: bool
    e3_satisfied: bool
    final_r: float
    window_max_influence: float
    window_min_phi: float
    note: str = ""


def dichotomy_classify(traj: Trajectory, profile: InfluenceProfile) -> DichotomyResult:
    """Synchronized (centroid norm -> 1) versus escaped (influence dead, outside support).

    Finite-run conventions: synchronized means final R > 1 - 1e-3; escaped
    means the mean influence stayed below 1e-12 over the final fifth of the
    run with every angle at least beta - 1e-6 there. Undecided is a
    first-class outcome. Requires identical generators (caller's duty) and
    initial pairwise angles below pi/2 - beta, which is checked and reported.
    """
    beta = profile.support_beta
    iu = np.triu_indices(traj.n, k=1)
    if traj.n > 1:
        e3 = float(traj.pairwise_angles(0)[iu].max()) < math.pi / 2 - beta
    else:
        e3 = True
    dr = np.diff(traj.order_parameter)
    r_monotone = bool(dr.min() >= -1e-7) if len(dr) else True
    t_lo = traj.final_time - 0.2 * (traj.final_time - float(traj.times[0]))
    window = traj.times >= t_lo
    if window.sum() < 2:
        window[-2:] = True
    wmax_ic = float(traj.mean_influence[window].max())
    wmin_phi = float(traj.phis[window].min())
    final_r = float(traj.order_parameter[-1])
    if final_r > 1.0 - 1e-3:
        outcome = "synchronized"
    elif wmax_ic < 1e-12 and wmin_phi >= beta - 1e-6:
        outcome = "escaped"
    else:
        outcome = "undecided"
    return DichotomyResult(
        outcome=outcome,
        r_monotone=r_monotone,
        e3_satisfied=e3,
        final_r=final_r,
        window_max_influence=wmax_ic,
        window_min_phi=wmin_phi,
        note=f"window starts at t = {t_lo:.6g}",
    )


def free_flow_deviation(traj: Trajectory, omega, t_start: float) -> float:
    """Largest gap between the recorded tail and pure rotation from the window start."""
    omega = np.asarray(omega, dtype=float)
    if t_start > traj.final_time:
        raise TrajectoryTooShortError(
            f"trajectory ends at {traj.final_time}, window starts at {t_start}"
        )
    k0 = int(np.argmax(traj.times >= t_start))
    x0 = traj.states[k0]
    t0 = float(traj.times[k0])
    worst = 0.0
    for k in range(k0, len(traj.times)):
        r = skew_exponential(omega, float(traj.times[k]) - t0)
        worst = max(worst, float(np.abs(traj.states[k] - x0 @ r.T).max()))
    return worst


def cross_ratio(X, i1: int, i2: int, i3: int, i4: int) -> float:
    """Squared-chord cross-ratio of four oscillators, conserved by identical models."""
    if len({i1, i2, i3, i4}) != 4:
        raise DegenerateQuadrupleError("indices must be pairwise distinct")
    X = np.asarray(X, dtype=float)
    pts = X[[i1, i2, i3, i4]]
    d12 = np.linalg.norm(pts[0] - pts[1])
    d34 = np.linalg.norm(pts[2] - pts[3])
    d23 = np.linalg.norm(pts[1] - pts[2])
    d41 = np.linalg.norm(pts[3] - pts[0])
    if min(d12, d34, d23, d41) <= 1e-12:
        raise DegenerateQuadrupleError("coincident points in the quadruple")
    return float((d12**2 * d34**2) / (d23**2 * d41**2))


def sn_membership(omega) -> np.ndarray | None:
    """A unit kernel vector orthogonal to the attraction point, when one exists.

    Intersects the numerical kernel of the generator with the orthogonal
    complement of e; returns None when the intersection is trivial.
    """
    omega = np.asarray(omega, dtype=float)
    d = omega.shape[0]
    e = attraction_point(d - 1)
    _, s, vt = np.linalg.svd(omega)
    tol = 1e-12 * max(1.0, float(s[0]))
    kernel = vt[s <= tol].T
    if kernel.shape[1] == 0:
        return None
    w = kernel.T @ e
    wn = np.linalg.norm(w)
    if wn <= 1e-12:
        v = kernel[:, 0]
    elif kernel.shape[1] == 1:
        return None
    else:
        w_hat = w / wn
        j = int(np.argmin(np.abs(w_hat)))
        c = np.zeros(kernel.shape[1])
        c[j] = 1.0
        c = c - float(c @ w_hat) * w_hat
        c = c / np.linalg.norm(c)
        v = kernel @ c
    v = v / np.linalg.norm(v)
    if np.linalg.norm(omega @ v) > 1e-10 or abs(float(v @ e)) > 1e-10:
        return None
    return v


def motion_constant_ratio(X, i: int, j: int, v) -> float:
    """Squared chord over the product of inner products with a conserved axis."""
    X = np.asarray(X, dtype=float)
    v = np.asarray(v, dtype=float)
    ai = float(X[i] @ v)
    aj = float(X[j] @ v)
    chord = float(np.linalg.norm(X[i] - X[j]))
    if chord <= 1e-12:
        return 0.0
    if min(abs(ai), abs(aj)) <= 1e-12:
        raise VanishingInnerProductError("inner product with the conserved axis is zero")
    return chord**2 / (ai * aj)


def inner_decay_check(traj: Trajectory, v, lam: float) -> Verdict:
    """Inner products with the conserved axis decay at least at half the chord rate."""
    inn = np.abs(traj.inner_with(v))
    t0, t1 = traj.final_time / 4.0, traj.final_time
    slopes = []
    for j in range(traj.n):
        s = fit_window_slope(traj.times, inn[:, j], t0, t1)
        if s is not None:
            slopes.append(s)
    bar = -(lam / 2.0) * 0.9
    if not slopes:
        return Verdict(
            statement="inner-product-decay",
            threshold=bar,
            observed=0.0,
            tolerance=abs(lam) * 0.05,
            passed=True,
            note="inner products below convergence floor (degenerate pass)",
        )
    observed = max(slopes)
    return Verdict(
        statement="inner-product-decay",
        threshold=bar,
        observed=observed,
        tolerance=abs(lam) * 0.1 / 2.0,
        passed=observed <= bar,
        note=f"chord rate lambda = {lam:.6g}",
    )


def angle_inequality_check(params: ModelParams, traj: Trajectory, slack: float | None = None) -> Verdict:
    """Discrete angle quotients obey the per-oscillator differential bound.

    The quotient between consecutive records must not exceed
    op_norm_j - kappa sin(phi_j) I_c by more than O(step) slack.
    """
    spacing = traj.dt * traj.record_every
    if slack is None:
        slack = 10.0 * spacing
    op_norms = np.array([float(np.linalg.norm(w, 2)) for w in params.omegas])
    dphi = np.diff(traj.phis, axis=0) / np.diff(traj.times)[:, None]
    bound = op_norms[None, :] - params.kappa * np.sin(traj.phis[:-1]) * traj.mean_influence[
        :-1, None
    ]
    excess = dphi - bound
    observed = float(excess.max())
    k, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return Verdict(
        statement="angle-rate-bound",
        threshold=0.0,
        observed=observed,
        tolerance=slack,
        passed=observed <= slack,
        witness=(float(traj.times[k]), int(j)),
    )


def cap_entrapment_check(params: ModelParams, traj: Trajectory, gamma: float) -> Verdict:
    """Oscillators that start inside radius gamma and beat the per-oscillator rim
    condition stay inside for the whole run."""
    beta = params.profile.support_beta
    if not gamma < beta:
        return _vacuous("per-oscillator-entrapment", "gamma must be below the support radius")
    rim = (params.kappa / params.n) * math.sin(gamma) * float(params.profile.evaluate(gamma))
    op_norms = np.array([float(np.linalg.norm(w, 2)) for w in params.omegas])
    eligible = (op_norms < rim) & (traj.phis[0] <= gamma)
    if not eligible.any():
        return _vacuous("per-oscillator-entrapment", "no oscillator meets the hypothesis")
    observed = float(traj.phis[:, eligible].max())
    passed = observed <= gamma + 1e-6
    witness = None
    if not passed:
        sub = traj.phis[:, eligible]
        k, jj = np.unravel_index(int(np.argmax(sub)), sub.shape)
        witness = (float(traj.times[k]), int(np.flatnonzero(eligible)[jj]))
    return Verdict(
        statement="per-oscillator-entrapment",
        threshold=gamma,
        observed=observed,
        tolerance=1e-6,
        passed=passed,
        witness=witness,
        note=f"{int(eligible.sum())} of {params.n} oscillators eligible",
    )


def tail_angle_bound_check(params: ModelParams, traj: Trajectory, gamma: float) -> Verdict:
    """Tail minima of the angles reach the resting band predicted by the rim condition.

    A finite-horizon proxy for a liminf claim: the minimum over the final
    quarter of the run stands in for the limit inferior and is labeled as such.
    """
    beta = params.profile.support_beta
    i_gamma = float(params.profile.evaluate(gamma))
    rim = (params.kappa / params.n) * math.sin(gamma) * i_gamma
    if params.max_op_norm >= rim:
        return _vacuous("tail-angle-bound", "uniform rim condition fails at gamma")
    if not (traj.phis[0] <= gamma).any():
        return _vacuous("tail-angle-bound", "no oscillator starts inside radius gamma")
    tail = traj.times >= traj.final_time * 0.75
    op_norms = np.array([float(np.linalg.norm(w, 2)) for w in params.omegas])
    args = params.n * op_norms / (params.kappa * i_gamma)
    admissible = traj.phis[0] < math.pi - np.arcsin(np.clip(args, 0.0, 1.0))
    if not admissible.any():
        return _vacuous("tail-angle-bound", "no starting angle in the admissible range")
    bounds = np.arcsin(np.clip(args, 0.0, 1.0))
    tail_min = traj.phis[tail].min(axis=0)
    excess = tail_min[admissible] - bounds[admissible]
    observed = float(excess.max())
    j = int(np.flatnonzero(admissible)[int(np.argmax(excess))])
    return Verdict(
        statement="tail-angle-bound",
        threshold=0.0,
        observed=observed,
        tolerance=1e-3,
        passed=observed <= 1e-3,
        witness=(traj.final_time, j),
        note="tail minimum over the final quarter stands in for the liminf",
    )


def product_limit_check(traj: Trajectory, profile: InfluenceProfile) -> Verdict:
    """The damped-chord product is negligible by the end of a long identical run."""
    x = traj.final_state
    ic = float(traj.mean_influence[-1])
    iu = np.triu_indices(traj.n, k=1)
    gram = x @ x.T
    d2 = np.clip(2.0 - 2.0 * gram[iu], 0.0, None)
    cos_e = x[:, 0]
    value = ic * np.abs(cos_e[iu[0]] + cos_e[iu[1]]) * d2
    observed = float(value.max()) if value.size else 0.0
    return Verdict(
        statement="damped-chord-product",
        threshold=0.0,
        observed=observed,
        tolerance=1e-6,
        passed=observed <= 1e-6,
        note=f"evaluated at t = {traj.final_time:.6g}",
    )
