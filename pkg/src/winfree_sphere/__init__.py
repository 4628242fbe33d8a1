"""Simulator and verification harness for Winfree-type synchronization on the unit sphere."""

from .checkers import (
    CapCondition,
    StructuredFrequency,
    Verdict,
    absorption_time,
    aggregation_check,
    cap_invariance_check,
    critical_coupling,
    cross_ratio,
    dichotomy_classify,
    entry_check,
    fit_decay_rate,
    inner_decay_check,
    l1_distance,
    motion_constant_ratio,
    order_parameter,
    pairwise_monotonicity_check,
    sn_membership,
    stability_check,
    transition_bound,
)
from .dynamics import ModelParams, Trajectory, integrate, rhs, split_transform
from .equilibria import (
    EquilibriumState,
    LambdaEquation,
    build_equilibrium,
    classify_s2,
    classify_zero_frequency,
    residual,
    solve_lambda,
)
from .geometry import (
    angle,
    attraction_point,
    operator_norm,
    random_in_cap,
    renormalize,
    skew_exponential,
    tangent_toward,
)
from .influence import (
    InfluenceProfile,
    linear_cutoff_profile,
    quadratic_cutoff_profile,
    table_profile,
)
from .scalar import ScalarParams, embed_circle, integrate_scalar, lift_frequencies, scalar_rhs

__version__ = "0.1.0"
