import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from winfree_sphere import geometry as geo
from winfree_sphere import influence as infl


class TestEvaluate:
    def test_linear_at_zero(self, linear_profile):
        assert linear_profile.evaluate(0.0) == 1.0

    def test_linear_beyond_support(self, linear_profile):
        assert linear_profile.evaluate(2.0) == 0.0

    def test_quadratic_quarter(self, quadratic_profile):
        assert quadratic_profile.evaluate(0.25) == pytest.approx(0.25, abs=1e-15)

    def test_exact_zero_at_and_past_beta(self, linear_profile, quadratic_profile):
        for p in (linear_profile, quadratic_profile):
            grid = np.linspace(p.support_beta, math.pi, 100)
            assert np.all(p.evaluate(grid) == 0.0)

    def test_domain_checked(self, linear_profile):
        with pytest.raises(infl.DomainError):
            linear_profile.evaluate(-0.1)
        with pytest.raises(infl.DomainError):
            linear_profile.evaluate(math.pi + 0.1)

    @given(st.floats(0.0, math.pi, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_nonnegative(self, phi):
        assert infl.linear_cutoff_profile().evaluate(phi) >= 0.0
        assert infl.quadratic_cutoff_profile().evaluate(phi) >= 0.0


class TestEvaluatePoint:
    def test_at_attraction_point(self, linear_profile):
        assert linear_profile.evaluate_point(geo.attraction_point(2)) == 1.0

    def test_orthogonal_point_outside_support(self, linear_profile):
        assert linear_profile.evaluate_point(np.array([0.0, 1.0, 0.0])) == 0.0

    def test_circle_point(self, linear_profile):
        x = np.array([math.cos(0.5), math.sin(0.5)])
        assert linear_profile.evaluate_point(x) == pytest.approx(0.5, abs=1e-12)

    def test_matches_polar_angle_composition(self, quadratic_profile, rng):
        for _ in range(50):
            x = geo.random_unit_vector(2, rng)
            phi = geo.angle(x, geo.attraction_point(2))
            assert quadratic_profile.evaluate_point(x) == pytest.approx(
                quadratic_profile.evaluate(phi), abs=1e-15
            )


class TestMeanInfluence:
    def test_all_at_attraction_point(self, linear_profile):
        X = np.tile(geo.attraction_point(2), (4, 1))
        assert linear_profile.mean_influence(X) == 1.0

    def test_all_outside_support(self, linear_profile, rng):
        X = np.stack(
            [np.array([math.cos(a), math.sin(a)]) for a in rng.uniform(1.2, math.pi, 6)]
        )
        assert linear_profile.mean_influence(X) == 0.0

    def test_two_particle_average(self, linear_profile):
        X = np.array(
            [
                [math.cos(0.2), math.sin(0.2)],
                [math.cos(0.6), math.sin(0.6)],
            ]
        )
        assert linear_profile.mean_influence(X) == pytest.approx(0.6, abs=1e-12)

    def test_empty_configuration(self, linear_profile):
        with pytest.raises(infl.EmptyConfigurationError):
            linear_profile.mean_influence(np.zeros((0, 3)))

    @given(st.integers(0, 1000))
    @settings(max_examples=50, deadline=None)
    def test_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        X = np.stack([geo.random_unit_vector(2, rng) for _ in range(6)])
        p = infl.linear_cutoff_profile()
        perm = rng.permutation(6)
        assert p.mean_influence(X) == pytest.approx(p.mean_influence(X[perm]), abs=1e-15)


class TestLipschitz:
    def test_linear_estimate(self, linear_profile):
        # difference quotients of a unit-slope ramp peak at 1
        assert linear_profile.lipschitz_estimate() == pytest.approx(1.0, abs=1e-9)

    def test_quadratic_estimate(self, quadratic_profile):
        # the parabola (2x-1)^2 has derivative 8x-4, steepest at the origin: 4
        assert quadratic_profile.lipschitz_estimate() == pytest.approx(4.0, abs=1e-3)
        assert quadratic_profile.lipschitz == 4.0

    def test_flat_zero_table_profile(self):
        dead = infl.table_profile("dead", [[0.0, 0.0], [1.0, 0.0]])
        assert dead.lipschitz_estimate() == 0.0

    def test_table_profile_exact_constant(self):
        p = infl.table_profile("shallow", [[0.0, 1.0], [1.5, 0.0]])
        assert p.lipschitz == pytest.approx(1.0 / 1.5, abs=1e-15)
        assert p.lipschitz_estimate() == pytest.approx(1.0 / 1.5, abs=1e-9)

    def test_sphere_level_bound_matches_radial_constant(self, rng):
        # The radial constant controls point evaluations through the geodesic
        # angle; for the chord it holds only up to the pi/2 arc distortion
        # (same-meridian pairs saturate it, so the undistorted chord bound fails).
        for p in (infl.linear_cutoff_profile(), infl.quadratic_cutoff_profile()):
            xs = np.stack([geo.random_unit_vector(2, rng) for _ in range(10000)])
            ys = np.stack([geo.random_unit_vector(2, rng) for _ in range(10000)])
            lhs = np.abs(p.evaluate_point(xs) - p.evaluate_point(ys))
            geodesic = np.arccos(np.clip((xs * ys).sum(axis=1), -1.0, 1.0))
            chord = np.linalg.norm(xs - ys, axis=1)
            assert np.all(lhs <= p.lipschitz * geodesic + 1e-9)
            assert np.all(lhs <= p.lipschitz * (math.pi / 2) * chord + 1e-9)

    def test_plain_chord_bound_has_a_counterexample(self):
        # two points on one meridian at angles 0 and 1: the value gap is 1 but
        # the chord is 2 sin(1/2) < 1
        p = infl.linear_cutoff_profile()
        x = geo.attraction_point(1)
        y = np.array([math.cos(1.0), math.sin(1.0)])
        gap = abs(p.evaluate_point(x) - p.evaluate_point(y))
        assert gap > p.lipschitz * float(np.linalg.norm(x - y))


class TestValidate:
    def test_builtins_pass_all_conditions(self, linear_profile, quadratic_profile):
        for p in (linear_profile, quadratic_profile):
            rep = p.validate()
            assert rep.all_pass, [c for c in rep.checks if not c.passed]

    def test_cosine_fails_support(self):
        # cos has no compact support inside the quarter circle
        angles = np.linspace(0.0, math.pi, 200)
        pts = [[float(a), float(np.cos(a))] for a in angles[:-1]] + [[math.pi, 0.0]]
        pts[-1][1] = 0.0
        p = infl.InfluenceProfile(
            name="cosine",
            support_beta=1.0,
            kind=infl.KIND_TABLE,
            lipschitz=1.0,
            _raw=lambda phi: np.cos(np.asarray(phi, dtype=float)),
        )
        rep = p.validate()
        assert not rep["support"].passed
        assert rep["support"].witness is not None

    def test_rising_profile_fails_monotonicity(self):
        p = infl.InfluenceProfile(
            name="bump",
            support_beta=1.0,
            kind=infl.KIND_TABLE,
            lipschitz=1.0,
            _raw=lambda phi: np.where(np.asarray(phi) < 1.0, np.sin(np.asarray(phi) * math.pi), 0.0),
        )
        rep = p.validate()
        assert not rep["monotone"].passed
        assert not rep["normalized"].passed

    @given(st.integers(0, 100))
    @settings(max_examples=30, deadline=None)
    def test_builtin_monotone_on_random_grids(self, seed):
        rng = np.random.default_rng(seed)
        grid = np.sort(rng.uniform(0.0, math.pi, 500))
        for p in (infl.linear_cutoff_profile(), infl.quadratic_cutoff_profile()):
            vals = p.evaluate(grid)
            assert np.all(np.diff(vals) <= 1e-15)


class TestTableProfiles:
    def test_interpolation_hits_breakpoints(self):
        p = infl.table_profile("steps", [[0.0, 1.0], [0.5, 0.4], [1.2, 0.0]])
        assert p.evaluate(0.5) == pytest.approx(0.4, abs=1e-15)
        assert p.evaluate(0.25) == pytest.approx(0.7, abs=1e-15)
        assert p.support_beta == 1.2

    def test_requires_terminal_zero(self):
        with pytest.raises(ValueError):
            infl.table_profile("bad", [[0.0, 1.0], [1.0, 0.5]])

    def test_rejects_support_outside_quarter_circle(self):
        with pytest.raises(ValueError):
            infl.table_profile("wide", [[0.0, 1.0], [1.6, 0.0]])

    def test_spec_round_trip(self):
        p = infl.table_profile("shallow", [[0.0, 1.0], [1.5, 0.0]])
        spec = infl.profile_spec(p)
        q = infl.profile_from_spec(spec)
        assert q.support_beta == p.support_beta
        assert q.lipschitz == p.lipschitz
        grid = np.linspace(0, math.pi, 777)
        assert np.array_equal(p.evaluate(grid), q.evaluate(grid))

    def test_builtin_spec_round_trip(self):
        for p in (infl.linear_cutoff_profile(), infl.quadratic_cutoff_profile()):
            q = infl.profile_from_spec(infl.profile_spec(p))
            assert q.kind == p.kind and q.support_beta == p.support_beta

    def test_beta_mismatch_rejected(self):
        with pytest.raises(ValueError):
            infl.profile_from_spec({"name": "x", "kind": "builtin-I1", "beta": 0.7})

    @given(
        st.lists(st.floats(0.01, 0.99, allow_nan=False), min_size=1, max_size=6),
        st.floats(0.3, 1.5, allow_nan=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_random_decreasing_tables_satisfy_all_conditions(self, drops, beta):
        # build a strictly decreasing table from 1 to 0 over [0, beta]
        levels = np.cumsum(sorted(drops, reverse=True))
        values = 1.0 - 0.999 * levels / levels[-1]
        values = np.concatenate([[1.0], values[:-1], [0.0]])
        angles = np.linspace(0.0, beta, len(values))
        p = infl.table_profile("random", list(zip(angles, values)))
        rep = p.validate()
        assert rep.all_pass, [c for c in rep.checks if not c.passed]
        assert p.lipschitz_estimate() <= p.lipschitz + 1e-9
