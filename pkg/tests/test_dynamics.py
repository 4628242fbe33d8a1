import math

import numpy as np
import pytest

from winfree_sphere import dynamics as dyn
from winfree_sphere import geometry as geo
from winfree_sphere import scalar as sc
from winfree_sphere.influence import linear_cutoff_profile, quadratic_cutoff_profile

DT = 1e-3


def random_params(rng, dim=2, n=4, kappa=1.0, op_norm=0.5, profile=None):
    omegas = np.stack([geo.random_skew(dim, rng, op_norm=op_norm) for _ in range(n)])
    return dyn.ModelParams(kappa, omegas, profile or linear_cutoff_profile())


def random_config(rng, dim=2, n=4, gamma=math.pi):
    return np.stack([geo.random_in_cap(dim, gamma, rng) for _ in range(n)])


class TestRhs:
    def test_everyone_at_rest_point(self, linear_profile):
        # all at e with generators annihilating e: both terms vanish
        n = 3
        omegas = np.stack([geo.structured_frequency(0.0, np.array([0.0, 1.0, 0.0]), 2)] * n)
        params = dyn.ModelParams(2.0, omegas, linear_profile)
        X = np.tile(geo.attraction_point(2), (n, 1))
        assert np.abs(dyn.rhs(params, X)).max() == 0.0

    def test_zero_coupling_is_free_rotation(self, rng, linear_profile):
        params = random_params(rng, kappa=0.0)
        X = random_config(rng)
        expected = np.stack([w @ x for w, x in zip(params.omegas, X)])
        assert np.allclose(dyn.rhs(params, X), expected, atol=1e-15)

    def test_circle_reduction_identity(self, linear_profile):
        # d=1: velocity is (nu - kappa * sin(theta) * mean influence) times the
        # unit tangent (-sin, cos)
        theta = np.array([0.4, -0.7, 2.2])
        nus = np.array([0.3, -0.2, 0.9])
        kappa = 1.7
        params = dyn.ModelParams(kappa, sc.lift_frequencies(nus, 1), linear_profile)
        X = sc.embed_circle(theta, 1)
        sp = sc.ScalarParams(
            kappa=kappa,
            nus=nus,
            sensitivity=sc.sine_sensitivity(),
            influence=sc.influence_on_circle(linear_profile),
        )
        dtheta = sc.scalar_rhs(sp, theta)
        tangent = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
        assert np.allclose(dyn.rhs(params, X), dtheta[:, None] * tangent, atol=1e-14)

    def test_tangency(self, rng):
        for _ in range(20):
            params = random_params(rng, dim=int(rng.integers(1, 4)), kappa=3.0)
            X = random_config(rng, dim=params.dim, n=params.n)
            v = dyn.rhs(params, X)
            assert np.abs((v * X).sum(axis=1)).max() <= 1e-12

    def test_length_mismatch(self, rng, linear_profile):
        params = random_params(rng, n=4)
        with pytest.raises(dyn.LengthMismatchError):
            dyn.rhs(params, random_config(rng, n=5))

    def test_eta_scales_coupling(self, rng, linear_profile):
        params = random_params(rng, kappa=2.0)
        X = random_config(rng, gamma=0.8)
        base = dyn.rhs(params, X)
        drift = np.stack([w @ x for w, x in zip(params.omegas, X)])
        doubled = dyn.ModelParams(2.0, params.omegas, linear_profile, eta=lambda Y: np.full(4, 2.0))
        assert np.allclose(dyn.rhs(doubled, X) - drift, 2.0 * (base - drift), atol=1e-14)


class TestScalarRhs:
    def test_zero_coupling(self):
        sp = sc.ScalarParams(0.0, [0.3, -0.1], sc.sine_sensitivity(), lambda t: np.ones_like(t))
        assert np.allclose(sc.scalar_rhs(sp, np.array([1.0, 2.0])), [0.3, -0.1])

    def test_zero_sensitivity_at_origin(self, linear_profile):
        sp = sc.ScalarParams(
            5.0, [0.4, 0.4], sc.sine_sensitivity(), sc.influence_on_circle(linear_profile)
        )
        assert np.allclose(sc.scalar_rhs(sp, np.zeros(2)), [0.4, 0.4])

    def test_direct_substitution(self):
        sp = sc.ScalarParams(
            1.3, [0.0, 0.0], sc.sine_sensitivity(), lambda t: np.ones_like(np.asarray(t))
        )
        out = sc.scalar_rhs(sp, np.array([math.pi / 2, math.pi / 2]))
        assert np.allclose(out, [-1.3, -1.3], atol=1e-15)


class TestIntegrate:
    def test_free_rotation_matches_exponential(self, linear_profile):
        params = dyn.ModelParams(0.0, geo.planar_rotation_generator(1.0)[None], linear_profile)
        x0 = np.array([[1.0, 0.0]])
        traj = dyn.integrate(params, x0, DT, math.pi / 2)
        expected = geo.skew_exponential(params.omegas[0], math.pi / 2) @ x0[0]
        assert np.abs(traj.final_state[0] - expected).max() <= 1e-8

    def test_norm_drift_budget(self, rng):
        worst = 0.0
        for _ in range(5):
            d = int(rng.integers(1, 4))
            n = int(rng.integers(2, 17))
            params = random_params(
                rng,
                dim=d,
                n=n,
                kappa=float(rng.uniform(0, 5)),
                op_norm=float(rng.uniform(0, 2)),
            )
            traj = dyn.integrate(params, random_config(rng, dim=d, n=n), DT, 2.0, record_every=10)
            worst = max(worst, traj.max_step_norm_drift)
            assert np.abs(np.linalg.norm(traj.states, axis=2) - 1.0).max() <= 1e-9
        assert worst <= 1e-12

    def test_reduction_agreement(self, rng, quadratic_profile):
        for profile in (linear_cutoff_profile(), quadratic_profile):
            n = 5
            nus = rng.uniform(-1, 1, n)
            theta0 = rng.uniform(-math.pi, math.pi, n)
            sp = sc.ScalarParams(
                1.2, nus, sc.sine_sensitivity(), sc.influence_on_circle(profile)
            )
            _, thetas = sc.integrate_scalar(sp, theta0, DT, 10.0, record_every=10)
            params = dyn.ModelParams(1.2, sc.lift_frequencies(nus, 1), profile)
            traj = dyn.integrate(params, sc.embed_circle(theta0, 1), DT, 10.0, record_every=10)
            align = np.clip((sc.embed_circle(thetas, 1) * traj.states).sum(-1), -1, 1)
            assert np.arccos(align).max() <= 1e-6

    def test_reduction_with_custom_sensitivity_shape(self, rng, linear_profile):
        # eta reshapes the pull; the scalar oracle uses S = -sin * eta
        n = 4
        nus = rng.uniform(-0.5, 0.5, n)
        theta0 = rng.uniform(-1.5, 1.5, n)
        eta_sphere = lambda X: 1.0 + X[:, 0] ** 2 / 2.0
        eta_circle = lambda t: 1.0 + np.cos(t) ** 2 / 2.0
        sp = sc.ScalarParams(
            1.5, nus, sc.sine_sensitivity(eta_circle), sc.influence_on_circle(linear_profile)
        )
        _, thetas = sc.integrate_scalar(sp, theta0, DT, 5.0, record_every=10)
        params = dyn.ModelParams(1.5, sc.lift_frequencies(nus, 1), linear_profile, eta=eta_sphere)
        traj = dyn.integrate(params, sc.embed_circle(theta0, 1), DT, 5.0, record_every=10)
        align = np.clip((sc.embed_circle(thetas, 1) * traj.states).sum(-1), -1, 1)
        assert np.arccos(align).max() <= 1e-6

    def test_scalar_compiled_and_generic_paths_agree(self, rng, linear_profile):
        n = 5
        nus = rng.uniform(-1, 1, n)
        theta0 = rng.uniform(-math.pi, math.pi, n)
        fast = sc.ScalarParams(
            1.4, nus, sc.sine_sensitivity(), sc.influence_on_circle(linear_profile)
        )
        # wrapping the callables hides the kernel markers, forcing the generic loop
        slow = sc.ScalarParams(
            1.4,
            nus,
            lambda t: sc.sine_sensitivity()(t),
            lambda t: sc.influence_on_circle(linear_profile)(t),
        )
        t1, a = sc.integrate_scalar(fast, theta0, DT, 3.0, record_every=10)
        t2, b = sc.integrate_scalar(slow, theta0, DT, 3.0, record_every=10)
        assert np.array_equal(t1, t2)
        assert np.abs(a - b).max() <= 1e-11

    def test_compiled_and_reference_paths_agree(self, rng, linear_profile):
        params = random_params(rng, kappa=2.0)
        x0 = random_config(rng, gamma=1.0)
        fast = dyn.integrate(params, x0, DT, 1.0)
        ones = dyn.ModelParams(2.0, params.omegas, linear_profile, eta=lambda X: np.ones(4))
        slow = dyn.integrate(ones, x0, DT, 1.0)
        assert np.abs(fast.states - slow.states).max() <= 1e-12

    def test_determinism_bitwise(self, rng):
        params = random_params(rng, kappa=1.3)
        x0 = random_config(rng)
        a = dyn.integrate(params, x0, DT, 2.0)
        b = dyn.integrate(params, x0, DT, 2.0)
        assert np.array_equal(a.states, b.states)
        assert a.max_step_norm_drift == b.max_step_norm_drift

    def test_decimation_does_not_change_dynamics(self, rng):
        params = random_params(rng, kappa=1.1)
        x0 = random_config(rng)
        dense = dyn.integrate(params, x0, DT, 1.0, record_every=1)
        sparse = dyn.integrate(params, x0, DT, 1.0, record_every=5)
        assert np.array_equal(dense.states[-1], sparse.states[-1])
        assert np.array_equal(dense.states[::5], sparse.states)

    def test_records_align_and_end_on_horizon(self, rng):
        params = random_params(rng)
        traj = dyn.integrate(params, random_config(rng), DT, 2.0, record_every=7)
        assert np.all(np.diff(traj.times) > 0)
        assert traj.times[-1] == pytest.approx(2.0, abs=1e-12)
        assert traj.states.shape[0] == len(traj.times) == len(traj.order_parameter)

    def test_blowup_detected(self, rng, linear_profile):
        params = random_params(rng)
        x0 = random_config(rng)
        import winfree_sphere.dynamics as dmod

        old = dmod.RADIAL_STEP_INFLATION
        dmod.RADIAL_STEP_INFLATION = -1.0  # collapses every state to zero length
        try:
            with pytest.raises(dyn.BlowUpError):
                dyn.integrate(params, x0, DT, 0.1)
        finally:
            dmod.RADIAL_STEP_INFLATION = old

    def test_validates_inputs(self, rng):
        params = random_params(rng)
        with pytest.raises(ValueError):
            dyn.integrate(params, random_config(rng), -1e-3, 1.0)
        bad = random_config(rng)
        bad[0] *= 1.5
        with pytest.raises(ValueError):
            dyn.integrate(params, bad, DT, 1.0)


class TestSplitTransform:
    def test_zero_generator_is_identity(self, rng, linear_profile):
        params = random_params(rng, kappa=1.0, op_norm=0.0)
        traj = dyn.integrate(params, random_config(rng), DT, 1.0)
        out = dyn.split_transform(traj, np.zeros((3, 3)))
        assert np.array_equal(out.states, traj.states)

    def test_pure_rotation_freezes(self, linear_profile):
        # zero coupling: unwinding the rotation leaves the initial configuration
        omega = geo.axis_rotation_generator(np.array([1.0, 0.0, 0.0]), 1.1)
        params = dyn.ModelParams(0.0, np.broadcast_to(omega, (3, 3, 3)).copy(), linear_profile)
        rng = np.random.default_rng(5)
        x0 = random_config(rng, n=3)
        traj = dyn.integrate(params, x0, DT, 2.0, record_every=10)
        out = dyn.split_transform(traj, omega)
        assert np.abs(out.states - x0[None]).max() <= 1e-10

    def test_requires_fixed_attraction_point(self, rng, linear_profile):
        params = random_params(rng, kappa=0.5)
        traj = dyn.integrate(params, random_config(rng), DT, 0.5)
        tilted = geo.axis_rotation_generator(np.array([0.0, 1.0, 0.0]), 1.0)
        with pytest.raises(dyn.HypothesisViolatedError):
            dyn.split_transform(traj, tilted)

    def test_unwound_run_solves_coupling_only_system(self, linear_profile):
        omega = geo.axis_rotation_generator(np.array([1.0, 0.0, 0.0]), 0.9)
        n = 5
        params = dyn.ModelParams(1.0, np.broadcast_to(omega, (n, 3, 3)).copy(), linear_profile)
        rng = np.random.default_rng(8)
        x0 = random_config(rng, n=n)
        traj = dyn.integrate(params, x0, DT, 5.0, record_every=10)
        unwound = dyn.split_transform(traj, omega)
        frozen = dyn.ModelParams(1.0, np.zeros((n, 3, 3)), linear_profile)
        direct = dyn.integrate(frozen, x0, DT, 5.0, record_every=10)
        assert np.abs(unwound.states - direct.states).max() <= 1e-7


class TestEmbedding:
    def test_zero_phase_is_attraction_point(self):
        assert np.array_equal(sc.embed_circle(np.array(0.0), 1), geo.attraction_point(1))

    def test_quarter_phase_in_plane(self):
        x = sc.embed_circle(np.array(math.pi / 2), 2)
        assert np.allclose(x, [0.0, 1.0, 0.0], atol=1e-16)
        w = sc.lift_frequencies([0.7], 2)[0]
        assert np.abs(w @ np.array([0.0, 0.0, 1.0])).max() == 0.0

    def test_round_trip_polar_angle(self, rng):
        thetas = rng.uniform(-math.pi, math.pi, 20)
        X = sc.embed_circle(thetas, 1)
        phis = geo.polar_angles(X)
        assert np.allclose(phis, np.abs(thetas), atol=1e-12)

    def test_rejects_unsupported_dim(self):
        with pytest.raises(sc.UnsupportedDimError):
            sc.embed_circle(np.zeros(3), 3)
        with pytest.raises(sc.UnsupportedDimError):
            sc.lift_frequencies([1.0], 0)


class TestTrajectoryObservables:
    def test_observable_shapes_and_values(self, rng, linear_profile):
        params = random_params(rng, kappa=1.0)
        traj = dyn.integrate(params, random_config(rng, gamma=0.7), DT, 1.0, record_every=10)
        k = len(traj.times) // 2
        x = traj.states[k]
        assert traj.phis[k] == pytest.approx(np.arccos(np.clip(x[:, 0], -1, 1)))
        assert traj.mean_influence[k] == pytest.approx(linear_profile.mean_influence(x))
        assert traj.order_parameter[k] == pytest.approx(float(np.linalg.norm(x.mean(0))))
        chords = traj.pairwise_chords(k)
        assert traj.max_pairwise_chord[k] == pytest.approx(chords.max())
        assert chords[0, 1] == pytest.approx(float(np.linalg.norm(x[0] - x[1])))
