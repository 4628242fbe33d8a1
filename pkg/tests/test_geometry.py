import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from winfree_sphere import geometry as geo


def unit_vectors(dim):
    """Strategy: unit vectors in R^(dim+1) built from bounded components."""
    return (
        st.lists(
            st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False),
            min_size=dim + 1,
            max_size=dim + 1,
        )
        .map(np.array)
        .filter(lambda v: np.linalg.norm(v) > 1e-3)
        .map(lambda v: v / np.linalg.norm(v))
    )


class TestAngle:
    def test_identical_vectors(self):
        e = geo.attraction_point(2)
        assert geo.angle(e, e) == 0.0

    def test_antipodal(self):
        e = geo.attraction_point(2)
        assert geo.angle(e, -e) == pytest.approx(math.pi)

    def test_orthogonal(self):
        e = geo.attraction_point(2)
        assert geo.angle(e, np.array([0.0, 1.0, 0.0])) == pytest.approx(math.pi / 2)

    def test_clamping_absorbs_rounding(self):
        # a vector renormalized in floating point can have <x,x> slightly above 1
        v = geo.renormalize(np.array([1.0, 1e-8, 1e-8]))
        assert geo.angle(v, v) == 0.0

    @given(unit_vectors(2), unit_vectors(2), unit_vectors(2))
    @settings(max_examples=200, deadline=None)
    def test_triangle_inequality(self, x, y, z):
        # arccos is ill-conditioned near +-1 (derivative 1/sqrt(1-u^2)), so the
        # computed sum can undershoot by ~sqrt(eps) for near-antipodal triples;
        # the slack covers that evaluation noise, not the inequality itself
        assert geo.angle(x, y) + geo.angle(y, z) >= geo.angle(x, z) - 1e-7


class TestTangentToward:
    def test_at_attraction_point_vanishes(self):
        e = geo.attraction_point(2)
        assert np.allclose(geo.tangent_toward(e, e), 0.0)

    def test_orthogonal_input_returns_e(self):
        e = geo.attraction_point(2)
        x = np.array([0.0, 1.0, 0.0])
        assert np.allclose(geo.tangent_toward(x, e), e)

    def test_norm_is_sine_of_angle(self):
        # d=1 point at polar angle 1: the tangent length is sqrt(1 - cos^2 1)
        x = np.array([math.cos(1.0), math.sin(1.0)])
        e = geo.attraction_point(1)
        t = geo.tangent_toward(x, e)
        assert np.linalg.norm(t) == pytest.approx(math.sin(1.0), abs=1e-12)

    def test_normalized_variant_is_unit(self):
        e = geo.attraction_point(2)
        x = geo.renormalize(np.array([0.5, 0.5, 0.7]))
        n = geo.tangent_toward(x, e, normalize=True)
        assert np.linalg.norm(n) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_at_poles(self):
        e = geo.attraction_point(2)
        with pytest.raises(geo.DegeneratePointError):
            geo.tangent_toward(e, e, normalize=True)
        with pytest.raises(geo.DegeneratePointError):
            geo.tangent_toward(-e, e, normalize=True)

    @given(unit_vectors(3))
    @settings(max_examples=200, deadline=None)
    def test_orthogonal_to_base_point(self, x):
        e = geo.attraction_point(3)
        assert abs(float(geo.tangent_toward(x, e) @ x)) <= 1e-12


class TestOperatorNorm:
    def test_planar_rotation(self):
        assert geo.operator_norm(geo.planar_rotation_generator(0.7)) == pytest.approx(0.7)

    def test_zero_matrix(self):
        assert geo.operator_norm(np.zeros((4, 4))) == 0.0

    def test_axis_rotation_brute_force(self):
        # oracle: max |W v| over a fine sample of unit vectors
        w = 2.0 * geo.hat(np.array([0.0, 1.0, 0.0]))
        rng = np.random.default_rng(0)
        best = 0.0
        for _ in range(20000):
            v = geo.random_unit_vector(2, rng)
            best = max(best, float(np.linalg.norm(w @ v)))
        assert geo.operator_norm(w) == pytest.approx(2.0, abs=1e-12)
        assert best <= geo.operator_norm(w) + 1e-9
        assert best == pytest.approx(2.0, abs=1e-3)

    def test_dominates_random_directions(self, rng):
        w = geo.random_skew(3, rng)
        nrm = geo.operator_norm(w)
        for _ in range(1000):
            v = geo.random_unit_vector(3, rng)
            assert np.linalg.norm(w @ v) <= nrm + 1e-9


def _series_exponential(a, terms=30):
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms + 1):
        term = term @ a / k
        out = out + term
    return out


class TestSkewExponential:
    def test_zero_time_is_identity(self):
        w = geo.planar_rotation_generator(3.0)
        assert np.allclose(geo.skew_exponential(w, 0.0), np.eye(2), atol=1e-15)

    def test_quarter_turn(self):
        w = geo.planar_rotation_generator(1.0)
        r = geo.skew_exponential(w, math.pi / 2)
        assert np.allclose(r, [[0.0, -1.0], [1.0, 0.0]], atol=1e-12)

    def test_matches_series_oracle_3d(self):
        w = geo.hat(np.array([0.0, 0.0, 1.0]))
        assert np.allclose(geo.skew_exponential(w, 1.0), _series_exponential(w), atol=1e-12)

    def test_matches_series_oracle_high_dim(self, rng):
        w = geo.random_skew(4, rng, op_norm=0.8)
        assert np.allclose(geo.skew_exponential(w, 1.3), _series_exponential(1.3 * w), atol=1e-12)

    @given(st.floats(-5.0, 5.0, allow_nan=False), st.integers(1, 4), st.integers(0, 100))
    @settings(max_examples=100, deadline=None)
    def test_orthogonality_and_isometry(self, t, dim, seed):
        rng = np.random.default_rng(seed)
        w = geo.random_skew(dim, rng, op_norm=1.0)
        r = geo.skew_exponential(w, t)
        assert np.abs(r @ r.T - np.eye(dim + 1)).max() <= 1e-10
        x = geo.random_unit_vector(dim, rng)
        assert abs(np.linalg.norm(r @ x) - 1.0) <= 1e-10


class TestRenormalize:
    def test_scales_down(self):
        assert np.allclose(geo.renormalize([2.0, 0.0, 0.0]), [1.0, 0.0, 0.0])

    def test_idempotent(self):
        x = geo.renormalize([1.0, 0.0, 0.0])
        assert np.array_equal(geo.renormalize(x), x)

    def test_diagonal(self):
        assert np.allclose(geo.renormalize([1.0, 1.0]), [1 / math.sqrt(2)] * 2)

    def test_zero_vector_rejected(self):
        with pytest.raises(geo.ZeroVectorError):
            geo.renormalize([0.0, 1e-13])


class TestRandomInCap:
    def test_degenerate_cap_returns_e(self, rng):
        x = geo.random_in_cap(2, 0.0, rng)
        assert np.array_equal(x, geo.attraction_point(2))

    def test_full_sphere_stays_unit(self, rng):
        e = geo.attraction_point(3)
        for _ in range(100):
            x = geo.random_in_cap(3, math.pi, rng)
            assert geo.angle(x, e) <= math.pi
            assert abs(np.linalg.norm(x) - 1.0) <= 1e-12

    def test_sampler_respects_cap(self, rng):
        e = geo.attraction_point(2)
        worst = max(geo.angle(geo.random_in_cap(2, 0.5, rng), e) for _ in range(10000))
        assert worst <= 0.5

    def test_rejects_bad_radius(self, rng):
        with pytest.raises(ValueError):
            geo.random_in_cap(2, -0.1, rng)


class TestSkewHelpers:
    def test_structured_frequency_action(self):
        e = geo.attraction_point(2)
        n = np.array([0.0, 1.0, 0.0])
        w = geo.structured_frequency(0.4, n, 2)
        assert np.allclose(w @ n, -0.4 * e, atol=1e-15)
        assert np.allclose(w @ e, 0.4 * n, atol=1e-15)
        v = np.array([0.0, 0.0, 1.0])
        assert np.abs(w @ v).max() <= 1e-12
        assert geo.operator_norm(w) == pytest.approx(0.4, abs=1e-12)

    def test_structured_frequency_rejects_bad_axis(self):
        with pytest.raises(ValueError):
            geo.structured_frequency(1.0, np.array([1.0, 0.0, 0.0]), 2)

    def test_skew_symmetrize_is_exact(self, rng):
        m = rng.standard_normal((5, 5))
        assert geo.is_skew(geo.skew_symmetrize(m))

    def test_unit_vector_validates(self):
        with pytest.raises(ValueError):
            geo.unit_vector([1.0, 1e-5])
        assert np.array_equal(geo.unit_vector([0.0, 1.0]), [0.0, 1.0])
