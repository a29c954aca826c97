import math

import numpy as np
import pytest

from raqsim.channel import (
    channel_realization,
    large_scale_profile,
    pathloss_db,
    uniform_profile,
)
from raqsim.errors import DomainError, GeometryError


class TestPathloss:
    def test_one_meter_reference(self):
        assert pathloss_db(1.0) == pytest.approx(-30.0)

    def test_four_hundred_meters(self):
        assert pathloss_db(400.0) == pytest.approx(-30.0 - 38.0 * math.log10(400.0))
        assert pathloss_db(400.0) == pytest.approx(-128.88, abs=0.01)

    def test_monotone_decreasing_without_shadowing(self):
        d = np.linspace(10.0, 700.0, 50)
        beta = pathloss_db(d)
        assert np.all(np.diff(beta) < 0)


class TestLargeScaleProfile:
    def test_distances_bounded_by_geometry(self):
        geometry, profile = large_scale_profile(
            20, 400.0, 300.0, 0.0, seed=123
        )
        assert geometry.distances.min() >= 100.0
        assert geometry.distances.max() <= 700.0
        assert np.all(profile.beta > 0)

    def test_positions_inside_drop_disk(self):
        geometry, _ = large_scale_profile(200, 400.0, 300.0, 0.0, seed=5)
        offsets = geometry.positions - np.array([400.0, 0.0])
        assert np.all(np.hypot(offsets[:, 0], offsets[:, 1]) <= 300.0 + 1e-9)

    def test_deterministic_per_seed(self):
        _, a = large_scale_profile(20, 400.0, 300.0, 4.0, seed=9)
        _, b = large_scale_profile(20, 400.0, 300.0, 4.0, seed=9)
        _, c = large_scale_profile(20, 400.0, 300.0, 4.0, seed=10)
        assert np.array_equal(a.beta, b.beta)
        assert not np.array_equal(a.beta, c.beta)

    def test_zero_shadowing_is_deterministic_function_of_distance(self):
        geometry, profile = large_scale_profile(50, 400.0, 300.0, 0.0, seed=3)
        expected = 10.0 ** (pathloss_db(geometry.distances) / 10.0)
        assert np.allclose(profile.beta, expected)

    def test_array_inside_disk_rejected(self):
        with pytest.raises(GeometryError):
            large_scale_profile(10, 200.0, 300.0, 0.0, seed=0)

    def test_subset_is_prefix(self):
        _, profile = large_scale_profile(30, 400.0, 300.0, 0.0, seed=11)
        sub = profile.subset(12)
        assert np.array_equal(sub.beta, profile.beta[:12])
        with pytest.raises(DomainError):
            profile.subset(31)

    def test_uniform_profile_equal_gains(self):
        profile = uniform_profile(8, 150.0)
        assert np.allclose(profile.beta, profile.beta[0])
        assert profile.beta[0] == pytest.approx(
            10.0 ** (pathloss_db(150.0) / 10.0)
        )


class TestChannelRealization:
    def test_unit_variance_entries(self):
        profile = uniform_profile(4, 100.0)
        rng_draws = channel_realization(250_000, profile, seed=21).small_scale
        power = np.mean(np.abs(rng_draws) ** 2)
        assert power == pytest.approx(1.0, rel=5e-3)

    def test_asymptotic_orthogonality(self):
        profile = uniform_profile(4, 100.0)
        g = channel_realization(10_000, profile, seed=22).small_scale
        gram = g.conj().T @ g / 10_000
        off = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off)) < 0.05

    def test_composite_applies_large_scale(self):
        _, profile = large_scale_profile(6, 400.0, 300.0, 0.0, seed=4)
        real = channel_realization(64, profile, seed=31)
        expected = real.small_scale * np.sqrt(profile.beta)
        assert np.allclose(real.composite, expected)

    def test_bit_identical_for_fixed_seed(self):
        profile = uniform_profile(5, 200.0)
        a = channel_realization(32, profile, seed=77).small_scale
        b = channel_realization(32, profile, seed=77).small_scale
        assert np.array_equal(a, b)

    def test_column_covariance_scales_with_beta(self):
        _, profile = large_scale_profile(3, 400.0, 300.0, 0.0, seed=8)
        h = channel_realization(200_000, profile, seed=41).composite
        sample = np.mean(np.abs(h) ** 2, axis=0)
        assert np.allclose(sample, profile.beta, rtol=2e-2)

    def test_wishart_inverse_trace_small_case(self):
        # E{Tr[(G^H G)^-1]} = K/(M-K); cheap smoke version of the
        # acceptance-scale check.
        m, k, trials = 64, 4, 400
        profile = uniform_profile(k, 100.0)
        acc = 0.0
        for t in range(trials):
            g = channel_realization(m, profile, seed=(5, t)).small_scale
            acc += np.trace(np.linalg.inv(g.conj().T @ g)).real
        assert acc / trials == pytest.approx(k / (m - k), rel=0.05)
