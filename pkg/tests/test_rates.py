import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raqsim.errors import DomainError
from raqsim.rates import (
    BoundInputs,
    asymptotic_limits,
    gap_raq_vs_mmimo,
    gap_zf_vs_mrc,
    lower_bound,
    lower_bound_per_user,
)


def make_inputs(system="raq", scheme="zf", m=300, beta=None, p_s=1.0,
                aperture=1.7e-4, gain=35.0, noise=1.8e-17):
    if beta is None:
        beta = np.full(20, 1.3e-13)
    return BoundInputs(system=system, scheme=scheme, m_elements=m,
                       beta=np.asarray(beta, dtype=float), transmit_power=p_s,
                       aperture=aperture, gain=gain, noise_power=noise)


class TestLowerBound:
    def test_zf_equal_elements_and_users_gives_zero(self):
        inputs = make_inputs(m=20)
        assert np.all(lower_bound_per_user(inputs) == 0.0)

    def test_zf_unit_sinr_gives_one_bit(self):
        # Choose parameters so gain*P_s*A_e*(M-K)*beta/sigma^2 = 1.
        beta = np.full(4, 2.0e-13)
        m = 14  # M - K = 10
        noise = 1.0 * 1.0 * 1e-4 * 10 * 2.0e-13
        inputs = make_inputs(m=m, beta=beta, p_s=1.0, aperture=1e-4,
                             gain=1.0, noise=noise)
        assert lower_bound(inputs, 0) == pytest.approx(1.0)

    def test_zf_arithmetic_oracle_at_headline_scale(self):
        # Per-term SNR of 10 at (M, K) = (300, 20): log2(1 + 10*280).
        beta = np.full(20, 1.0e-13)
        noise = 1.0 * 1.7e-4 * 1.0e-13 * 35.0 / 10.0
        inputs = make_inputs(beta=beta, gain=35.0, aperture=1.7e-4, noise=noise)
        expected = math.log2(1.0 + 10.0 * 280.0)
        assert lower_bound(inputs, 3) == pytest.approx(expected)
        assert expected == pytest.approx(11.45, abs=0.01)

    def test_mrc_matches_direct_formula(self):
        beta = np.array([1.0e-13, 3.0e-13, 0.5e-13])
        inputs = make_inputs(scheme="mrc", m=100, beta=beta)
        c = inputs.snr_scale
        for k in range(3):
            other = beta.sum() - beta[k]
            expected = math.log2(1 + c * 99 * beta[k] / (1 + c * other))
            assert lower_bound(inputs, k) == pytest.approx(expected)

    def test_mrc_equivalent_unnormalized_form(self):
        # The normalized and the plain-noise denominators are the same bound.
        beta = np.array([2.0e-13, 1.0e-13])
        inputs = make_inputs(system="mmimo", scheme="mrc", m=50, beta=beta,
                             gain=1622.0, aperture=1.48e-4, noise=4.0e-13)
        g = inputs.gain * inputs.transmit_power * inputs.aperture
        for k in range(2):
            other = beta.sum() - beta[k]
            expected = math.log2(1 + g * 49 * beta[k] / (g * other + 4.0e-13))
            assert lower_bound(inputs, k) == pytest.approx(expected)

    def test_zf_fewer_elements_than_users_rejected(self):
        with pytest.raises(DomainError):
            make_inputs(m=19)

    def test_mrc_single_element_rejected(self):
        with pytest.raises(DomainError):
            make_inputs(scheme="mrc", m=1, beta=np.array([1e-13]))

    @given(
        p_scale=st.floats(min_value=1.0, max_value=100.0),
        m_extra=st.integers(min_value=0, max_value=200),
        beta_scale=st.floats(min_value=1.0, max_value=50.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_power_elements_and_gain(self, p_scale, m_extra, beta_scale):
        base = make_inputs()
        boosted_p = make_inputs(p_s=p_scale)
        boosted_m = make_inputs(m=300 + m_extra)
        beta = np.full(20, 1.3e-13)
        beta[5] *= beta_scale
        boosted_b = make_inputs(beta=beta)
        for scheme in ("mrc", "zf"):
            b0 = lower_bound_per_user(make_inputs(scheme=scheme))
            bp = lower_bound_per_user(make_inputs(scheme=scheme, p_s=p_scale))
            bm = lower_bound_per_user(make_inputs(scheme=scheme, m=300 + m_extra))
            bb = lower_bound_per_user(make_inputs(scheme=scheme, beta=beta))
            assert np.all(bp >= b0 - 1e-12)
            assert np.all(bm >= b0 - 1e-12)
            assert bb[5] >= b0[5] - 1e-12
        del base, boosted_p, boosted_m, boosted_b


class TestAsymptoticLimits:
    def test_interference_limited_two_users(self):
        inputs = make_inputs(scheme="mrc", m=3, beta=np.array([1e-13, 1e-13]))
        assert asymptotic_limits(inputs, 0, "interference") == pytest.approx(
            math.log2(3.0)
        )

    def test_interference_limit_ignores_power_gain_noise(self):
        a = make_inputs(scheme="mrc", m=120)
        b = make_inputs(scheme="mrc", m=120, p_s=77.0, gain=1.0, noise=1e-3)
        assert asymptotic_limits(a, 4, "interference") == pytest.approx(
            asymptotic_limits(b, 4, "interference")
        )

    def test_single_user_interference_case_rejected(self):
        inputs = make_inputs(scheme="mrc", m=10, beta=np.array([1e-13]))
        with pytest.raises(DomainError):
            asymptotic_limits(inputs, 0, "interference")

    def test_scaled_power_unit_construction(self):
        # E*beta*A_e*gain/sigma^2 = 3 gives exactly 2 bits.
        beta = np.array([2.0e-13, 2.0e-13])
        inputs = make_inputs(m=30, beta=beta, gain=1.0, aperture=1e-4,
                             noise=2.0e-13 * 1e-4)
        assert asymptotic_limits(inputs, 0, "scaled-power",
                                 energy_budget=3.0) == pytest.approx(2.0)

    def test_scaled_power_needs_budget(self):
        with pytest.raises(DomainError):
            asymptotic_limits(make_inputs(), 0, "scaled-power")


class TestGapZfVsMrc:
    def test_identity_with_ratio(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            beta = rng.uniform(1e-14, 1e-12, size=8)
            inputs = make_inputs(m=int(rng.integers(10, 400)), beta=beta,
                                 p_s=float(rng.uniform(0.01, 10.0)),
                                 gain=float(rng.uniform(1.0, 100.0)),
                                 noise=float(10 ** rng.uniform(-17, -13)))
            report = gap_zf_vs_mrc(inputs, 2)
            assert report.delta_r_k == pytest.approx(
                math.log2(report.ratio1), rel=1e-12
            )

    def test_finite_array_term_at_headline_scale(self):
        report = gap_zf_vs_mrc(make_inputs(), 0)
        assert report.delta_r == pytest.approx(math.log2(280.0 / 299.0))
        assert report.delta_r == pytest.approx(-0.0947, abs=2e-4)
        assert report.delta_r <= 0.0

    def test_large_array_limit_drops_penalty(self):
        small = gap_zf_vs_mrc(make_inputs(m=30), 0)
        large = gap_zf_vs_mrc(make_inputs(m=300000), 0)
        assert abs(large.delta_r) < 1e-4
        assert large.delta_r_k == pytest.approx(
            math.log2(large.ratio1), rel=1e-12
        )
        assert small.delta_r < large.delta_r

    def test_received_powers(self):
        beta = np.array([1e-13, 2e-13, 3e-13])
        inputs = make_inputs(m=10, beta=beta, p_s=2.0, aperture=1e-4)
        report = gap_zf_vs_mrc(inputs, 1)
        assert report.received_power_total == pytest.approx(2.0 * 1e-4 * 6e-13)
        assert report.received_power_user == pytest.approx(2.0 * 1e-4 * 2e-13)

    def test_equal_elements_and_users_rejected(self):
        with pytest.raises(DomainError):
            gap_zf_vs_mrc(make_inputs(m=20), 0)


class TestGapRaqVsMmimo:
    def test_identical_front_ends_give_zero(self):
        a = make_inputs(system="raq")
        b = make_inputs(system="mmimo")
        report = gap_raq_vs_mmimo(a, b, 0)
        assert report.ratio2 == pytest.approx(1.0)
        assert report.delta_r_tilde_k == pytest.approx(0.0, abs=1e-12)

    def test_single_doubling_gives_one_bit(self):
        a = make_inputs(system="raq", gain=70.0)
        b = make_inputs(system="mmimo", gain=35.0)
        report = gap_raq_vs_mmimo(a, b, 0)
        assert report.ratio2 == pytest.approx(2.0)
        assert report.delta_r_tilde_k == pytest.approx(1.0)

    def test_template_gap_lands_near_headline_value(self, default_config,
                                                    raq_frontend, mmimo_fe):
        beta = np.full(20, 1.3e-13)
        a = make_inputs(system="raq", beta=beta, gain=raq_frontend.effective_gain,
                        aperture=raq_frontend.aperture,
                        noise=raq_frontend.noise_power)
        b = make_inputs(system="mmimo", beta=beta, gain=mmimo_fe.gain,
                        aperture=mmimo_fe.aperture, noise=mmimo_fe.noise_power)
        report = gap_raq_vs_mmimo(a, b, 0)
        assert 8.8 - 2.0 <= report.delta_r_tilde_k <= 8.8 + 2.0

    def test_high_snr_consistency_with_bound_difference(self):
        # As transmit power grows, the gap converges to the difference of
        # the two ZF lower bounds.
        beta = np.full(6, 1e-13)
        for p_s in (1e3, 1e5):
            raq = make_inputs(m=60, beta=beta, p_s=p_s, gain=40.0, noise=1e-17)
            mm = make_inputs(system="mmimo", m=60, beta=beta, p_s=p_s,
                             gain=1622.0, aperture=1.48e-4, noise=4.0e-13)
            gap = gap_raq_vs_mmimo(raq, mm, 0)
            diff = lower_bound(raq, 0) - lower_bound(mm, 0)
            if p_s == 1e5:
                assert abs(gap.delta_r_tilde_k - diff) < 0.01
        assert abs(gap.delta_r_tilde_k - diff) < 0.01

    def test_mismatched_deployments_rejected(self):
        a = make_inputs(system="raq")
        b = make_inputs(system="mmimo", m=301)
        with pytest.raises(DomainError):
            gap_raq_vs_mmimo(a, b, 0)

    def test_nonpositive_gain_rejected(self):
        with pytest.raises(DomainError):
            make_inputs(gain=0.0)
