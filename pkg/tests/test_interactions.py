import math

import numpy as np
import pytest

from opinionsim.core import CompromiseKernel, DiffusionShape, LeaderStrategy
from opinionsim.interactions import (
    NoiseSpec,
    bound_certificate,
    follower_follower,
    follower_leader,
    leader_leader,
    sample_noise,
)

UNIT = CompromiseKernel.constant(1.0)
QUAD = DiffusionShape.quadratic_cap()
NONE = DiffusionShape.none()


class TestNoise:
    def test_degenerate(self):
        rng = np.random.default_rng(0)
        spec = NoiseSpec(0.0)
        assert sample_noise(spec, rng) == 0.0
        assert np.all(sample_noise(spec, rng, 100) == 0.0)

    def test_support_bound(self):
        spec = NoiseSpec(0.03)
        assert spec.support == pytest.approx(0.3, rel=1e-12)
        rng = np.random.default_rng(1)
        draws = sample_noise(spec, rng, 100_000)
        assert np.max(np.abs(draws)) <= 0.3

    def test_moments(self):
        rng = np.random.default_rng(2)
        spec = NoiseSpec(1e-4)
        draws = sample_noise(spec, rng, 1_000_000)
        assert abs(draws.var() - 1e-4) < 0.05 * 1e-4
        # sample mean ~ N(0, var/n): allow 4 standard errors
        assert abs(draws.mean()) < 4 * math.sqrt(1e-4 / 1_000_000)

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(-1e-3)


class TestFollowerFollower:
    def test_midpoint_consensus(self):
        w, v = follower_follower(-0.5, 0.5, 0.0, 0.0, UNIT, NONE, 0.5)
        assert w == 0.0 and v == 0.0

    def test_quarter_step(self):
        w, v = follower_follower(-0.5, 0.5, 0.0, 0.0, UNIT, NONE, 0.25)
        assert w == pytest.approx(-0.25) and v == pytest.approx(0.25)

    def test_equal_opinions_fixed(self):
        for alpha in (0.1, 0.5):
            w, v = follower_follower(0.3, 0.3, 0.0, 0.0, UNIT, QUAD, alpha)
            assert w == 0.3 and v == 0.3

    def test_noiseless_bounds_preserved(self):
        rng = np.random.default_rng(3)
        n = 1_000_000
        w = rng.uniform(-1, 1, n)
        v = rng.uniform(-1, 1, n)
        alpha = rng.uniform(0.0, 0.5, n)
        for kernel in (UNIT, CompromiseKernel.constant(0.4),
                       CompromiseKernel.bounded_confidence(0.7)):
            w2, v2 = follower_follower(w, v, 0.0, 0.0, kernel, QUAD, alpha)
            assert np.max(np.abs(w2)) <= 1.0 + 1e-15
            assert np.max(np.abs(v2)) <= 1.0 + 1e-15


class TestFollowerLeader:
    def test_pull_toward_leader(self):
        w2, leader = follower_leader(0.0, 1.0, 0.0, UNIT, NONE, 0.01)
        assert w2 == pytest.approx(0.01)
        assert leader == 1.0

    def test_leader_bit_identical(self):
        lead = np.float64(0.123456789)
        _, out = follower_leader(-0.2, lead, 0.05, UNIT, QUAD, 0.3)
        assert out is lead

    def test_gate_closed(self):
        kernel = CompromiseKernel.bounded_confidence(0.5)
        w2, _ = follower_leader(-0.8, 0.5, 0.0, kernel, QUAD, 0.3)
        assert w2 == -0.8

    def test_equal_opinion_fixed(self):
        w2, _ = follower_leader(0.4, 0.4, 0.0, UNIT, QUAD, 0.3)
        assert w2 == 0.4

    def test_noiseless_bounds_preserved(self):
        rng = np.random.default_rng(4)
        n = 1_000_000
        w = rng.uniform(-1, 1, n)
        lead = rng.uniform(-1, 1, n)
        alpha = rng.uniform(0.0, 1.0, n)
        w2, _ = follower_leader(w, lead, 0.0, UNIT, QUAD, alpha)
        assert np.max(np.abs(w2)) <= 1.0 + 1e-15


def _strategy(psi=0.5, target=1.0):
    return LeaderStrategy(psi=psi, target=target)


class TestLeaderLeader:
    def test_difference_collapses_at_half(self):
        rng = np.random.default_rng(5)
        beta = 0.01
        for _ in range(50):
            w, v = rng.uniform(-1, 1, 2)
            w2, v2 = leader_leader(w, v, 0.0, 0.0, UNIT, NONE, 0.5, beta,
                                   0.0, _strategy())
            assert abs(w2 - v2) < 1e-15

    def test_consensus_at_target_fixed(self):
        s = _strategy(psi=0.3, target=0.2)
        w2, v2 = leader_leader(0.2, 0.2, 0.0, 0.0, UNIT, QUAD, 0.1, 0.01,
                               0.2, s)
        assert w2 == pytest.approx(0.2, abs=1e-15)
        assert v2 == pytest.approx(0.2, abs=1e-15)

    def test_composition_with_control(self):
        # alpha=0.1, beta=0.04/1.04, pair (0.2, 0.4), psi=mu=0.5, wd=1, mf=0
        beta = 0.04 / 1.04
        inc = 0.2 * beta
        w2, v2 = leader_leader(0.2, 0.4, 0.0, 0.0, UNIT, NONE, 0.1, beta,
                               0.0, _strategy())
        assert w2 == pytest.approx(0.2 + 0.02 + inc, rel=1e-12)
        assert v2 == pytest.approx(0.4 - 0.02 + inc, rel=1e-12)
        assert inc == pytest.approx(7.6923076923e-3, rel=1e-9)

    def test_contraction_equality(self):
        # |w* - v*| = |1 - 2 alpha| |w - v| exactly for unit R, zero noise
        rng = np.random.default_rng(6)
        n = 100_000
        w = rng.uniform(-1, 1, n)
        v = rng.uniform(-1, 1, n)
        alpha = rng.uniform(np.nextafter(0.0, 1.0), 0.5, n)
        w2, v2 = leader_leader(w, v, 0.0, 0.0, UNIT, QUAD, alpha, 0.01,
                               0.1, _strategy())
        lhs = np.abs(w2 - v2)
        rhs = np.abs(1.0 - 2.0 * alpha) * np.abs(w - v)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12

    def test_pair_mean_shift_equals_control(self):
        # zero noise, symmetric R: pair-mean increment is exactly the
        # control increment
        from opinionsim.control import ControlInput, feedback_control
        rng = np.random.default_rng(7)
        s = _strategy(psi=0.7, target=-0.3)
        for _ in range(100):
            w, v = rng.uniform(-1, 1, 2)
            alpha, beta, m_f = 0.2, 0.05, float(rng.uniform(-1, 1))
            w2, v2 = leader_leader(w, v, 0.0, 0.0, UNIT, QUAD, alpha, beta, m_f, s)
            inc = feedback_control(ControlInput(w_k=w, w_h=v, m_f=m_f, strategy=s,
                                                alpha=alpha, beta=beta, kernel_r=UNIT))
            assert (w2 + v2) / 2 - (w + v) / 2 == pytest.approx(inc, abs=1e-15)


class TestBoundCertificate:
    def test_structural_constants(self):
        cert = bound_certificate(UNIT, QUAD, QUAD, 0.01, 4e-4,
                                 NoiseSpec(1e-6), NoiseSpec(1e-6))
        assert cert.r == 1.0
        assert cert.d_minus == cert.d_plus == 0.5
        assert cert.k_minus == cert.k_plus == 0.5

    def test_reference_scenario_satisfied(self):
        # alpha=0.01, beta ~ 4.0e-4: alpha*r = 0.01 >= beta/2 ~ 2.0e-4;
        # noise support sqrt(3e-4) ~ 0.01732 <= 0.5 (1 - beta/2) ~ 0.49990
        beta = 0.04 / 100.04
        cert = bound_certificate(UNIT, QUAD, QUAD, 0.01, beta,
                                 NoiseSpec(1e-4), NoiseSpec(1e-4))
        assert cert.contraction_ok
        assert cert.leader_noise_ok and cert.follower_noise_ok
        assert cert.satisfied
        assert NoiseSpec(1e-4).support == pytest.approx(0.0173205, rel=1e-5)
        assert 0.5 * (1 - beta / 2) == pytest.approx(0.4999000, rel=1e-6)

    def test_contraction_violation_detected(self):
        # weak kernel floor: bounded confidence has r=0, so alpha*r < beta/2
        cert = bound_certificate(CompromiseKernel.bounded_confidence(0.5),
                                 QUAD, QUAD, 0.01, 4e-4,
                                 NoiseSpec(0.0), NoiseSpec(0.0))
        assert cert.r == 0.0
        assert not cert.contraction_ok
        assert not cert.satisfied

    def test_noise_window_violation_detected(self):
        cert = bound_certificate(UNIT, QUAD, QUAD, 0.01, 4e-4,
                                 NoiseSpec(0.5), NoiseSpec(1e-6))
        assert not cert.leader_noise_ok
        assert not cert.satisfied

    def test_zero_noise_passes_zero_window(self):
        # constant diffusion touches the endpoints (zero window); only
        # zero-variance noise passes
        flat = DiffusionShape.constant(0.5)
        cert = bound_certificate(UNIT, flat, flat, 0.01, 4e-4,
                                 NoiseSpec(0.0), NoiseSpec(0.0))
        assert cert.satisfied
        cert2 = bound_certificate(UNIT, flat, flat, 0.01, 4e-4,
                                  NoiseSpec(1e-8), NoiseSpec(0.0))
        assert not cert2.satisfied

    def test_none_diffusion_unconstrained(self):
        cert = bound_certificate(UNIT, NONE, NONE, 0.01, 4e-4,
                                 NoiseSpec(10.0), NoiseSpec(10.0))
        assert cert.leader_noise_ok and cert.follower_noise_ok


class TestCertifiedBoundsProperty:
    def test_no_escape_with_sampled_noise(self):
        # certified parameter set: every rule keeps opinions inside I
        rng = np.random.default_rng(8)
        alpha, beta = 0.01, 0.04 / 100.04
        noise = NoiseSpec(1e-4)
        cert = bound_certificate(UNIT, QUAD, QUAD, alpha, beta, noise, noise)
        assert cert.satisfied
        n = 400_000
        s = _strategy(psi=0.5, target=0.5)
        w = rng.uniform(-1, 1, n)
        v = rng.uniform(-1, 1, n)
        w2, v2 = follower_follower(w, v, noise.sample(rng, n), noise.sample(rng, n),
                                   UNIT, QUAD, alpha)
        assert max(np.abs(w2).max(), np.abs(v2).max()) <= 1.0
        w3, _ = follower_leader(w, v, noise.sample(rng, n), UNIT, QUAD, alpha)
        assert np.abs(w3).max() <= 1.0
        w4, v4 = leader_leader(w, v, noise.sample(rng, n), noise.sample(rng, n),
                               UNIT, QUAD, alpha, beta, 0.0, s)
        assert max(np.abs(w4).max(), np.abs(v4).max()) <= 1.0
