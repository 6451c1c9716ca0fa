import numpy as np
import pytest

from opinionsim.core import (
    CompromiseKernel,
    DiffusionShape,
    LeaderStrategy,
    derive_scaled,
)
from opinionsim.engine import (
    CertificateError,
    FamilyModel,
    InitialLaw,
    LeaderFamily,
    Model,
    OpinionEnsemble,
    adaptive_strategy_update,
    empirical_moments,
    histogram,
    mc_step,
    plan_step,
    run,
    sample_initial,
)

UNIT = CompromiseKernel.constant(1.0)
QUAD = DiffusionShape.quadratic_cap()


def _scaled(variances=(0.01, 0.01, 0.01), families=((0.1, 0.1, 0.05),), **over):
    base = dict(
        epsilon=0.01, nu=1.0, c_f=1.0,
        variance_ff=variances[0], variance_fl=variances[1], variance_ll=variances[2],
        families=list(families),
    )
    base.update(over)
    return derive_scaled(**base)


def _model(params, kernel_s=UNIT):
    fam = FamilyModel(kernel_s=kernel_s, kernel_r=UNIT, shape_hat=QUAD, shape_tilde=QUAD)
    return Model(params=params, kernel_p=UNIT, shape_d=QUAD,
                 families=(fam,) * len(params.families))


def _ensemble(rng, n_f=2000, n_l=100, strategy=None, families=1):
    strategy = strategy or LeaderStrategy(psi=0.5, target=0.5)
    followers = rng.uniform(-1.0, -0.5, n_f)
    fams = [
        LeaderFamily(
            sample_initial(InitialLaw("normal", mean=0.5, variance=0.05), n_l, rng),
            strategy,
        )
        for _ in range(families)
    ]
    return OpinionEnsemble(followers, fams)


class TestPlanStep:
    def test_reference_scenario(self):
        plan = plan_step(_scaled())
        assert plan.dt == pytest.approx(1e-3)
        assert plan.p_ff == pytest.approx(0.1)
        assert plan.p_fl == (1.0,)
        assert plan.p_ll == (1.0,)

    def test_single_process_saturates(self):
        plan = plan_step(_scaled(families=((1.0, 1.0, 0.05),)))
        assert plan.dt == pytest.approx(0.01)
        assert plan.p_ff == 1.0

    def test_unbalanced_frequencies(self):
        plan = plan_step(_scaled(families=((0.1, 0.1, 0.05), (1.0, 0.1, 0.05))))
        assert plan.dt == pytest.approx(1e-3)
        assert plan.p_fl == (1.0, pytest.approx(0.1))
        assert plan.p_ll == (1.0, 1.0)

    def test_max_probability_exactly_one(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            params = _scaled(families=((float(10 ** rng.uniform(-2, 1)),
                                        float(10 ** rng.uniform(-2, 1)), 0.05),),
                             c_f=float(10 ** rng.uniform(-2, 1)))
            plan = plan_step(params)
            assert max(plan.p_ff, *plan.p_fl, *plan.p_ll) == 1.0


class TestMcStep:
    def test_consensus_at_target_invariant(self):
        params = _scaled(variances=(0.0, 0.0, 0.0))
        model = _model(params)
        ens = OpinionEnsemble(
            np.full(100, 0.5),
            [LeaderFamily(np.full(10, 0.5), LeaderStrategy(psi=0.5, target=0.5))],
        )
        before = ens.copy()
        mc_step(ens, model, plan_step(params), np.random.default_rng(1))
        assert np.array_equal(ens.followers, before.followers)
        assert np.array_equal(ens.families[0].opinions, before.families[0].opinions)

    def test_odd_follower_idles(self):
        # S gate closed: only the follower-follower round moves followers,
        # so the unpaired one keeps its value
        params = _scaled(variances=(0.0, 0.0, 0.0),
                         families=((1.0, 1.0, 0.05),))
        model = _model(params, kernel_s=CompromiseKernel.bounded_confidence(0.01))
        ens = OpinionEnsemble(
            np.array([-0.8, -0.5, -0.2]),
            [LeaderFamily(np.array([0.9, 0.95]), LeaderStrategy(psi=1.0, target=0.9))],
        )
        before = ens.followers.copy()
        mc_step(ens, model, plan_step(params), np.random.default_rng(2))
        unchanged = int(np.sum(ens.followers == before))
        assert unchanged == 1

    def test_mass_conservation(self):
        params = _scaled()
        model = _model(params)
        rng = np.random.default_rng(3)
        ens = _ensemble(rng)
        n_f, n_l = ens.followers.size, ens.families[0].opinions.size
        for _ in range(20):
            mc_step(ens, model, plan_step(params), rng)
            assert ens.followers.size == n_f
            assert ens.families[0].opinions.size == n_l

    def test_odd_leader_count(self):
        params = _scaled()
        model = _model(params)
        rng = np.random.default_rng(30)
        ens = _ensemble(rng, n_f=101, n_l=7)
        for _ in range(10):
            mc_step(ens, model, plan_step(params), rng)
        assert ens.families[0].opinions.size == 7
        assert np.abs(ens.families[0].opinions).max() <= 1.0

    def test_singleton_leader_family(self):
        # a lone leader never finds a partner but still steers followers
        params = _scaled()
        model = _model(params)
        rng = np.random.default_rng(31)
        ens = OpinionEnsemble(
            rng.uniform(-1.0, 0.0, 50),
            [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=0.5, target=0.5))],
        )
        m0 = ens.followers.mean()
        for _ in range(5):
            mc_step(ens, model, plan_step(params), rng)
        assert ens.families[0].opinions[0] == 0.5
        assert ens.followers.mean() > m0

    def test_bounds_held_and_rejections_counted(self):
        # flat diffusion with visible noise forces rejections near the edges
        params = _scaled(variances=(0.05, 0.05, 0.05))
        fam = FamilyModel(kernel_s=UNIT, kernel_r=UNIT,
                          shape_hat=DiffusionShape.constant(1.0),
                          shape_tilde=DiffusionShape.constant(1.0))
        model = Model(params=params, kernel_p=UNIT,
                      shape_d=DiffusionShape.constant(1.0), families=(fam,))
        rng = np.random.default_rng(4)
        ens = OpinionEnsemble(
            rng.uniform(0.95, 1.0, 5000),
            [LeaderFamily(rng.uniform(0.9, 1.0, 200), LeaderStrategy(psi=0.5, target=0.99))],
        )
        total_rej = 0
        for _ in range(10):
            counts = mc_step(ens, model, plan_step(params), rng)
            assert np.abs(ens.followers).max() <= 1.0
            assert np.abs(ens.families[0].opinions).max() <= 1.0
            total_rej += counts.rejected
        assert total_rej > 0

    def test_one_step_mean_drift(self):
        # averaged over 200 independent steps, the follower-mean increment
        # matches dt * (rho/c_fl) * (m_L - m_F)
        params = _scaled()
        model = _model(params)
        plan = plan_step(params)
        base = _ensemble(np.random.default_rng(5), n_f=10_000, n_l=500)
        m_f0 = base.followers.mean()
        m_l0 = base.families[0].opinions.mean()
        predicted = plan.dt * (1.0 / 0.1) * (m_l0 - m_f0)
        increments = []
        for seed in range(200):
            ens = base.copy()
            mc_step(ens, model, plan, np.random.default_rng(1000 + seed))
            increments.append(ens.followers.mean() - m_f0)
        increments = np.asarray(increments)
        se = increments.std(ddof=1) / np.sqrt(len(increments))
        assert abs(increments.mean() - predicted) <= 3.0 * se


class TestEmpiricalMoments:
    def test_singleton(self):
        ens = OpinionEnsemble(np.array([0.3]),
                              [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=1.0, target=0.5))])
        m = empirical_moments(ens, 0.0)
        assert m.mean_f == pytest.approx(0.3)
        assert m.energy_f == pytest.approx(0.09)

    def test_symmetric_pair(self):
        ens = OpinionEnsemble(np.array([-1.0, 1.0]),
                              [LeaderFamily(np.array([0.0]), LeaderStrategy(psi=1.0, target=0.0))])
        m = empirical_moments(ens, 0.0)
        assert m.mean_f == 0.0
        assert m.energy_f == 1.0

    def test_uniform_sample_mean(self):
        rng = np.random.default_rng(6)
        ens = OpinionEnsemble(
            rng.uniform(-1.0, -0.5, 100_000),
            [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=1.0, target=0.5))],
        )
        m = empirical_moments(ens, 0.0)
        se = (0.5 / np.sqrt(12.0)) / np.sqrt(100_000)
        assert abs(m.mean_f + 0.75) <= 3.0 * se

    def test_cauchy_schwarz(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            ens = _ensemble(rng, n_f=100, n_l=20)
            m = empirical_moments(ens, 0.0)
            assert m.mean_f**2 <= m.energy_f <= 1.0
            assert m.mean_l[0] ** 2 <= m.energy_l[0] <= 1.0

    def test_empty_rejected(self):
        ens = OpinionEnsemble(np.array([]),
                              [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=1.0, target=0.5))])
        with pytest.raises(ValueError):
            empirical_moments(ens, 0.0)


class TestAdaptiveStrategy:
    def _ens(self, followers, leaders, target=0.5, delta=0.5, delta_bar=0.5):
        from opinionsim.core import AdaptiveWindows
        strategy = LeaderStrategy(psi=0.5, target=target,
                                  adaptive=AdaptiveWindows(delta, delta_bar))
        return OpinionEnsemble(np.asarray(followers, dtype=float),
                               [LeaderFamily(np.asarray(leaders, dtype=float), strategy)])

    def test_all_inside_both_windows(self):
        ens = self._ens([0.5, 0.5, 0.5], [0.5, 0.5])
        s = adaptive_strategy_update(ens, 0)
        assert s.psi == 1.0 and s.mu == 0.0

    def test_none_inside_either_window(self):
        ens = self._ens([-0.9, -0.95], [0.6, 0.6], target=0.5, delta=0.2, delta_bar=0.2)
        s = adaptive_strategy_update(ens, 0)
        assert s.psi == 0.0 and s.mu == 1.0

    def test_half_in_target_window_only(self):
        ens = self._ens([0.5, 0.0], [-0.8, -0.8], target=0.5, delta=0.2, delta_bar=0.1)
        s = adaptive_strategy_update(ens, 0)
        assert s.psi == pytest.approx(0.25)

    def test_requires_adaptive_config(self):
        ens = OpinionEnsemble(np.array([0.0]),
                              [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=0.5, target=0.5))])
        with pytest.raises(ValueError):
            adaptive_strategy_update(ens, 0)


class TestInitSampler:
    def test_uniform(self):
        rng = np.random.default_rng(8)
        draws = sample_initial(InitialLaw("uniform", low=-1.0, high=-0.5), 100_000, rng)
        se = (0.5 / np.sqrt(12.0)) / np.sqrt(100_000)
        assert abs(draws.mean() + 0.75) <= 3.0 * se
        assert draws.min() >= -1.0 and draws.max() <= -0.5

    def test_uniform_support_validated(self):
        with pytest.raises(ValueError):
            InitialLaw("uniform", low=-1.5, high=0.0)

    def test_truncated_normal(self):
        rng = np.random.default_rng(9)
        draws = sample_initial(InitialLaw("normal", mean=0.5, variance=0.05), 100_000, rng)
        assert np.abs(draws).max() <= 1.0
        centers, density = histogram(draws, 50)
        assert abs(centers[np.argmax(density)] - 0.5) <= 0.1

    def test_shifted_gamma(self):
        # gamma(2, 1/4) shifted by -1 and truncated: mean of the truncated
        # law is -0.505383 (exact integration of the gamma density on [0, 2])
        rng = np.random.default_rng(10)
        draws = sample_initial(InitialLaw("gamma"), 100_000, rng)
        assert np.abs(draws).max() <= 1.0
        assert abs(draws.mean() - (-0.505383)) <= 3.5e-3

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            sample_initial(InitialLaw("uniform"), 0, np.random.default_rng(0))


class TestHistogram:
    def test_point_mass(self):
        centers, density = histogram(np.zeros(1000), 100)
        assert np.count_nonzero(density) == 1
        assert density.max() == pytest.approx(50.0)

    def test_flat_law(self):
        rng = np.random.default_rng(11)
        _, density = histogram(rng.uniform(-1, 1, 400_000), 4)
        assert np.allclose(density, 0.5, atol=0.01)

    def test_leader_mass(self):
        rng = np.random.default_rng(12)
        centers, density = histogram(rng.uniform(-1, 1, 10_000), 100, mass=0.05)
        width = centers[1] - centers[0]
        assert density.sum() * width == pytest.approx(0.05, rel=1e-12)

    def test_rejects_single_bin(self):
        with pytest.raises(ValueError):
            histogram(np.zeros(10), 1)


class TestRun:
    def test_zero_horizon(self):
        params = _scaled()
        rng = np.random.default_rng(13)
        ens = _ensemble(rng)
        result = run(ens, _model(params), 0.0, (0.0,), rng=rng)
        assert len(result.moments) == 1
        assert result.moments[0].t == 0.0
        assert 0.0 in result.histograms
        assert result.attempted == 0

    def test_determinism(self):
        params = _scaled()
        model = _model(params)
        outs = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            ens = _ensemble(rng, n_f=500, n_l=50)
            result = run(ens, model, 0.05, (0.05,), rng=rng)
            outs.append(result)
        a, b = outs
        assert [m.mean_f for m in a.moments] == [m.mean_f for m in b.moments]
        assert [m.mean_l for m in a.moments] == [m.mean_l for m in b.moments]
        assert np.array_equal(a.histograms[0.05].follower_density,
                              b.histograms[0.05].follower_density)

    def test_certificate_failure_propagates(self):
        params = _scaled(variances=(0.01, 0.01, 40.0))  # leader noise escapes window
        rng = np.random.default_rng(14)
        ens = _ensemble(rng)
        with pytest.raises(CertificateError, match="leader noise"):
            run(ens, _model(params), 0.01, rng=rng)

    def test_moment_stride_and_rejection_series(self):
        params = _scaled()
        rng = np.random.default_rng(15)
        ens = _ensemble(rng)
        result = run(ens, _model(params), 0.01, rng=rng, moment_stride=5)
        assert len(result.moments) == len(result.rejection_series)
        assert [m.t for m in result.moments] == pytest.approx([0.0, 0.005, 0.01])

    def test_out_of_interval_initial_rejected(self):
        params = _scaled()
        ens = OpinionEnsemble(np.array([0.0, 1.5]),
                              [LeaderFamily(np.array([0.5]), LeaderStrategy(psi=0.5, target=0.5))])
        with pytest.raises(ValueError, match="outside"):
            run(ens, _model(params), 0.01, rng=np.random.default_rng(0))

    def test_adaptive_psi_recorded(self):
        from opinionsim.core import AdaptiveWindows
        params = _scaled(variances=(0.0, 0.0, 0.0))
        strategy = LeaderStrategy(psi=0.5, target=0.5,
                                  adaptive=AdaptiveWindows(0.5, 0.5))
        rng = np.random.default_rng(16)
        ens = OpinionEnsemble(
            rng.uniform(0.4, 0.6, 1000),
            [LeaderFamily(rng.uniform(0.45, 0.55, 100), strategy)],
        )
        result = run(ens, _model(params), 0.002, rng=rng)
        # followers sit inside both windows, so the adaptive rule pins psi=1
        assert result.moments[0].psi == (1.0,)
