"""Monte Carlo engine: pair sampling, sub-round stepping, rejection of
out-of-interval moves, adaptive strategies, and empirical statistics.

One step runs three sub-rounds in a fixed order: follower-follower pairs,
follower-leader interactions per family, then leader-leader pairs per
family.  Followers and leaders are shuffled into disjoint pairs (an odd
leftover agent idles for that process); each candidate interaction fires
with the per-process probability from the step plan.  Any interaction
whose output would leave [-1, 1] is rejected wholesale -- both
participants keep their pre-interaction values -- and counted.  The
follower mean fed to the leader control is frozen at the step start.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    CompromiseKernel,
    DiffusionShape,
    LeaderStrategy,
    ScaledParams,
    in_opinion_interval,
)
from .interactions import (
    BoundCertificate,
    NoiseSpec,
    bound_certificate,
    follower_follower,
    follower_leader,
    leader_leader,
)


class CertificateError(RuntimeError):
    """Raised when a run is started with parameters whose bound
    certificate is not satisfied."""


@dataclass
class LeaderFamily:
    """Mutable state of one leader family: opinions plus the strategy in
    effect (replaced on adaptive updates)."""

    opinions: np.ndarray
    strategy: LeaderStrategy

    def copy(self) -> "LeaderFamily":
        return LeaderFamily(self.opinions.copy(), self.strategy)


@dataclass
class OpinionEnsemble:
    """Particle state: one follower population and M leader families."""

    followers: np.ndarray
    families: list[LeaderFamily]

    def copy(self) -> "OpinionEnsemble":
        return OpinionEnsemble(self.followers.copy(), [f.copy() for f in self.families])


@dataclass(frozen=True)
class FamilyModel:
    """Interaction rules of one leader family: follower-leader kernel S
    and noise weight Dhat, leader-leader kernel R and noise weight Dtilde."""

    kernel_s: CompromiseKernel
    kernel_r: CompromiseKernel
    shape_hat: DiffusionShape
    shape_tilde: DiffusionShape


@dataclass(frozen=True)
class Model:
    """Full interaction model: scaled parameters, the follower-follower
    kernel P and noise weight D, and the per-family rules."""

    params: ScaledParams
    kernel_p: CompromiseKernel
    shape_d: DiffusionShape
    families: tuple[FamilyModel, ...]

    def __post_init__(self):
        if len(self.families) != len(self.params.families):
            raise ValueError(
                f"model has {len(self.families)} family rule sets but params "
                f"describe {len(self.params.families)} families"
            )

    def certificates(self) -> list[BoundCertificate]:
        p = self.params
        noise_ll = NoiseSpec(p.sigma2_ll)
        noise_fl = NoiseSpec(p.sigma2_fl)
        return [
            bound_certificate(f.kernel_r, f.shape_tilde, f.shape_hat,
                              p.alpha, p.beta, noise_ll, noise_fl)
            for f in self.families
        ]


@dataclass(frozen=True)
class StepPlan:
    """Time step and per-process interaction probabilities; the fastest
    process saturates at probability exactly 1."""

    dt: float
    p_ff: float
    p_fl: tuple[float, ...]
    p_ll: tuple[float, ...]


def plan_step(params: ScaledParams) -> StepPlan:
    """dt = epsilon * min over process constants; probabilities are the
    ratios c_min / c_process, so every probability is in (0, 1] and the
    slowest constant's process fires with probability exactly 1."""
    constants = [params.c_f]
    constants += [f.c_fl_hat for f in params.families]
    constants += [f.c_l_hat for f in params.families]
    c_min = min(constants)
    return StepPlan(
        dt=params.epsilon * c_min,
        p_ff=c_min / params.c_f,
        p_fl=tuple(c_min / f.c_fl_hat for f in params.families),
        p_ll=tuple(c_min / f.c_l_hat for f in params.families),
    )


@dataclass(frozen=True)
class EmpiricalMoments:
    """First and second empirical moments per population at one time."""

    t: float
    mean_f: float
    energy_f: float
    mean_l: tuple[float, ...]
    energy_l: tuple[float, ...]
    psi: tuple[float, ...]


def empirical_moments(ens: OpinionEnsemble, t: float) -> EmpiricalMoments:
    """Arithmetic means of w and w^2 per population."""
    if ens.followers.size == 0:
        raise ValueError("follower population is empty")
    for k, fam in enumerate(ens.families):
        if fam.opinions.size == 0:
            raise ValueError(f"leader family {k} is empty")
    w = ens.followers
    return EmpiricalMoments(
        t=float(t),
        mean_f=float(w.mean()),
        energy_f=float((w * w).mean()),
        mean_l=tuple(float(f.opinions.mean()) for f in ens.families),
        energy_l=tuple(float((f.opinions * f.opinions).mean()) for f in ens.families),
        psi=tuple(f.strategy.psi for f in ens.families),
    )


@dataclass
class StepCounts:
    attempted: int = 0
    rejected: int = 0

    def add(self, attempted: int, rejected: int) -> None:
        self.attempted += int(attempted)
        self.rejected += int(rejected)


def _disjoint_pairs(n: int, prob: float, rng: np.random.Generator):
    """Disjoint random pairing by shuffle; keeps each pair with ``prob``."""
    perm = rng.permutation(n)
    half = n // 2
    i, j = perm[:half], perm[half:2 * half]
    if prob < 1.0:
        keep = rng.random(half) < prob
        i, j = i[keep], j[keep]
    return i, j


def _apply_pair_update(values, i, j, new_i, new_j, counts: StepCounts) -> None:
    ok = (np.abs(new_i) <= 1.0) & (np.abs(new_j) <= 1.0)
    counts.add(i.size, i.size - int(ok.sum()))
    if ok.all():
        values[i] = new_i
        values[j] = new_j
    else:
        values[i[ok]] = new_i[ok]
        values[j[ok]] = new_j[ok]


def mc_step(ens: OpinionEnsemble, model: Model, plan: StepPlan,
            rng: np.random.Generator) -> StepCounts:
    """Advance the ensemble by one time step in place; returns the
    attempted/rejected interaction counts."""
    p = model.params
    alpha, beta = p.alpha, p.beta
    w = ens.followers
    n = w.size
    m_f = float(w.mean())  # frozen for the leader control this step
    noise_ff = NoiseSpec(p.sigma2_ff)
    noise_fl = NoiseSpec(p.sigma2_fl)
    noise_ll = NoiseSpec(p.sigma2_ll)
    counts = StepCounts()

    # (a) follower-follower
    i, j = _disjoint_pairs(n, plan.p_ff, rng)
    if i.size:
        t1 = noise_ff.sample(rng, i.size)
        t2 = noise_ff.sample(rng, i.size)
        wi, wj = follower_follower(w[i], w[j], t1, t2, model.kernel_p,
                                   model.shape_d, alpha)
        _apply_pair_update(w, i, j, wi, wj, counts)

    # (b) follower-leader, per family
    for fam, rules, p_fl in zip(ens.families, model.families, plan.p_fl):
        if p_fl >= 1.0:
            idx = None  # whole population
            size = n
        else:
            idx = np.flatnonzero(rng.random(n) < p_fl)
            size = idx.size
        if size == 0:
            continue
        leaders = fam.opinions[rng.integers(0, fam.opinions.size, size)]
        theta = noise_fl.sample(rng, size)
        cur = w if idx is None else w[idx]
        new, _ = follower_leader(cur, leaders, theta, rules.kernel_s,
                                 rules.shape_hat, alpha)
        ok = np.abs(new) <= 1.0
        counts.add(size, size - int(ok.sum()))
        if idx is None:
            if ok.all():
                w[:] = new
            else:
                np.copyto(w, new, where=ok)
        else:
            if ok.all():
                w[idx] = new
            else:
                w[idx[ok]] = new[ok]

    # (c) leader-leader, per family, with m_f frozen at step start
    for fam, rules, p_ll in zip(ens.families, model.families, plan.p_ll):
        lw = fam.opinions
        i, j = _disjoint_pairs(lw.size, p_ll, rng)
        if i.size == 0:
            continue
        t1 = noise_ll.sample(rng, i.size)
        t2 = noise_ll.sample(rng, i.size)
        li, lj = leader_leader(lw[i], lw[j], t1, t2, rules.kernel_r,
                               rules.shape_tilde, alpha, beta, m_f,
                               fam.strategy)
        _apply_pair_update(lw, i, j, li, lj, counts)

    return counts


def adaptive_strategy_update(ens: OpinionEnsemble, family: int) -> LeaderStrategy:
    """Recompute psi for one adaptive family from the current follower
    ensemble: half the fraction of followers within delta of the target
    plus half the fraction within delta_bar of the family's mean opinion."""
    fam = ens.families[family]
    windows = fam.strategy.adaptive
    if windows is None:
        raise ValueError(f"family {family} has no adaptive configuration")
    w = ens.followers
    target = fam.strategy.target
    mean_l = float(fam.opinions.mean())
    frac_target = float(np.mean(np.abs(w - target) <= windows.delta))
    frac_mean = float(np.mean(np.abs(w - mean_l) <= windows.delta_bar))
    return fam.strategy.with_psi(0.5 * frac_target + 0.5 * frac_mean)


@dataclass(frozen=True)
class InitialLaw:
    """Initial opinion distribution: uniform on [low, high] within I,
    normal(mean, variance) truncated to I by resampling, or a gamma law
    (shape/scale) shifted by ``shift`` and truncated to I by resampling."""

    law: str
    low: float = -1.0
    high: float = 1.0
    mean: float = 0.0
    variance: float = 1.0
    shape: float = 2.0
    scale: float = 0.25
    shift: float = -1.0

    def __post_init__(self):
        if self.law not in ("uniform", "normal", "gamma"):
            raise ValueError(f"unknown initial law {self.law!r}")
        if self.law == "uniform" and not (-1.0 <= self.low < self.high <= 1.0):
            raise ValueError(
                f"uniform support [{self.low}, {self.high}] must lie inside [-1, 1]"
            )
        if self.law == "normal" and self.variance <= 0.0:
            raise ValueError("normal variance must be > 0")
        if self.law == "gamma" and (self.shape <= 0.0 or self.scale <= 0.0):
            raise ValueError("gamma shape and scale must be > 0")


def sample_initial(law: InitialLaw, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` initial opinions; truncated laws resample until all
    draws land inside [-1, 1]."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if law.law == "uniform":
        return rng.uniform(law.low, law.high, n)

    if law.law == "normal":
        def draw(k):
            return rng.normal(law.mean, np.sqrt(law.variance), k)
    else:
        def draw(k):
            return rng.gamma(law.shape, law.scale, k) + law.shift

    out = draw(n)
    bad = np.abs(out) > 1.0
    while bad.any():
        out[bad] = draw(int(bad.sum()))
        bad = np.abs(out) > 1.0
    return out


def histogram(values: np.ndarray, bins: int, mass: float = 1.0):
    """Equal-width histogram density over [-1, 1] integrating to ``mass``.

    Returns (bin_centers, densities).
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    counts, edges = np.histogram(values, bins=bins, range=(-1.0, 1.0))
    width = edges[1] - edges[0]
    centers = 0.5 * (edges[:-1] + edges[1:])
    density = counts * (mass / (values.size * width))
    return centers, density


@dataclass(frozen=True)
class HistogramSnapshot:
    t: float
    centers: np.ndarray
    follower_density: np.ndarray
    leader_densities: tuple[np.ndarray, ...]


@dataclass
class RunResult:
    moments: list[EmpiricalMoments]
    histograms: dict[float, HistogramSnapshot] = field(default_factory=dict)
    rejection_series: list[float] = field(default_factory=list)  # cumulative, per moments row
    attempted: int = 0
    rejected: int = 0

    @property
    def rejection_fraction(self) -> float:
        return self.rejected / self.attempted if self.attempted else 0.0


def check_certificates(model: Model) -> list[BoundCertificate]:
    """Raise CertificateError naming the first failing condition."""
    certs = model.certificates()
    for k, cert in enumerate(certs):
        if not cert.satisfied:
            failing = [
                name for name, ok in (
                    ("contraction (alpha r >= beta/2)", cert.contraction_ok),
                    ("leader noise window", cert.leader_noise_ok),
                    ("follower noise window", cert.follower_noise_ok),
                ) if not ok
            ]
            raise CertificateError(
                f"bound certificate failed for leader family {k}: "
                + "; ".join(failing)
            )
    return certs


def run(ens: OpinionEnsemble, model: Model, t_final: float,
        checkpoints=(), *, rng: np.random.Generator, bins: int = 100,
        moment_stride: int = 1) -> RunResult:
    """Run the simulation to ``t_final``, recording moments every
    ``moment_stride`` steps and histograms at the checkpoint times.

    Checkpoints must lie in [0, t_final] and are snapped to the nearest
    step.  Adaptive strategies are refreshed before every step.  The
    result is deterministic for a fixed (initial ensemble, model, rng
    state).
    """
    if t_final < 0.0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    if moment_stride < 1:
        raise ValueError("moment_stride must be >= 1")
    if len(ens.families) != len(model.families):
        raise ValueError("ensemble and model family counts differ")
    if not in_opinion_interval(ens.followers) or not all(
            in_opinion_interval(f.opinions) for f in ens.families):
        raise ValueError("initial ensemble contains opinions outside [-1, 1]")
    check_certificates(model)

    plan = plan_step(model.params)
    n_steps = 0 if t_final == 0.0 else max(1, round(t_final / plan.dt))
    cp_steps: dict[int, float] = {}
    for t in checkpoints:
        if not 0.0 <= t <= t_final + 1e-12:
            raise ValueError(f"checkpoint {t} outside [0, {t_final}]")
        cp_steps[min(round(t / plan.dt), n_steps)] = float(t)

    masses = [f.rho for f in model.params.families]

    def snapshot(step: int) -> HistogramSnapshot:
        t = cp_steps[step]
        centers, density_f = histogram(ens.followers, bins)
        leader_densities = tuple(
            histogram(fam.opinions, bins, mass=m)[1]
            for fam, m in zip(ens.families, masses)
        )
        return HistogramSnapshot(t, centers, density_f, leader_densities)

    def adapt() -> None:
        for idx, fam in enumerate(ens.families):
            if fam.strategy.adaptive is not None:
                fam.strategy = adaptive_strategy_update(ens, idx)

    adapt()
    result = RunResult(moments=[empirical_moments(ens, 0.0)], rejection_series=[0.0])
    if 0 in cp_steps:
        result.histograms[cp_steps[0]] = snapshot(0)

    for k in range(n_steps):
        if k > 0:
            adapt()
        counts = mc_step(ens, model, plan, rng)
        result.attempted += counts.attempted
        result.rejected += counts.rejected
        step = k + 1
        if step % moment_stride == 0 or step == n_steps:
            result.moments.append(empirical_moments(ens, step * plan.dt))
            result.rejection_series.append(result.rejection_fraction)
        if step in cp_steps:
            result.histograms[cp_steps[step]] = snapshot(step)

    return result
