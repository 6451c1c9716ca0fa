"""Stochastic particle simulator for hierarchical opinion dynamics in
which controlled leader families steer a follower population toward
target opinions, with closed-form moment and stationary-density oracles
for validation."""

from .core import (
    AdaptiveWindows,
    CompromiseKernel,
    DiffusionShape,
    FamilyRates,
    LeaderStrategy,
    ScaledParams,
    derive_scaled,
    eval_kernel,
)
from .control import ControlInput, OptimalityCheck, binary_cost, feedback_control, verify_optimality
from .interactions import (
    BoundCertificate,
    NoiseSpec,
    bound_certificate,
    follower_follower,
    follower_leader,
    leader_leader,
    sample_noise,
)
from .engine import (
    CertificateError,
    EmpiricalMoments,
    FamilyModel,
    InitialLaw,
    LeaderFamily,
    Model,
    OpinionEnsemble,
    RunResult,
    StepPlan,
    adaptive_strategy_update,
    empirical_moments,
    histogram,
    mc_step,
    plan_step,
    run,
    sample_initial,
)
from .moments import (
    DegenerateMeanSystemError,
    LimitEnergyParams,
    MeanSystemParams,
    PreLimitParams,
    analytic_means,
    energy_rhs,
    integrate,
    prelimit_eigenvalues,
    scaled_mean_rhs,
)
from .steady import (
    SteadyDensity,
    b_follower,
    b_leader,
    drift_potential,
    l1_distance,
    normalize,
    stationarity_residual,
    steady_unnormalized,
)

__version__ = "0.1.0"
