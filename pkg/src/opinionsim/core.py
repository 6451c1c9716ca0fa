"""Shared domain types: opinion interval, compromise kernels, diffusion
shapes, leader strategies, and the scaled parameter set with its derived
rates.

Opinions live on the closed interval I = [-1, 1].  Kernels and diffusion
shapes are closed enumerations (not arbitrary callables) so that exact
structural minima needed by the bound certificates can be computed per
kind instead of numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

OPINION_MIN = -1.0
OPINION_MAX = 1.0

KERNEL_KINDS = ("constant", "bounded_confidence")
SHAPE_KINDS = ("none", "constant", "quadratic_cap")


def in_opinion_interval(values, tol: float = 0.0) -> bool:
    """True when every entry of ``values`` lies in [-1, 1] (within tol)."""
    v = np.asarray(values, dtype=float)
    return bool(np.all(np.abs(v) <= 1.0 + tol))


@dataclass(frozen=True)
class CompromiseKernel:
    """Symmetric interaction weight K: I x I -> [0, 1].

    ``constant`` evaluates to a fixed level; ``bounded_confidence``
    evaluates to 1 when |a - b| <= threshold and 0 otherwise.
    """

    kind: str
    level: float = 1.0
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}")
        if self.kind == "constant" and not 0.0 <= self.level <= 1.0:
            raise ValueError(f"constant kernel level must be in [0, 1], got {self.level}")
        if self.kind == "bounded_confidence" and not 0.0 <= self.threshold <= 2.0:
            raise ValueError(f"bounded-confidence threshold must be in [0, 2], got {self.threshold}")

    @classmethod
    def constant(cls, level: float = 1.0) -> "CompromiseKernel":
        return cls("constant", level=level)

    @classmethod
    def bounded_confidence(cls, threshold: float) -> "CompromiseKernel":
        return cls("bounded_confidence", threshold=threshold)

    def __call__(self, a, b):
        if self.kind == "constant":
            # scalar broadcasts against any opinion array
            return self.level
        return np.where(np.abs(np.subtract(a, b)) <= self.threshold, 1.0, 0.0)

    def min_value(self) -> float:
        """Exact minimum of the kernel over I x I."""
        if self.kind == "constant":
            return self.level
        return 1.0 if self.threshold >= 2.0 else 0.0

    @property
    def is_unit(self) -> bool:
        return self.kind == "constant" and self.level == 1.0


def eval_kernel(kernel: CompromiseKernel, a, b):
    """Evaluate a compromise kernel at a pair of opinions."""
    return kernel(a, b)


@dataclass(frozen=True)
class DiffusionShape:
    """Local diffusion weight D: I -> [0, 1].

    ``none`` switches diffusion off, ``constant`` applies a flat level in
    (0, 1], and ``quadratic_cap`` applies D(w) = 1 - w^2, which vanishes
    exactly at the interval endpoints.
    """

    kind: str
    level: float = 0.0

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise ValueError(f"unknown diffusion kind {self.kind!r}; expected one of {SHAPE_KINDS}")
        if self.kind == "constant" and not 0.0 < self.level <= 1.0:
            raise ValueError(f"constant diffusion level must be in (0, 1], got {self.level}")

    @classmethod
    def none(cls) -> "DiffusionShape":
        return cls("none")

    @classmethod
    def constant(cls, level: float) -> "DiffusionShape":
        return cls("constant", level=level)

    @classmethod
    def quadratic_cap(cls) -> "DiffusionShape":
        return cls("quadratic_cap")

    def __call__(self, w):
        if self.kind == "none":
            return 0.0
        if self.kind == "constant":
            return self.level
        w = np.asarray(w, dtype=float)
        out = 1.0 - w * w
        return float(out) if out.ndim == 0 else out

    def bound_ratios(self) -> tuple[float, float]:
        """Exact infima of (1+w)/D(w) and (1-w)/D(w) over {D != 0}.

        Returns (d_minus, d_plus).  These are the structural constants of
        the bound-preservation conditions; ``none`` poses no constraint
        (infinite window), a flat level touches the endpoints (zero
        window), and the quadratic cap gives 1/(1 -+ w) with infimum 1/2.
        """
        if self.kind == "none":
            return math.inf, math.inf
        if self.kind == "constant":
            return 0.0, 0.0
        return 0.5, 0.5


@dataclass(frozen=True)
class AdaptiveWindows:
    """Half-widths of the two follower-counting windows of an adaptive
    strategy (around the target and around the family's mean opinion)."""

    delta: float
    delta_bar: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if not 0.0 <= self.delta_bar <= 1.0:
            raise ValueError(f"delta_bar must be in [0, 1], got {self.delta_bar}")


@dataclass(frozen=True)
class LeaderStrategy:
    """Mix between radical (weight psi, pull toward ``target``) and
    populistic (weight mu = 1 - psi, pull toward the follower mean)
    behaviour.  mu is always derived, so psi + mu = 1 holds exactly.
    """

    psi: float
    target: float
    adaptive: AdaptiveWindows | None = None

    def __post_init__(self):
        if not 0.0 <= self.psi <= 1.0:
            raise ValueError(f"psi must be in [0, 1], got {self.psi}")
        if not OPINION_MIN <= self.target <= OPINION_MAX:
            raise ValueError(f"target opinion must be in [-1, 1], got {self.target}")

    @property
    def mu(self) -> float:
        return 1.0 - self.psi

    def with_psi(self, psi: float) -> "LeaderStrategy":
        return replace(self, psi=float(psi))


@dataclass(frozen=True)
class FamilyRates:
    """Per-family compact-notation constants: c_fl_hat = c_fl / rho and
    c_l_hat = c_l / rho, plus the family mass rho."""

    c_fl_hat: float
    c_l_hat: float
    rho: float

    def __post_init__(self):
        if self.c_fl_hat <= 0.0:
            raise ValueError(f"c_fl_hat must be > 0, got {self.c_fl_hat}")
        if self.c_l_hat <= 0.0:
            raise ValueError(f"c_l_hat must be > 0, got {self.c_l_hat}")
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")

    @property
    def c_fl(self) -> float:
        return self.c_fl_hat * self.rho

    @property
    def c_l(self) -> float:
        return self.c_l_hat * self.rho


@dataclass(frozen=True)
class ScaledParams:
    """Scaled simulation parameters and their derived quantities.

    epsilon is the joint scaling parameter; kappa the scaled control
    penalty (nu = epsilon * kappa).  variance_* are the scaled noise
    variances for follower-follower, follower-leader and leader-leader
    moves; the per-interaction variances are sigma2_* = epsilon *
    variance_*.
    """

    epsilon: float
    kappa: float
    c_f: float
    variance_ff: float
    variance_fl: float
    variance_ll: float
    families: tuple[FamilyRates, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.kappa <= 0.0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.c_f <= 0.0:
            raise ValueError(f"c_f must be > 0, got {self.c_f}")
        for name in ("variance_ff", "variance_fl", "variance_ll"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.families:
            raise ValueError("at least one leader family is required")
        total_rho = sum(f.rho for f in self.families)
        if total_rho > 1.0 + 1e-12:
            raise ValueError(f"total leader mass must be <= 1, got {total_rho}")

    # -- derived quantities -------------------------------------------------

    @property
    def nu(self) -> float:
        return self.epsilon * self.kappa

    @property
    def alpha(self) -> float:
        return self.epsilon

    @property
    def beta(self) -> float:
        return 4.0 * self.epsilon / (self.kappa + 4.0 * self.epsilon)

    @property
    def sigma2_ff(self) -> float:
        return self.epsilon * self.variance_ff

    @property
    def sigma2_fl(self) -> float:
        return self.epsilon * self.variance_fl

    @property
    def sigma2_ll(self) -> float:
        return self.epsilon * self.variance_ll

    @property
    def eta_f(self) -> float:
        return 1.0 / (self.c_f * self.epsilon)

    @property
    def eta_fl(self) -> tuple[float, ...]:
        return tuple(1.0 / (f.c_fl_hat * f.rho * self.epsilon) for f in self.families)

    @property
    def eta_l(self) -> tuple[float, ...]:
        return tuple(1.0 / (f.c_l_hat * f.rho * self.epsilon) for f in self.families)


def derive_scaled(
    *,
    epsilon: float,
    nu: float | None = None,
    kappa: float | None = None,
    c_f: float,
    variance_ff: float,
    variance_fl: float,
    variance_ll: float,
    families,
) -> ScaledParams:
    """Build a ScaledParams set from raw inputs.

    Exactly one of ``nu`` (raw control penalty, converted via
    kappa = nu / epsilon) or ``kappa`` must be given.  ``families`` is an
    iterable of FamilyRates or (c_fl_hat, c_l_hat, rho) triples.
    """
    if (nu is None) == (kappa is None):
        raise ValueError("exactly one of nu or kappa must be given")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if kappa is None:
        if nu <= 0.0:
            raise ValueError(f"nu must be > 0, got {nu}")
        kappa = nu / epsilon
    fams = tuple(f if isinstance(f, FamilyRates) else FamilyRates(*f) for f in families)
    return ScaledParams(
        epsilon=epsilon,
        kappa=kappa,
        c_f=c_f,
        variance_ff=variance_ff,
        variance_fl=variance_fl,
        variance_ll=variance_ll,
        families=fams,
    )
