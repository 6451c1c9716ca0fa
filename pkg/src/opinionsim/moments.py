"""Closed moment-ODE oracles for the mean and second-moment dynamics,
plus a fixed-step RK4 integrator.

Two parameterizations of the mean system are provided: the scaled-limit
form (``MeanSystemParams`` / ``scaled_mean_rhs``) and the pre-limit form
at finite epsilon (``PreLimitParams``), whose linear 2x2 system admits an
exact exponential solution.  The solution coefficients are obtained from
an eigen-decomposition of the system matrix with the initial conditions
(a 2x2 solve) rather than from any printed closed-form constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LeaderStrategy, ScaledParams


@dataclass(frozen=True)
class MeanSystemParams:
    """Scaled-limit mean system coefficients.

    a_rate = rho / c_fl = 1 / c_fl_hat   (follower relaxation toward m_L)
    b_rate = 4 rho / (c_l kappa) = 4 / (c_l_hat kappa)
    """

    a_rate: float
    b_rate: float
    psi: float
    target: float

    def __post_init__(self):
        if self.a_rate <= 0.0 or self.b_rate <= 0.0:
            raise ValueError("mean-system rates must be positive")
        if not 0.0 <= self.psi <= 1.0:
            raise ValueError(f"psi must be in [0, 1], got {self.psi}")

    @property
    def mu(self) -> float:
        return 1.0 - self.psi

    @classmethod
    def from_scaled(cls, params: ScaledParams, strategy: LeaderStrategy,
                    family: int = 0) -> "MeanSystemParams":
        fam = params.families[family]
        return cls(
            a_rate=1.0 / fam.c_fl_hat,
            b_rate=4.0 / (fam.c_l_hat * params.kappa),
            psi=strategy.psi,
            target=strategy.target,
        )


def scaled_mean_rhs(m_f: float, m_l: float, p: MeanSystemParams) -> tuple[float, float]:
    """Right-hand side of the scaled-limit mean system.

    dm_F/dt = a (m_L - m_F)
    dm_L/dt = b [psi (w_d - m_L) + mu (m_F - m_L)]
    """
    dm_f = p.a_rate * (m_l - m_f)
    dm_l = p.b_rate * (p.psi * (p.target - m_l) + p.mu * (m_f - m_l))
    return dm_f, dm_l


@dataclass(frozen=True)
class PreLimitParams:
    """Finite-epsilon mean system coefficients.

    eta_fl_tilde = rho * eta_fl = 1 / (c_fl_hat epsilon)
    eta_l_tilde  = rho * eta_l  = 1 / (c_l_hat epsilon)
    """

    alpha: float
    beta: float
    eta_fl_tilde: float
    eta_l_tilde: float
    psi: float
    target: float

    def __post_init__(self):
        if self.alpha <= 0.0 or self.eta_fl_tilde <= 0.0 or self.eta_l_tilde <= 0.0:
            raise ValueError("rates must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if not 0.0 <= self.psi <= 1.0:
            raise ValueError(f"psi must be in [0, 1], got {self.psi}")

    @property
    def mu(self) -> float:
        return 1.0 - self.psi

    @classmethod
    def from_scaled(cls, params: ScaledParams, strategy: LeaderStrategy,
                    family: int = 0) -> "PreLimitParams":
        fam = params.families[family]
        return cls(
            alpha=params.alpha,
            beta=params.beta,
            eta_fl_tilde=1.0 / (fam.c_fl_hat * params.epsilon),
            eta_l_tilde=1.0 / (fam.c_l_hat * params.epsilon),
            psi=strategy.psi,
            target=strategy.target,
        )

    def rhs(self, m_f: float, m_l: float) -> tuple[float, float]:
        """Pre-limit mean system right-hand side."""
        a = self.alpha * self.eta_fl_tilde
        b = self.beta * self.eta_l_tilde
        dm_f = a * (m_l - m_f)
        dm_l = b * (self.psi * (self.target - m_l) + self.mu * (m_f - m_l))
        return dm_f, dm_l


def prelimit_eigenvalues(p: PreLimitParams) -> tuple[float, float]:
    """Decay rates (lam1, lam2) of the pre-limit mean system, lam1 >= lam2.

    lam_{1,2} = -(a + b)/2 +- sqrt((a + b)^2 - 4 psi a b)/2 with
    a = alpha eta_fl_tilde, b = beta eta_l_tilde.  The discriminant equals
    (a - b)^2 + 4 mu a b >= 0, so both roots are real; both are strictly
    negative for psi > 0.
    """
    a = p.alpha * p.eta_fl_tilde
    b = p.beta * p.eta_l_tilde
    s = a + b
    disc = s * s - 4.0 * p.psi * a * b
    if disc < 0.0:
        raise ArithmeticError(f"negative discriminant {disc}; parameters invalid")
    root = math.sqrt(disc)
    return (-0.5 * (s - root), -0.5 * (s + root))


class DegenerateMeanSystemError(ValueError):
    """The two decay rates coincide; the exponential-basis solution does
    not apply (integrate the system numerically instead)."""


def analytic_means(t, m_f0: float, m_l0: float, p: PreLimitParams):
    """Exact solution (m_F(t), m_L(t)) of the pre-limit mean system.

    ``t`` may be a scalar or an array of times.  Requires distinct decay
    rates; raises DegenerateMeanSystemError otherwise.
    """
    lam1, lam2 = prelimit_eigenvalues(p)
    scale = max(abs(lam1), abs(lam2), 1.0)
    if abs(lam1 - lam2) <= 1e-12 * scale:
        raise DegenerateMeanSystemError(
            f"coincident decay rates lam1={lam1}, lam2={lam2}"
        )
    a = p.alpha * p.eta_fl_tilde
    b = p.beta * p.eta_l_tilde
    # deviations x = m_L - w_d, y = m_F - w_d follow d/dt [x, y] = A [x, y]
    A = np.array([[-b, b * p.mu], [a, -a]])
    evals, vecs = np.linalg.eig(A)
    coeffs = np.linalg.solve(vecs, np.array([m_l0 - p.target, m_f0 - p.target]))
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    modes = np.exp(np.outer(evals, t_arr)) * coeffs[:, None]
    xy = vecs @ modes
    m_l = p.target + xy[0].real
    m_f = p.target + xy[1].real
    if np.ndim(t) == 0:
        return float(m_f[0]), float(m_l[0])
    return m_f, m_l


@dataclass(frozen=True)
class LimitEnergyParams:
    """Coefficients of the scaled-limit second-moment system for one
    leader family (unit kernels assumed by the closed derivation)."""

    c_f: float
    c_fl: float
    c_l: float
    rho: float
    kappa: float
    psi: float
    target: float
    variance_ff: float
    variance_fl: float
    variance_ll: float

    @property
    def mu(self) -> float:
        return 1.0 - self.psi

    @classmethod
    def from_scaled(cls, params: ScaledParams, strategy: LeaderStrategy,
                    family: int = 0) -> "LimitEnergyParams":
        fam = params.families[family]
        return cls(
            c_f=params.c_f,
            c_fl=fam.c_fl,
            c_l=fam.c_l,
            rho=fam.rho,
            kappa=params.kappa,
            psi=strategy.psi,
            target=strategy.target,
            variance_ff=params.variance_ff,
            variance_fl=params.variance_fl,
            variance_ll=params.variance_ll,
        )


def energy_rhs(e_f: float, e_l: float, m_f: float, m_l: float,
               d2_f: float, d2hat_f: float, d2tilde_l: float,
               p: LimitEnergyParams) -> tuple[float, float]:
    """Scaled-limit second-moment right-hand side.

    The diffusion integrals are population averages supplied by the
    caller: d2_f = <D^2> and d2hat_f = <Dhat^2> over followers,
    d2tilde_l = <Dtilde^2> over the leader family.  They are closed
    (level^2) for constant shapes but genuinely distribution-dependent
    for the quadratic cap, which is why they are inputs here.
    """
    de_f = (
        -(2.0 / p.c_f) * (e_f - m_f * m_f)
        + (2.0 * p.rho / p.c_fl) * (m_f * m_l - e_f)
        + (p.variance_ff / p.c_f) * d2_f
        + (p.variance_fl * p.rho / p.c_fl) * d2hat_f
    )
    anchor = p.psi * p.target + p.mu * m_f
    de_l = (
        -(2.0 * p.rho / p.c_l) * (e_l - m_l * m_l)
        - (4.0 * p.rho / (p.c_l * p.kappa)) * (e_l + m_l * m_l)
        + (8.0 * p.rho / (p.c_l * p.kappa)) * anchor * m_l
        + (p.variance_ll * p.rho / p.c_l) * d2tilde_l
    )
    return de_f, de_l


def integrate(rhs, y0, t_span: tuple[float, float], dt: float):
    """Classical fixed-step RK4 integration of dy/dt = rhs(t, y).

    The step count is rounded so the final time is hit exactly; global
    error is O(dt^4) on smooth systems.  Returns (times, states) with
    states of shape (len(times), len(y0)).
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    t0, t1 = t_span
    if t1 < t0:
        raise ValueError("t_span must be increasing")
    y = np.asarray(y0, dtype=float).copy()
    if t1 == t0:
        return np.array([t0]), y[None, :].copy()
    n_steps = max(1, round((t1 - t0) / dt))
    h = (t1 - t0) / n_steps
    times = t0 + h * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for k in range(n_steps):
        t = times[k]
        k1 = np.asarray(rhs(t, y))
        k2 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k1))
        k3 = np.asarray(rhs(t + 0.5 * h, y + 0.5 * h * k2))
        k4 = np.asarray(rhs(t + h, y + h * k3))
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    return times, out
