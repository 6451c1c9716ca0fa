"""Binary interaction rules, noise sampling, and bound certificates.

All three rules are plain functions of their inputs and broadcast over
numpy arrays, so the Monte Carlo engine can apply them to whole batches
of disjoint pairs at once.  None of them clamp: producing an opinion
outside [-1, 1] is possible with noise and is handled upstream by
rejection of the whole interaction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import ControlInput, feedback_control
from .core import CompromiseKernel, DiffusionShape, LeaderStrategy


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean symmetric uniform noise with the given (post-scaling)
    variance; support is [-sqrt(3 var), +sqrt(3 var)]."""

    variance: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")

    @property
    def support(self) -> float:
        return math.sqrt(3.0 * self.variance)

    def sample(self, rng: np.random.Generator, size=None):
        if self.variance == 0.0:
            return 0.0 if size is None else np.zeros(size)
        s = self.support
        return rng.uniform(-s, s, size)


def sample_noise(spec: NoiseSpec, rng: np.random.Generator, size=None):
    """Draw one (or ``size``) noise realizations from ``spec``."""
    return spec.sample(rng, size)


def follower_follower(w, v, theta1, theta2, kernel_p: CompromiseKernel,
                      shape_d: DiffusionShape, alpha: float):
    """Symmetric compromise move between two followers.

    w* = w + alpha P(w, v) (v - w) + theta1 D(w)   (and symmetrically v*).
    """
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    w_new = w + alpha * kernel_p(w, v) * (v - w) + theta1 * shape_d(w)
    v_new = v + alpha * kernel_p(v, w) * (w - v) + theta2 * shape_d(v)
    return w_new, v_new


def follower_leader(w, leader, theta_hat, kernel_s: CompromiseKernel,
                    shape_hat: DiffusionShape, alpha: float):
    """One-way move of a follower toward a leader; the leader opinion is
    returned unchanged (bit-identical)."""
    w = np.asarray(w, dtype=float)
    w_new = w + alpha * kernel_s(w, leader) * (leader - w) + theta_hat * shape_hat(w)
    return w_new, leader


def leader_leader(w, v, theta1, theta2, kernel_r: CompromiseKernel,
                  shape_tilde: DiffusionShape, alpha: float, beta: float,
                  m_f: float, strategy: LeaderStrategy):
    """Compromise move between two leaders with the embedded feedback
    control; both outputs receive the same control increment."""
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    increment = feedback_control(ControlInput(
        w_k=w, w_h=v, m_f=m_f, strategy=strategy,
        alpha=alpha, beta=beta, kernel_r=kernel_r,
    ))
    w_new = w + alpha * kernel_r(w, v) * (v - w) + increment + theta1 * shape_tilde(w)
    v_new = v + alpha * kernel_r(v, w) * (w - v) + increment + theta2 * shape_tilde(v)
    return w_new, v_new


@dataclass(frozen=True)
class BoundCertificate:
    """Exact structural constants and per-condition verdicts of the
    sufficient bound-preservation conditions.

    The noise windows are symmetric, with the lower edges entering
    negatively: noise realizations must satisfy -d_minus (1 - beta/2) <=
    theta <= d_plus (1 - beta/2) for leader moves and -(1 - alpha) k_minus
    <= theta <= (1 - alpha) k_plus for follower-leader moves, so a
    zero-mean law with support s passes when s <= min(d_minus, d_plus) *
    (1 - beta/2), respectively s <= min(k_minus, k_plus) * (1 - alpha).
    """

    r: float
    d_minus: float
    d_plus: float
    k_minus: float
    k_plus: float
    contraction_ok: bool
    leader_noise_ok: bool
    follower_noise_ok: bool

    @property
    def satisfied(self) -> bool:
        return self.contraction_ok and self.leader_noise_ok and self.follower_noise_ok


def bound_certificate(kernel_r: CompromiseKernel, shape_tilde: DiffusionShape,
                      shape_hat: DiffusionShape, alpha: float, beta: float,
                      leader_noise: NoiseSpec, follower_noise: NoiseSpec) -> BoundCertificate:
    """Evaluate the sufficient bound-preservation conditions.

    Conditions checked:
      * alpha * min(R) >= beta / 2                       (leader contraction)
      * leader noise support within the d-window scaled by (1 - beta/2)
      * follower-leader noise support within the k-window scaled by (1 - alpha)

    Structural minima are exact per enumeration kind (see
    ``CompromiseKernel.min_value`` / ``DiffusionShape.bound_ratios``).
    """
    if not isinstance(kernel_r, CompromiseKernel):
        raise TypeError("kernel_r must be a CompromiseKernel")
    r = kernel_r.min_value()
    d_minus, d_plus = shape_tilde.bound_ratios()
    k_minus, k_plus = shape_hat.bound_ratios()

    contraction_ok = alpha * r >= beta / 2.0
    d_window = min(d_minus, d_plus) * (1.0 - beta / 2.0)
    k_window = min(k_minus, k_plus) * (1.0 - alpha)
    leader_noise_ok = leader_noise.support <= d_window
    follower_noise_ok = follower_noise.support <= k_window
    return BoundCertificate(
        r=r,
        d_minus=d_minus,
        d_plus=d_plus,
        k_minus=k_minus,
        k_plus=k_plus,
        contraction_ok=bool(contraction_ok),
        leader_noise_ok=bool(leader_noise_ok),
        follower_noise_ok=bool(follower_noise_ok),
    )
