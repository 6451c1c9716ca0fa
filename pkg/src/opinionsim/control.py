"""Instantaneous binary feedback control for leader pairs.

The control is the closed-form minimizer of a one-step quadratic cost over
a single binary leader interaction.  ``feedback_control`` returns the
additive increment 2*alpha*u that enters both leaders' updates;
``binary_cost`` is the discrete cost it minimizes, and
``verify_optimality`` cross-checks the closed form against an independent
grid + golden-section minimization of that cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CompromiseKernel, LeaderStrategy


@dataclass(frozen=True)
class ControlInput:
    """State seen by the controller for one interacting leader pair.

    ``w_k``, ``w_h`` (and, for batched evaluation, ``alpha``/``beta``) may
    be scalars or broadcast-compatible arrays.  ``m_f`` is the follower
    mean opinion at the current step.
    """

    w_k: float | np.ndarray
    w_h: float | np.ndarray
    m_f: float
    strategy: LeaderStrategy
    alpha: float | np.ndarray
    beta: float | np.ndarray
    kernel_r: CompromiseKernel

    def __post_init__(self):
        if np.any(np.asarray(self.alpha) <= 0.0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        beta = np.asarray(self.beta)
        if np.any(beta <= 0.0) or np.any(beta >= 1.0):
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")


def feedback_control(inp: ControlInput):
    """Additive control increment 2*alpha*u for one leader pair.

    2au = -(beta/2) * [psi*((wk - wd) + (wh - wd)) + mu*((wk - mf) + (wh - mf))]
          - (alpha*beta/2) * (R(wk, wh) - R(wh, wk)) * (wh - wk)

    The second term vanishes identically for symmetric R (both supported
    kernel kinds are symmetric; it is kept for structural fidelity).
    """
    s = inp.strategy
    wk, wh = inp.w_k, inp.w_h
    pull = s.psi * ((wk - s.target) + (wh - s.target)) + s.mu * ((wk - inp.m_f) + (wh - inp.m_f))
    skew = (inp.kernel_r(wk, wh) - inp.kernel_r(wh, wk)) * (wh - wk)
    return -0.5 * inp.beta * pull - 0.5 * inp.alpha * inp.beta * skew


def binary_cost(u, post_pair, m_f, strategy: LeaderStrategy, alpha: float, nu: float):
    """One-step quadratic cost of applying control ``u`` with
    post-interaction leader opinions ``post_pair = (wk, wh)``.

    J = alpha * ( psi/2 * sum (w - wd)^2 + mu/2 * sum (w - m_f)^2 + nu u^2 )
    """
    wk, wh = post_pair
    wd = strategy.target
    radical = (wk - wd) ** 2 + (wh - wd) ** 2
    populist = (wk - m_f) ** 2 + (wh - m_f) ** 2
    return alpha * (0.5 * strategy.psi * radical + 0.5 * strategy.mu * populist + nu * u * u)


@dataclass(frozen=True)
class OptimalityCheck:
    u_closed: float
    u_grid: float
    gap: float
    grid_spacing: float


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def verify_optimality(
    inp: ControlInput,
    nu: float,
    grid: int = 2001,
    refine: bool = True,
) -> OptimalityCheck:
    """Cross-check the closed-form control against direct minimization.

    The oracle composes the zero-noise post-interaction update with
    ``binary_cost`` and minimizes over a candidate grid (optionally
    followed by golden-section refinement inside the bracketing cell).
    Both routes use the same follower-mean approximation (the current
    m_f), so for consistent (alpha, beta, nu) the gap is limited only by
    the search resolution.

    Raises ValueError when beta is inconsistent with (alpha, nu) or when
    the grid minimum touches the bracket boundary.
    """
    if grid < 1000:
        raise ValueError(f"grid resolution must be >= 1000, got {grid}")
    alpha = inp.alpha
    beta_expected = 4.0 * alpha**2 / (nu + 4.0 * alpha**2)
    if not math.isclose(inp.beta, beta_expected, rel_tol=1e-9, abs_tol=1e-15):
        raise ValueError(
            f"beta={inp.beta} inconsistent with alpha={alpha}, nu={nu} "
            f"(expected {beta_expected})"
        )

    wk, wh = float(inp.w_k), float(inp.w_h)
    s = inp.strategy
    drift_k = wk + alpha * float(inp.kernel_r(wk, wh)) * (wh - wk)
    drift_h = wh + alpha * float(inp.kernel_r(wh, wk)) * (wk - wh)

    def cost(u):
        post = (drift_k + 2.0 * alpha * u, drift_h + 2.0 * alpha * u)
        return binary_cost(u, post, inp.m_f, s, alpha, nu)

    u_closed = float(feedback_control(inp)) / (2.0 * alpha)

    # analytic bound |u| <= beta (2 + alpha) / (2 alpha), padded
    half_width = 1.5 * inp.beta * (2.0 + alpha) / (2.0 * alpha) + 0.1
    candidates = np.linspace(-half_width, half_width, grid)
    values = cost(candidates)
    k = int(np.argmin(values))
    if k == 0 or k == grid - 1:
        raise ValueError("grid minimum touches the bracket boundary; widen the bracket")
    spacing = candidates[1] - candidates[0]
    u_grid = float(candidates[k])
    if refine:
        u_grid = _golden_min(cost, candidates[k - 1], candidates[k + 1])
    return OptimalityCheck(
        u_closed=u_closed,
        u_grid=u_grid,
        gap=abs(u_closed - u_grid),
        grid_spacing=float(spacing),
    )
