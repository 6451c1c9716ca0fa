"""Closed-form stationary opinion densities, their normalization, and
distances to empirical histograms.

The stationary profile with unit kernels and quadratic-cap diffusion is

    f(w) = a / (1 - w^2)^2 * exp{ -(2/b) * V(w) },
    V(w) = int_0^w (z - w_d) / (1 - z^2)^2 dz,

where V has the closed partial-fraction form implemented in
``drift_potential`` (validated against adaptive quadrature in the test
suite).  ``b`` is the population-specific diffusion/drift ratio from
``b_follower`` / ``b_leader``; ``a`` is our normalization constant, fixed
so that the density integrates to the population mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

POPULATIONS = ("follower", "leader")

# integration window is truncated at 1 - ENDPOINT_TRUNCATION; the discarded
# tail is exponentially small (see truncation_tail_bound)
ENDPOINT_TRUNCATION = 1e-8

# 10th-order centered first-derivative stencil (offsets -5..5).  High order
# is needed for the stationarity residual to be truncation-limited below
# 1e-5 on ~10^3-point grids even for boundary-spiked profiles (large b).
_STENCIL = np.array([-2.0, 25.0, -150.0, 600.0, -2100.0, 0.0,
                     2100.0, -600.0, 150.0, -25.0, 2.0]) / 2520.0
_STENCIL_HALF = 5

# 5-point Gauss-Legendre rule on [-1, 1] for per-bin cell averages
_GL_NODES = np.array([
    -0.906179845938664, -0.538469310105683, 0.0,
    0.538469310105683, 0.906179845938664,
])
_GL_WEIGHTS = np.array([
    0.236926885056189, 0.478628670499366, 0.568888888888889,
    0.478628670499366, 0.236926885056189,
])


def b_follower(variance_ff: float, variance_fl: float, c_f: float,
               c_fl: float, rho: float) -> float:
    """Follower diffusion/drift ratio: the c-weighted convex combination
    of the two follower noise variances."""
    if min(c_f, c_fl, rho) <= 0.0:
        raise ValueError("constants must be positive")
    return (variance_ff * c_fl + variance_fl * c_f * rho) / (c_fl + c_f * rho)


def b_leader(variance_ll: float, rho: float, kappa: float, c_l: float) -> float:
    """Leader diffusion/drift ratio b_L = varsigma_ll^2 rho kappa / (2 c_l).

    The strategy weights enter the source expression only through their
    unit sum, so they cancel here.
    """
    if min(rho, kappa, c_l) <= 0.0:
        raise ValueError("constants must be positive")
    return variance_ll * rho * kappa / (2.0 * c_l)


def drift_potential(w, target: float):
    """Closed form of V(w) = int_0^w (z - w_d)/(1 - z^2)^2 dz.

    Partial fractions of the integrand give

        V(w) = (w_d/4) log((1-w)/(1+w)) + w (w - w_d) / (2 (1 - w^2)).
    """
    w = np.asarray(w, dtype=float)
    val = target / 4.0 * np.log((1.0 - w) / (1.0 + w)) + w * (w - target) / (2.0 * (1.0 - w * w))
    return float(val) if val.ndim == 0 else val


def steady_unnormalized(w, target: float, b: float):
    """Unnormalized stationary profile (1-w^2)^-2 exp(-(2/b) V(w)).

    Only defined strictly inside the interval; rejects |w| >= 1.
    """
    if b <= 0.0:
        raise ValueError(f"b must be > 0, got {b}")
    w_arr = np.asarray(w, dtype=float)
    if np.any(np.abs(w_arr) >= 1.0):
        raise ValueError("steady density is only defined for |w| < 1")
    one_minus = 1.0 - w_arr * w_arr
    val = one_minus**-2 * np.exp(-2.0 / b * drift_potential(w_arr, target))
    return float(val) if val.ndim == 0 else val


def _stabilized_profile(w, target: float, b: float):
    """Unnormalized profile with the potential referenced to its minimum
    at the target, so the exponent is always <= 0.  This differs from
    ``steady_unnormalized`` by the constant factor exp(-(2/b) V(w_d)),
    which the normalization constant absorbs; it avoids overflow for
    small b with off-center targets."""
    w_arr = np.asarray(w, dtype=float)
    if np.any(np.abs(w_arr) >= 1.0):
        raise ValueError("steady density is only defined for |w| < 1")
    one_minus = 1.0 - w_arr * w_arr
    shift = drift_potential(target, target)
    val = one_minus**-2 * np.exp(-2.0 / b * (drift_potential(w_arr, target) - shift))
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class SteadyDensity:
    """Normalized stationary density for one population.

    Evaluates a * (1 - w^2)^-2 * exp{-(2/b)(V(w) - V(w_d))}; the constant
    a is fixed by ``normalize`` so the density carries ``mass``.
    """

    population: str
    target: float
    b: float
    a: float
    mass: float

    def __post_init__(self):
        if self.population not in POPULATIONS:
            raise ValueError(f"population must be one of {POPULATIONS}")

    def __call__(self, w):
        return self.a * _stabilized_profile(w, self.target, self.b)


def normalize(target: float, b: float, mass: float = 1.0,
              population: str = "follower") -> SteadyDensity:
    """Fix the normalization constant so the density integrates to ``mass``.

    Adaptive quadrature on [-1 + 1e-8, 1 - 1e-8]; the discarded endpoint
    tails are exponentially small (``truncation_tail_bound``).  Raises
    RuntimeError when the quadrature error estimate is not far below the
    1e-8 mass tolerance.
    """
    if not -1.0 < target < 1.0:
        raise ValueError(f"target must lie strictly inside (-1, 1), got {target}")
    if b <= 0.0:
        raise ValueError(f"b must be > 0, got {b}")
    if not 0.0 < mass <= 1.0:
        raise ValueError(f"mass must be in (0, 1], got {mass}")
    lo, hi = -1.0 + ENDPOINT_TRUNCATION, 1.0 - ENDPOINT_TRUNCATION
    total, err = quad(lambda z: _stabilized_profile(z, target, b), lo, hi,
                      points=[target], limit=400, epsabs=1e-13, epsrel=1e-12)
    if not math.isfinite(total) or total <= 0.0 or err > 1e-9 * total:
        raise RuntimeError(
            f"stationary-density quadrature did not converge (total={total}, err={err})"
        )
    return SteadyDensity(population=population, target=target, b=b,
                         a=mass / total, mass=mass)


def truncation_tail_bound(density: SteadyDensity) -> float:
    """Bound on the normalized mass discarded outside the truncated
    integration window.

    Within the truncated slivers the integrand is monotone toward the
    interior cut (the exponential decay dominates there for any window
    much narrower than the decay scale), so each tail is bounded by the
    sliver width times the value at its interior edge; a factor 2 pads
    the estimate.
    """
    t = ENDPOINT_TRUNCATION
    edge = density(1.0 - t) + density(-1.0 + t)
    return 2.0 * t * edge


def stationarity_residual(density: SteadyDensity, grid: np.ndarray) -> float:
    """Max-norm residual of the stationary balance on a uniform grid.

    residual(w) = |(w_d - w) f(w) - (b/2) d/dw[(1 - w^2)^2 f(w)]|

    with the derivative taken by the 10th-order centered stencil at the
    grid spacing; the maximum runs over the interior points where the
    stencil fits.  The grid must be uniform and avoid |w| > 1 - 1e-4.
    """
    x = np.asarray(grid, dtype=float)
    if x.size < 2 * _STENCIL_HALF + 2:
        raise ValueError("grid too small for the centered stencil")
    if np.any(np.abs(x) > 1.0 - 1e-4):
        raise ValueError("grid must avoid |w| > 1 - 1e-4")
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-9, atol=1e-15):
        raise ValueError("grid must be uniformly spaced")
    f = density(x)
    g = (1.0 - x * x) ** 2 * f
    n = x.size - 2 * _STENCIL_HALF
    deriv = np.zeros(n)
    for m, c in enumerate(_STENCIL):
        if c != 0.0:
            deriv += c * g[m:m + n]
    deriv /= h
    xi = x[_STENCIL_HALF:-_STENCIL_HALF]
    fi = f[_STENCIL_HALF:-_STENCIL_HALF]
    return float(np.max(np.abs((density.target - xi) * fi - 0.5 * density.b * deriv)))


def cell_averages(density: SteadyDensity, edges: np.ndarray) -> np.ndarray:
    """Average of the analytic density over each cell [edges[i], edges[i+1]],
    by 5-point Gauss-Legendre per cell."""
    edges = np.asarray(edges, dtype=float)
    lo = edges[:-1]
    hi = edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = density(nodes.ravel()).reshape(nodes.shape)
    return vals @ (_GL_WEIGHTS / 2.0)


def l1_distance(histogram: tuple[np.ndarray, np.ndarray],
                density: SteadyDensity) -> float:
    """L1 distance between a uniform-bin histogram density over [-1, 1]
    and the cell-averaged analytic density.

    ``histogram`` is (bin_centers, bin_densities).  Both inputs must
    carry the same mass to 1e-6.
    """
    centers, values = (np.asarray(a, dtype=float) for a in histogram)
    if centers.size != values.size or centers.size < 2:
        raise ValueError("histogram needs matching centers/densities with >= 2 bins")
    width = centers[1] - centers[0]
    if not np.allclose(np.diff(centers), width, rtol=1e-9, atol=1e-15):
        raise ValueError("histogram bins must be uniform")
    hist_mass = float(values.sum() * width)
    if abs(hist_mass - density.mass) > 1e-6:
        raise ValueError(
            f"mass mismatch: histogram carries {hist_mass}, density {density.mass}"
        )
    edges = np.concatenate([centers - 0.5 * width, [centers[-1] + 0.5 * width]])
    analytic = cell_averages(density, edges)
    return float(np.sum(np.abs(values - analytic)) * width)
