"""Decay kernels, trading grids and model parameters.

Two traders unwind positions on a shared trading grid. Every order moves the
price, and the displacement relaxes over time according to a decay kernel
``G``: a trade of size ``z`` executed at time ``s`` still shifts the price by
``G(t - s) * z`` at time ``t >= s``. The kernel classes here evaluate ``G``,
and :func:`check_strictly_positive_definite` tests the property that makes
the induced execution-cost form positive definite on a given grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

__all__ = [
    "TimeGrid",
    "ExponentialKernel",
    "PowerLawKernel",
    "CustomKernel",
    "DecayKernel",
    "ModelParams",
    "make_equidistant_grid",
    "check_strictly_positive_definite",
]


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing trading times ``0 = t_0 < t_1 < ... < t_N = T``.

    Parameters
    ----------
    times : ndarray
        One-dimensional array of trading times. Must start at exactly 0,
        be strictly increasing and contain at least two points.
    """

    times: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("grid needs a 1-d array with at least two times")
        if not np.all(np.isfinite(times)):
            raise ValueError("grid times must be finite")
        if times[0] != 0.0:
            raise ValueError("grid must start at t = 0")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("grid times must be strictly increasing")
        times = times.copy()
        times.setflags(write=False)
        object.__setattr__(self, "times", times)

    @property
    def n_intervals(self) -> int:
        """Number of trading intervals N (one less than the point count)."""
        return self.times.size - 1

    @property
    def horizon(self) -> float:
        """Final trading time T."""
        return float(self.times[-1])


def make_equidistant_grid(n: int, horizon: float) -> TimeGrid:
    """Return the grid ``t_k = k * horizon / n`` for ``k = 0..n``.

    Parameters
    ----------
    n : int
        Number of intervals, at least 1. The grid has ``n + 1`` points.
    horizon : float
        Final time T, strictly positive.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("n must be a positive integer")
    if not np.isfinite(horizon) or horizon <= 0.0:
        raise ValueError("horizon must be positive and finite")
    times = np.arange(n + 1, dtype=float) * horizon / n
    # (n*horizon)/n can land one ulp off the endpoint; the grid contract
    # requires times[-1] == horizon exactly.
    times[-1] = horizon
    return TimeGrid(times)


@dataclass(frozen=True)
class ExponentialKernel:
    """Exponential decay with an optional permanent component.

    ``G(t) = lam * exp(-rho * t) + gamma``

    Parameters
    ----------
    lam : float
        Size of the transient part, positive.
    rho : float
        Relaxation rate, positive.
    gamma : float, optional
        Permanent (non-decaying) impact per unit traded, nonnegative.
    """

    lam: float
    rho: float
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("lam", "rho", "gamma"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.lam <= 0.0:
            raise ValueError("lam must be positive")
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")
        if self.gamma < 0.0:
            raise ValueError("gamma must be nonnegative")

    def __call__(self, t):
        t = _check_lags(t)
        out = self.lam * np.exp(-self.rho * t) + self.gamma
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PowerLawKernel:
    """Slow power-law decay ``G(t) = (1 + t) ** (-exponent)``.

    The exponent must lie in (0, 1); that range keeps the kernel convex and
    nonconstant, which is what the positive-definiteness check below relies
    on in practice.
    """

    exponent: float

    def __post_init__(self):
        if not np.isfinite(self.exponent) or not 0.0 < self.exponent < 1.0:
            raise ValueError("exponent must lie in (0, 1)")

    def __call__(self, t):
        t = _check_lags(t)
        out = (1.0 + t) ** (-self.exponent)
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CustomKernel:
    """Wrap an arbitrary decay function ``func(t) -> G(t)``.

    The function must accept numpy arrays of nonnegative lags and return
    positive values; nothing is validated beyond the sign of the lag, so run
    :func:`check_strictly_positive_definite` before trusting equilibrium
    output computed from one of these.
    """

    func: Callable = field(repr=False)

    def __call__(self, t):
        t = _check_lags(t)
        out = np.asarray(self.func(t), dtype=float)
        return float(out) if out.ndim == 0 else out


DecayKernel = Union[ExponentialKernel, PowerLawKernel, CustomKernel]


def _check_lags(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("decay kernels are defined for lags t >= 0 only")
    return t


@dataclass(frozen=True)
class ModelParams:
    """Full description of one two-trader liquidation game.

    Parameters
    ----------
    kernel : decay kernel
        Price-impact decay kernel G.
    grid : TimeGrid
        Common trading grid of both agents.
    theta : float, optional
        Quadratic transaction-cost coefficient, nonnegative. Each trade of
        size z costs an extra ``theta * z**2``.
    x0, y0 : float, optional
        Initial inventories of the two agents (positive = long).
    """

    kernel: DecayKernel
    grid: TimeGrid
    theta: float = 0.0
    x0: float = 1.0
    y0: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.theta) or self.theta < 0.0:
            raise ValueError("theta must be nonnegative and finite")
        if not (np.isfinite(self.x0) and np.isfinite(self.y0)):
            raise ValueError("inventories must be finite")


def check_strictly_positive_definite(kernel, grid: TimeGrid, tol: float = 1e-10) -> bool:
    """Numerical surrogate for strict positive definiteness of the kernel.

    Builds the matrix ``G(|t_i - t_j|)`` on the grid and returns True iff the
    smallest eigenvalue of its symmetric part exceeds ``tol`` times the
    largest. Kernels that fail this (a constant kernel, for instance) produce
    cost forms without a unique optimizer and the equilibrium solvers refuse
    to run on them.

    Returns False, rather than raising, when the eigenvalue computation
    itself fails.
    """
    try:
        lags = np.abs(grid.times[:, None] - grid.times[None, :])
        gram = np.asarray(kernel(lags), dtype=float)
        gram = 0.5 * (gram + gram.T)
        eigs = np.linalg.eigvalsh(gram)
    except (ValueError, np.linalg.LinAlgError):
        return False
    if not np.all(np.isfinite(eigs)):
        return False
    return bool(eigs[0] > tol * eigs[-1])
