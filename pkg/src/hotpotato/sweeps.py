"""Equilibrium cost sweeps over transaction costs or trading frequency.

The kernel positive-definiteness surrogate runs once per sweep, not once per
point; individual solves then reuse prebuilt matrices where the swept
parameter allows it. Points fan out over a small thread pool (LAPACK releases
the GIL) and results are assembled in input order, so sweep output is
deterministic. The ``HOTPOTATO_THREADS`` environment variable caps the pool.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .equilibrium import ModelAssumptionError, expected_cost, fundamental_strategies
from .kernels import (
    DecayKernel,
    ModelParams,
    TimeGrid,
    check_strictly_positive_definite,
    make_equidistant_grid,
)
from .matrices import ImpactMatrices, build_impact_matrices

__all__ = ["CostSweep", "sweep_theta", "sweep_n", "worker_count"]


@dataclass(frozen=True)
class CostSweep:
    """Equilibrium costs along one swept parameter."""

    parameter: str
    values: np.ndarray
    cost_x: np.ndarray
    cost_y: np.ndarray

    def __post_init__(self):
        for name in ("values", "cost_x", "cost_y"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def worker_count() -> int:
    """Thread-pool size: HOTPOTATO_THREADS if set, else a small default."""
    raw = os.environ.get("HOTPOTATO_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"HOTPOTATO_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ValueError("HOTPOTATO_THREADS must be at least 1")
    return count


def _equilibrium_costs(mats: ImpactMatrices, x0: float, y0: float):
    v, w = fundamental_strategies(mats)
    xi = 0.5 * (x0 + y0) * v + 0.5 * (x0 - y0) * w
    eta = 0.5 * (x0 + y0) * v - 0.5 * (x0 - y0) * w
    return expected_cost(xi, eta, mats), expected_cost(eta, xi, mats)


def sweep_theta(
    kernel: DecayKernel,
    grid: TimeGrid,
    thetas: Sequence[float],
    x0: float = 1.0,
    y0: float = 1.0,
) -> CostSweep:
    """Equilibrium costs of both agents along a grid of cost levels theta.

    The kernel Gram matrix is built once; each point only shifts the
    diagonal.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 1 or thetas.size == 0:
        raise ValueError("need a nonempty 1-d array of theta values")
    if np.any(thetas < 0.0) or not np.all(np.isfinite(thetas)):
        raise ValueError("theta values must be nonnegative and finite")
    if not check_strictly_positive_definite(kernel, grid):
        raise ModelAssumptionError(
            "kernel failed the strict positive definiteness check on this grid"
        )
    base = build_impact_matrices(ModelParams(kernel=kernel, grid=grid, theta=0.0))
    eye = np.eye(base.gram.shape[0])

    def one_point(theta: float):
        mats = ImpactMatrices(
            gram=base.gram,
            gram_cost=base.gram + 2.0 * theta * eye,
            causal=base.causal,
            theta=theta,
        )
        return _equilibrium_costs(mats, x0, y0)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        pairs = list(pool.map(one_point, thetas))
    cost_x = np.array([p[0] for p in pairs])
    cost_y = np.array([p[1] for p in pairs])
    return CostSweep(parameter="theta", values=thetas, cost_x=cost_x, cost_y=cost_y)


def sweep_n(
    kernel: DecayKernel,
    n_values: Sequence[int],
    horizon: float,
    theta: float,
    x0: float = 1.0,
    y0: float = 1.0,
) -> CostSweep:
    """Equilibrium costs along a range of grid sizes N at fixed horizon."""
    n_values = list(n_values)
    if not n_values:
        raise ValueError("need at least one grid size")
    if any((not isinstance(n, (int, np.integer))) or n < 1 for n in n_values):
        raise ValueError("grid sizes must be positive integers")
    # check definiteness once on the finest grid of the sweep
    finest = make_equidistant_grid(int(max(n_values)), horizon)
    if not check_strictly_positive_definite(kernel, finest):
        raise ModelAssumptionError(
            "kernel failed the strict positive definiteness check on this grid"
        )

    def one_point(n: int):
        params = ModelParams(
            kernel=kernel, grid=make_equidistant_grid(int(n), horizon), theta=theta
        )
        return _equilibrium_costs(build_impact_matrices(params), x0, y0)

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        pairs = list(pool.map(one_point, n_values))
    return CostSweep(
        parameter="n",
        values=np.array(n_values, dtype=float),
        cost_x=np.array([p[0] for p in pairs]),
        cost_y=np.array([p[1] for p in pairs]),
    )
