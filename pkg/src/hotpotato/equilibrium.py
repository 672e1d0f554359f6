"""Nash equilibrium of the two-trader liquidation game.

Both agents fix deterministic trade schedules on the common grid and each
minimizes expected execution cost given the other's schedule. The unique
equilibrium decomposes into two fundamental strategies:

* ``v`` solves ``(gram_cost + causal) x = 1``, normalized to sum 1 -- the
  common component both agents share when they liquidate in the same
  direction;
* ``w`` solves ``(gram_cost - causal) y = 1``, normalized to sum 1 -- the
  opposed component that trades the agents' inventory difference and carries
  the hot-potato oscillation.

With inventories ``x0`` and ``y0`` the equilibrium schedules are

    xi  = (x0 + y0)/2 * v + (x0 - y0)/2 * w
    eta = (x0 + y0)/2 * v - (x0 - y0)/2 * w

Expected cost of a schedule ``xi`` against ``eta`` is the quadratic form
``xi' gram_cost xi / 2 + xi' causal eta`` (book value of the position cancels
against expected revenue and is excluded here; the realized-cost simulator
includes it).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .kernels import ModelParams, check_strictly_positive_definite
from .matrices import ImpactMatrices, build_impact_matrices

__all__ = [
    "ModelAssumptionError",
    "EquilibriumSolution",
    "CostReport",
    "RealizedCostSample",
    "MonteCarloReport",
    "fundamental_strategies",
    "solve_equilibrium",
    "expected_cost",
    "cost_breakdown",
    "best_response",
    "realized_cost_sample",
    "monte_carlo_costs",
]


class ModelAssumptionError(RuntimeError):
    """A model assumption failed numerically.

    Raised when the defining linear systems are singular or produce
    non-finite or sign-violating output; in practice this means the decay
    kernel is not strictly positive definite on the grid.
    """


@dataclass(frozen=True)
class EquilibriumSolution:
    """Equilibrium schedules, fundamental strategies and their costs.

    ``mu`` and ``beta`` are the Lagrange levels of the two agents (mean of
    the stationarity residual vector); ``kkt_residual`` is the larger
    infinity-norm deviation of those vectors from a constant, a direct
    first-order optimality diagnostic.
    """

    v: np.ndarray
    w: np.ndarray
    xi_star: np.ndarray
    eta_star: np.ndarray
    cost_x: float
    cost_y: float
    mu: float
    beta: float
    kkt_residual: float

    def __post_init__(self):
        for name in ("v", "w", "xi_star", "eta_star"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CostReport:
    """Expected-cost split for one agent, plus the opponent's total."""

    quadratic_term: float
    cross_term: float
    expected_cost_x: float
    expected_cost_y: float


@dataclass(frozen=True)
class RealizedCostSample:
    """One realized-cost draw.

    ``coins[k] = 1`` means agent x yielded priority in slot ``k`` and paid
    for the opponent's simultaneous impact; ``0`` puts that charge on y.
    """

    cost_x: float
    cost_y: float
    coins: np.ndarray

    def __post_init__(self):
        coins = np.asarray(self.coins, dtype=int)
        coins.setflags(write=False)
        object.__setattr__(self, "coins", coins)


@dataclass(frozen=True)
class MonteCarloReport:
    """Sample means of realized costs against their closed-form values."""

    n_samples: int
    mean_x: float
    mean_y: float
    stderr_x: float
    stderr_y: float
    closed_form_x: float
    closed_form_y: float
    within_three_stderr: bool


def _solve_ones(system: np.ndarray) -> np.ndarray:
    one = np.ones(system.shape[0])
    try:
        x = np.linalg.solve(system, one)
    except np.linalg.LinAlgError as exc:
        raise ModelAssumptionError(f"strategy system is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise ModelAssumptionError("strategy system produced non-finite output")
    denom = x.sum()
    # both denominators are 1' A^-1 1 with A of positive definite symmetric
    # part, so a nonpositive value means the kernel assumption is broken
    if not denom > 0.0:
        raise ModelAssumptionError("normalization 1'A^-1 1 is not positive")
    return x / denom


def fundamental_strategies(mats: ImpactMatrices) -> Tuple[np.ndarray, np.ndarray]:
    """Solve for the fundamental strategies (v, w), each normalized to sum 1.

    Raises
    ------
    ModelAssumptionError
        If either system is singular or its normalization is nonpositive.
    """
    v = _solve_ones(mats.gram_cost + mats.causal)
    w = _solve_ones(mats.gram_cost - mats.causal)
    return v, w


def solve_equilibrium(params: ModelParams, check_kernel: bool = True) -> EquilibriumSolution:
    """Compute the Nash equilibrium for the given game.

    Parameters
    ----------
    params : ModelParams
        Kernel, grid, theta and the two inventories.
    check_kernel : bool, optional
        Run the strict-positive-definiteness surrogate first and raise
        ModelAssumptionError if it fails. Callers sweeping many parameter
        points on a fixed kernel/grid can disable the recheck.
    """
    if check_kernel and not check_strictly_positive_definite(params.kernel, params.grid):
        raise ModelAssumptionError(
            "kernel failed the strict positive definiteness check on this grid"
        )
    mats = build_impact_matrices(params)
    v, w = fundamental_strategies(mats)
    half_sum = 0.5 * (params.x0 + params.y0)
    half_diff = 0.5 * (params.x0 - params.y0)
    xi = half_sum * v + half_diff * w
    eta = half_sum * v - half_diff * w

    resid_x = mats.gram_cost @ xi + mats.causal @ eta
    resid_y = mats.gram_cost @ eta + mats.causal @ xi
    mu = float(resid_x.mean())
    beta = float(resid_y.mean())
    kkt_residual = float(
        max(np.abs(resid_x - mu).max(), np.abs(resid_y - beta).max())
    )
    return EquilibriumSolution(
        v=v,
        w=w,
        xi_star=xi,
        eta_star=eta,
        cost_x=expected_cost(xi, eta, mats),
        cost_y=expected_cost(eta, xi, mats),
        mu=mu,
        beta=beta,
        kkt_residual=kkt_residual,
    )


def _check_pair(xi, eta, n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if xi.shape != (n_points,) or eta.shape != (n_points,):
        raise ValueError(f"schedules must be vectors of length {n_points}")
    return xi, eta


def expected_cost(xi, eta, mats: ImpactMatrices) -> float:
    """Expected execution cost of schedule ``xi`` against schedule ``eta``.

    ``xi' gram_cost xi / 2 + xi' causal eta``; the first term is the agent's
    own impact plus transaction costs, the second the cost inflicted by the
    opponent's earlier (and half of simultaneous) trades.
    """
    xi, eta = _check_pair(xi, eta, mats.n_points)
    return float(0.5 * xi @ mats.gram_cost @ xi + xi @ mats.causal @ eta)


def cost_breakdown(xi, eta, mats: ImpactMatrices) -> CostReport:
    """Split the expected cost of ``xi`` against ``eta`` into its two terms."""
    xi, eta = _check_pair(xi, eta, mats.n_points)
    quad = float(0.5 * xi @ mats.gram_cost @ xi)
    cross = float(xi @ mats.causal @ eta)
    return CostReport(
        quadratic_term=quad,
        cross_term=cross,
        expected_cost_x=quad + cross,
        expected_cost_y=expected_cost(eta, xi, mats),
    )


def best_response(eta, z0: float, mats: ImpactMatrices) -> np.ndarray:
    """Cost-minimizing schedule against ``eta`` under total-volume ``z0``.

    Solves the bordered stationarity system

        [ gram_cost  1 ] [ xi ]   [ -causal @ eta ]
        [    1'      0 ] [ nu ] = [      z0       ]

    and returns ``xi``. The multiplier is discarded.
    """
    n = mats.n_points
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (n,):
        raise ValueError(f"eta must be a vector of length {n}")
    if not np.isfinite(z0):
        raise ValueError("z0 must be finite")
    kkt = np.zeros((n + 1, n + 1))
    kkt[:n, :n] = mats.gram_cost
    kkt[:n, n] = 1.0
    kkt[n, :n] = 1.0
    rhs = np.concatenate([-mats.causal @ eta, [float(z0)]])
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise ModelAssumptionError(f"best-response system is singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise ModelAssumptionError("best-response system produced non-finite output")
    return sol[:n]


def _realized_costs(xi, eta, params: ModelParams, s0: float, coins: np.ndarray):
    """Realized costs for a batch of first-mover coin sequences.

    The unaffected price is held at the constant ``s0`` (martingale noise
    adds nothing to any expectation here and would only blur the Monte Carlo
    comparison). The coin ``coins[k] = 1`` means agent x trades slot ``k``
    second and eats the opponent's full simultaneous impact.
    """
    times = params.grid.times
    lags = np.abs(times[:, None] - times[None, :])
    gram = np.asarray(params.kernel(lags), dtype=float)
    g0 = gram[0, 0]
    strictly_past = np.tril(gram, -1)

    price = s0 - strictly_past @ (xi + eta)
    base_x = xi.sum() * s0 + np.sum((0.5 * g0 + params.theta) * xi ** 2 - price * xi)
    base_y = eta.sum() * s0 + np.sum((0.5 * g0 + params.theta) * eta ** 2 - price * eta)
    cross = g0 * xi * eta
    cost_x = base_x + coins @ cross
    cost_y = base_y + (1 - coins) @ cross
    return cost_x, cost_y


def realized_cost_sample(
    xi, eta, params: ModelParams, s0: float, seed: int
) -> RealizedCostSample:
    """Draw one realized-cost sample with i.i.d. fair first-mover coins.

    Includes the book-value term ``sum(xi) * s0``; its expectation equals the
    (sign-flipped) expected revenue, so sample means still converge to
    :func:`expected_cost`.
    """
    xi, eta = _check_pair(xi, eta, params.grid.times.size)
    if not np.isfinite(s0):
        raise ValueError("s0 must be finite")
    rng = np.random.default_rng(seed)
    coins = rng.integers(0, 2, size=xi.size)
    cost_x, cost_y = _realized_costs(xi, eta, params, float(s0), coins)
    return RealizedCostSample(cost_x=float(cost_x), cost_y=float(cost_y), coins=coins)


def monte_carlo_costs(
    xi, eta, params: ModelParams, s0: float, n_samples: int, seed: int
) -> MonteCarloReport:
    """Monte Carlo check of the closed-form expected costs.

    Draws ``n_samples`` coin sequences at once, averages the realized costs
    of both agents and compares each mean to the closed form; the report is
    flagged good when both deviations stay within three standard errors
    (plus a tiny absolute floor for coin-free schedules).
    """
    xi, eta = _check_pair(xi, eta, params.grid.times.size)
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise ValueError("n_samples must be an integer >= 2")
    if not np.isfinite(s0):
        raise ValueError("s0 must be finite")
    rng = np.random.default_rng(seed)
    coins = rng.integers(0, 2, size=(int(n_samples), xi.size))
    cost_x, cost_y = _realized_costs(xi, eta, params, float(s0), coins)

    mats = build_impact_matrices(params)
    closed_x = expected_cost(xi, eta, mats)
    closed_y = expected_cost(eta, xi, mats)
    mean_x = float(cost_x.mean())
    mean_y = float(cost_y.mean())
    stderr_x = float(cost_x.std(ddof=1) / np.sqrt(n_samples))
    stderr_y = float(cost_y.std(ddof=1) / np.sqrt(n_samples))
    floor = 1e-12 * (1.0 + abs(closed_x) + abs(closed_y))
    ok = abs(mean_x - closed_x) <= 3.0 * stderr_x + floor and abs(
        mean_y - closed_y
    ) <= 3.0 * stderr_y + floor
    return MonteCarloReport(
        n_samples=int(n_samples),
        mean_x=mean_x,
        mean_y=mean_y,
        stderr_x=stderr_x,
        stderr_y=stderr_y,
        closed_form_x=closed_x,
        closed_form_y=closed_y,
        within_three_stderr=bool(ok),
    )
