"""High-frequency behavior: oscillations, the critical threshold, limits.

The opposed-flow strategy w is where all the interesting dynamics live. For
the exponential kernel without permanent impact its defining system is upper
triangular, which yields closed forms for the unnormalized components, their
partial sums, explicit component limits as the number of trading intervals
grows, and the piecewise-constant inventory paths those components trace out.

Transaction costs decide the regime. Below the critical threshold
``theta* = (lam + gamma) / 4`` the components of w (and v) alternate in sign
and grow with trading frequency -- the two agents pass the position back and
forth. At and above the threshold every component of both fundamental
strategies is nonnegative for every grid size and decay rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .equilibrium import fundamental_strategies
from .kernels import ExponentialKernel, ModelParams, TimeGrid, make_equidistant_grid
from .matrices import ExponentialBasis, build_exponential_basis, build_impact_matrices

__all__ = [
    "OscillationReport",
    "ThresholdWitness",
    "ThresholdReport",
    "LimitReport",
    "InventoryPath",
    "w_unnormalized",
    "w_unnormalized_partial_sum",
    "w_unnormalized_vector",
    "detect_oscillation",
    "verify_threshold",
    "w_component_limit",
    "w_normalization_limit",
    "limit_report",
    "inventory_path",
    "inventory_profile_limit",
    "path_limit_error",
    "oscillation_theta_bound",
]

DEFAULT_N_SET = tuple(range(1, 61))
DEFAULT_RHO_SET = (0.5, 1.0, 2.0, 4.0, 8.0)


def _geometric_pieces(basis: ExponentialBasis):
    if basis.gamma != 0.0:
        raise ValueError("closed-form w components require gamma = 0")
    kappa, b = basis.kappa, basis.step
    amp = b / (kappa * (1.0 - b) + b)
    ratio = b * (kappa - 1.0) / kappa
    return kappa, amp, ratio


def w_unnormalized(basis: ExponentialBasis, n: int) -> float:
    """Closed-form n-th component (1-based) of the unnormalized w vector.

    The vector is ``lam * (gram_cost - causal)^-1 @ 1``: the lam scaling
    makes it dimensionless. Normalizing it to sum one gives w itself.
    """
    if not 1 <= n <= basis.n + 1:
        raise ValueError("component index must lie in 1..N+1")
    kappa, amp, ratio = _geometric_pieces(basis)
    return (1.0 - amp * (1.0 - ratio ** (basis.n + 1 - n))) / kappa


def w_unnormalized_vector(basis: ExponentialBasis) -> np.ndarray:
    """All components of the unnormalized w vector at once."""
    kappa, amp, ratio = _geometric_pieces(basis)
    exponents = np.arange(basis.n + 1, 0, -1) - 1  # N, N-1, ..., 0
    return (1.0 - amp * (1.0 - ratio ** exponents)) / kappa


def w_unnormalized_partial_sum(basis: ExponentialBasis, n: int) -> float:
    """Sum of the first n components (n = 0..N+1) of the unnormalized w.

    ``n = N + 1`` gives the normalization constant whose high-frequency
    limit :func:`w_normalization_limit` predicts.
    """
    if not 0 <= n <= basis.n + 1:
        raise ValueError("partial-sum length must lie in 0..N+1")
    kappa, amp, ratio = _geometric_pieces(basis)
    tail = ratio ** (basis.n + 1 - n) * (ratio ** n - 1.0) / (ratio - 1.0)
    return (n * (1.0 - amp) + amp * tail) / kappa


@dataclass(frozen=True)
class OscillationReport:
    """Sign diagnostics of a strategy vector.

    ``sign_pattern`` spells one character per component ('+', '-' or '0'
    within the tolerance); ``alternating`` is True iff no component is zero
    and every adjacent pair flips sign.
    """

    alternating: bool
    sign_pattern: str
    num_sign_changes: int
    min_abs_component: float


def detect_oscillation(x, tol: float = 0.0) -> OscillationReport:
    """Classify the sign pattern of a vector.

    Parameters
    ----------
    x : array_like
        Strategy vector.
    tol : float, optional
        Components with ``|x_k| <= tol`` count as zero.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a nonempty vector")
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    signs = np.zeros(x.size, dtype=int)
    signs[x > tol] = 1
    signs[x < -tol] = -1
    flips = signs[:-1] * signs[1:]
    return OscillationReport(
        alternating=bool(np.all(signs != 0) and np.all(flips < 0)),
        sign_pattern="".join({1: "+", -1: "-", 0: "0"}[s] for s in signs),
        num_sign_changes=int(np.sum(flips == -1)),
        min_abs_component=float(np.abs(x).min()),
    )


@dataclass(frozen=True)
class ThresholdWitness:
    """Location of one negative strategy component found during a scan."""

    n_intervals: int
    rho: float
    vector: str
    index: int
    value: float


@dataclass(frozen=True)
class ThresholdReport:
    """Outcome of a nonnegativity scan over grid sizes and decay rates."""

    theta: float
    theta_star: float
    all_v_nonneg: bool
    all_w_nonneg: bool
    witness: Optional[ThresholdWitness]

    @property
    def passed(self) -> bool:
        return self.all_v_nonneg and self.all_w_nonneg


def verify_threshold(
    lam: float,
    gamma: float,
    theta: float,
    horizon: float = 1.0,
    n_set: Iterable[int] = DEFAULT_N_SET,
    rho_set: Iterable[float] = DEFAULT_RHO_SET,
    tol: float = 1e-10,
) -> ThresholdReport:
    """Scan fundamental strategies for negative components.

    Solves for (v, w) on every combination of grid size and decay rate and
    records the first component falling below ``-tol * max|vector|``. At and
    above ``theta* = (lam + gamma) / 4`` the scan comes back clean; below,
    some sufficiently fine grid produces a witness.
    """
    all_v = True
    all_w = True
    witness = None
    for n in n_set:
        for rho in rho_set:
            kernel = ExponentialKernel(lam=lam, rho=rho, gamma=gamma)
            params = ModelParams(
                kernel=kernel, grid=make_equidistant_grid(int(n), horizon), theta=theta
            )
            v, w = fundamental_strategies(build_impact_matrices(params))
            for name, vec in (("v", v), ("w", w)):
                floor = -tol * float(np.abs(vec).max())
                worst = int(vec.argmin())
                if vec[worst] < floor:
                    if name == "v":
                        all_v = False
                    else:
                        all_w = False
                    if witness is None:
                        witness = ThresholdWitness(
                            n_intervals=int(n),
                            rho=float(rho),
                            vector=name,
                            index=worst,
                            value=float(vec[worst]),
                        )
    return ThresholdReport(
        theta=float(theta),
        theta_star=(lam + gamma) / 4.0,
        all_v_nonneg=all_v,
        all_w_nonneg=all_w,
        witness=witness,
    )


def _check_limit_args(lam, rho, horizon, theta, parity, end=None):
    if lam <= 0.0 or rho <= 0.0 or horizon <= 0.0:
        raise ValueError("lam, rho and horizon must be positive")
    if theta < 0.0:
        raise ValueError("theta must be nonnegative")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if end is not None and end not in ("front", "back"):
        raise ValueError("end must be 'front' or 'back'")


def w_component_limit(
    lam: float,
    rho: float,
    horizon: float,
    theta: float,
    n: int,
    parity: str = "even",
    end: str = "front",
) -> float:
    """High-frequency limit of a single component of w (zero permanent impact).

    ``end="front"`` takes the n-th component from the start (n >= 1),
    ``end="back"`` the component N+1-n from the end (n >= 0). For theta = 0
    the limits depend on the parity of the interval count N and alternate in
    sign with n; write ``a = exp(-rho * horizon)`` and the limits are

        front, even:  (-1)^(n+1) * 2a / (rho*T + a + 1)
        front, odd:   (-1)^n     * 2a / (rho*T - a + 1)
        back,  any:   (-1)^n     * 2  / (same parity denominator)

    For theta > 0 the front components vanish and the back components decay
    geometrically at rate ``(4*theta - lam) / (4*theta + lam)`` from
    ``2*lam / ((rho*T + 1) * (4*theta + lam))``, parity playing no role.
    """
    _check_limit_args(lam, rho, horizon, theta, parity, end)
    if end == "front" and n < 1:
        raise ValueError("front components are indexed from 1")
    if end == "back" and n < 0:
        raise ValueError("back offsets are indexed from 0")

    rt = rho * horizon
    if theta > 0.0:
        if end == "front":
            return 0.0
        rate = (4.0 * theta - lam) / (4.0 * theta + lam)
        return rate ** n * 2.0 * lam / ((rt + 1.0) * (4.0 * theta + lam))

    a = float(np.exp(-rt))
    denom = rt + a + 1.0 if parity == "even" else rt - a + 1.0
    if end == "front":
        sign = (-1.0) ** (n + 1) if parity == "even" else (-1.0) ** n
        return sign * 2.0 * a / denom
    return (-1.0) ** n * 2.0 / denom


def w_normalization_limit(
    lam: float, rho: float, horizon: float, theta: float, parity: str = "even"
) -> float:
    """High-frequency limit of the normalization sum of unnormalized w.

    ``rho*T + 1`` for theta > 0; for theta = 0 it keeps a parity-dependent
    trace of the end-to-end decay: ``rho*T + 1 + a`` (even N) or
    ``rho*T + 1 - a`` (odd N).
    """
    _check_limit_args(lam, rho, horizon, theta, parity)
    rt = rho * horizon
    if theta > 0.0:
        return rt + 1.0
    a = float(np.exp(-rt))
    return rt + 1.0 + a if parity == "even" else rt + 1.0 - a


@dataclass(frozen=True)
class LimitReport:
    """Predicted component limits next to empirical values at one grid size."""

    n_intervals: int
    theta: float
    component_limits: dict
    empirical_values: dict
    max_abs_error: float


def _w_by_closed_form(lam, rho, horizon, theta, n_intervals) -> np.ndarray:
    kernel = ExponentialKernel(lam=lam, rho=rho, gamma=0.0)
    params = ModelParams(
        kernel=kernel, grid=make_equidistant_grid(n_intervals, horizon), theta=theta
    )
    u = w_unnormalized_vector(build_exponential_basis(params))
    return u / u.sum()


def limit_report(
    lam: float,
    rho: float,
    horizon: float,
    theta: float,
    n_intervals: int = 4096,
    front_ns: Sequence[int] = (1, 2, 3),
    back_ns: Sequence[int] = (0, 1, 2, 3),
) -> LimitReport:
    """Compare predicted component limits of w with one finite-N computation.

    The empirical vector comes from the closed form (gamma = 0), so grid
    sizes in the thousands stay cheap. Keys are ``front_n`` / ``back_n``.
    """
    w = _w_by_closed_form(lam, rho, horizon, theta, n_intervals)
    parity = "even" if n_intervals % 2 == 0 else "odd"
    predicted = {}
    empirical = {}
    for n in front_ns:
        predicted[f"front_{n}"] = w_component_limit(lam, rho, horizon, theta, n, parity, "front")
        empirical[f"front_{n}"] = float(w[n - 1])
    for n in back_ns:
        predicted[f"back_{n}"] = w_component_limit(lam, rho, horizon, theta, n, parity, "back")
        empirical[f"back_{n}"] = float(w[n_intervals - n])
    err = max(abs(predicted[k] - empirical[k]) for k in predicted)
    return LimitReport(
        n_intervals=n_intervals,
        theta=float(theta),
        component_limits=predicted,
        empirical_values=empirical,
        max_abs_error=err,
    )


@dataclass(frozen=True)
class InventoryPath:
    """Piecewise-constant inventory along the grid.

    ``positions[j]`` is the inventory immediately before the trade at
    ``times[j]`` (so ``positions[0] == 1`` and the final trade clears
    ``positions[-1]`` to zero).
    """

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        for name in ("times", "positions"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def value_at(self, t: float) -> float:
        """Inventory at time t, trades at exactly t not yet executed.

        Counting trades strictly before t would be fragile right at grid
        points, so t gets a relative guard of 1e-12 before the comparison.
        """
        guard = 1e-12 * max(1.0, abs(t))
        if t < -guard or t > self.times[-1] + guard:
            raise ValueError("t must lie within the trading horizon")
        k = int(np.searchsorted(self.times, t - guard, side="left"))
        return float(self.positions[min(k, self.positions.size - 1)])


def inventory_path(weights, grid: TimeGrid) -> InventoryPath:
    """Path of remaining inventory for a strategy normalized to sum 1."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != grid.times.shape:
        raise ValueError("weights must match the grid size")
    if abs(weights.sum() - 1.0) > 1e-9 * max(1.0, np.abs(weights).sum()):
        raise ValueError("weights must sum to 1")
    positions = np.empty(weights.size)
    positions[0] = 1.0
    positions[1:] = 1.0 - np.cumsum(weights)[:-1]
    return InventoryPath(times=grid.times, positions=positions)


def inventory_profile_limit(rho: float, horizon: float, t: float) -> float:
    """High-frequency limit of the w inventory path, theta > 0 regime.

    ``(rho * (horizon - t) + 1) / (rho * horizon + 1)`` for t in [0, horizon).
    The limit is linear in t: impact decay, not cost level, sets the slope.
    """
    if rho <= 0.0 or horizon <= 0.0:
        raise ValueError("rho and horizon must be positive")
    if not 0.0 <= t < horizon:
        raise ValueError("t must lie in [0, horizon)")
    return (rho * (horizon - t) + 1.0) / (rho * horizon + 1.0)


def path_limit_error(
    lam: float,
    rho: float,
    horizon: float,
    theta: float,
    n_intervals: int,
    ts: Optional[Sequence[float]] = None,
) -> float:
    """Max deviation of the finite-N w inventory path from its limit profile."""
    if ts is None:
        ts = [horizon * frac for frac in np.arange(0.1, 0.91, 0.1)]
    w = _w_by_closed_form(lam, rho, horizon, theta, n_intervals)
    path = inventory_path(w, make_equidistant_grid(n_intervals, horizon))
    return max(
        abs(path.value_at(t) - inventory_profile_limit(rho, horizon, t)) for t in ts
    )


def oscillation_theta_bound(
    lam: float,
    rho: float,
    horizon: float,
    n_intervals: int,
    gamma: float = 0.0,
    resolution: float = 1e-6,
) -> float:
    """Largest verified cost level below which w still alternates.

    Bisects theta between 0 and the critical threshold, maintaining a lower
    point where w strictly alternates and an upper point where it does not,
    until the bracket is narrower than ``resolution``. Returns the lower end
    (0.0 when w does not even alternate at theta = 0).
    """
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")

    def alternates(theta: float) -> bool:
        kernel = ExponentialKernel(lam=lam, rho=rho, gamma=gamma)
        params = ModelParams(
            kernel=kernel, grid=make_equidistant_grid(n_intervals, horizon), theta=theta
        )
        _, w = fundamental_strategies(build_impact_matrices(params))
        return detect_oscillation(w).alternating

    if not alternates(0.0):
        return 0.0
    lo, hi = 0.0, (lam + gamma) / 4.0
    if alternates(hi):  # cannot happen above the threshold; defensive only
        return hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if alternates(mid):
            lo = mid
        else:
            hi = mid
    return lo
