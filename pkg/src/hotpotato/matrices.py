"""Impact matrices on a trading grid and their closed-form inverses.

Everything the equilibrium solvers need is expressed through three
``(N+1) x (N+1)`` matrices built from the decay kernel:

* ``gram``      -- ``G(|t_i - t_j|)``, the symmetric kernel Gram matrix;
* ``gram_cost`` -- ``gram + 2*theta*I``, with quadratic transaction costs;
* ``causal``    -- lower-triangular half of ``gram``: full weight on past
  trades, half weight on the simultaneous trade, zero on future ones. It
  satisfies ``causal + causal.T == gram`` entry for entry.

For the exponential kernel on an equidistant grid the Gram matrix is Toeplitz
and a family of explicit inverses exists; those closed forms power the
high-frequency analysis in :mod:`hotpotato.asymptotics` and double as oracles
for the generic LU path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import ExponentialKernel, ModelParams

__all__ = [
    "ImpactMatrices",
    "ExponentialBasis",
    "MatrixClassification",
    "build_impact_matrices",
    "build_exponential_basis",
    "decay_inverse",
    "w_system_inverse",
    "decay_lower_mix_inverse",
    "threshold_certificate_matrix",
    "classify_matrix",
]


@dataclass(frozen=True)
class ImpactMatrices:
    """Kernel Gram matrix plus its cost-shifted and causal variants."""

    gram: np.ndarray
    gram_cost: np.ndarray
    causal: np.ndarray
    theta: float

    def __post_init__(self):
        for name in ("gram", "gram_cost", "causal"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_points(self) -> int:
        return self.gram.shape[0]


def _causal_half(gram: np.ndarray) -> np.ndarray:
    # strictly-lower part untouched, half the diagonal, zero above
    return np.tril(gram, -1) + 0.5 * np.diag(np.diag(gram))


def build_impact_matrices(params: ModelParams) -> ImpactMatrices:
    """Evaluate the kernel on the grid and assemble all three matrices.

    Parameters
    ----------
    params : ModelParams
        Kernel, grid and transaction-cost coefficient theta.
    """
    times = params.grid.times
    lags = np.abs(times[:, None] - times[None, :])
    gram = np.asarray(params.kernel(lags), dtype=float)
    gram = 0.5 * (gram + gram.T)  # kill asymmetric rounding from the kernel eval
    gram_cost = gram + 2.0 * params.theta * np.eye(gram.shape[0])
    return ImpactMatrices(
        gram=gram,
        gram_cost=gram_cost,
        causal=_causal_half(gram),
        theta=params.theta,
    )


@dataclass(frozen=True)
class ExponentialBasis:
    """Toeplitz building blocks for the exponential kernel on an equidistant grid.

    With ``a = exp(-rho * T)`` and per-interval decay ``step = a**(1/N)``:

    * ``decay``       -- Toeplitz matrix ``step**|i-j|``;
    * ``ones``        -- all-ones matrix (permanent impact);
    * ``decay_lower`` -- unit-lower-triangular decay factors (causal half of
      ``decay`` plus half the identity);
    * ``ones_upper``  -- strictly upper-triangular ones.

    They tie back to the impact matrices through
    ``lam*decay + gamma*ones + 2*theta*I == gram_cost``.

    ``kappa = 1/2 + 2*theta/lam`` is the dimensionless cost level driving the
    oscillation analysis; ``kappa_perm`` shifts it by the permanent-impact
    ratio and crosses 1 exactly at the critical threshold
    ``theta = (lam + gamma) / 4``.
    """

    lam: float
    rho: float
    gamma: float
    theta: float
    n: int
    horizon: float
    a: float
    step: float
    kappa: float
    kappa_perm: float
    decay: np.ndarray
    ones: np.ndarray
    decay_lower: np.ndarray
    ones_upper: np.ndarray

    def __post_init__(self):
        for name in ("decay", "ones", "decay_lower", "ones_upper"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def build_exponential_basis(params: ModelParams) -> ExponentialBasis:
    """Build the Toeplitz basis for an exponential kernel on an equidistant grid.

    Raises
    ------
    ValueError
        If the kernel is not exponential or the grid is not equidistant.
    """
    kernel = params.kernel
    if not isinstance(kernel, ExponentialKernel):
        raise ValueError("the Toeplitz basis exists for exponential kernels only")
    times = params.grid.times
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-12, atol=0.0):
        raise ValueError("the Toeplitz basis needs an equidistant grid")

    n = params.grid.n_intervals
    horizon = params.grid.horizon
    a = float(np.exp(-kernel.rho * horizon))
    step = a ** (1.0 / n)
    idx = np.arange(n + 1)
    dist = np.abs(idx[:, None] - idx[None, :])
    decay = a ** (dist / n)  # depends on |i-j| only, exactly Toeplitz
    ones = np.ones((n + 1, n + 1))
    decay_lower = np.tril(decay, -1) + np.eye(n + 1)
    ones_upper = np.triu(ones, 1)
    return ExponentialBasis(
        lam=kernel.lam,
        rho=kernel.rho,
        gamma=kernel.gamma,
        theta=params.theta,
        n=n,
        horizon=horizon,
        a=a,
        step=step,
        kappa=0.5 + 2.0 * params.theta / kernel.lam,
        kappa_perm=0.5 + 2.0 * params.theta / kernel.lam - kernel.gamma / (2.0 * kernel.lam),
        decay=decay,
        ones=ones,
        decay_lower=decay_lower,
        ones_upper=ones_upper,
    )


def decay_inverse(basis: ExponentialBasis) -> np.ndarray:
    """Closed-form tridiagonal inverse of the Toeplitz decay matrix.

    The inverse of ``step**|i-j|`` is tridiagonal: scaled by
    ``1 / (1 - step**2)``, the diagonal reads ``(1, 1+step**2, ...,
    1+step**2, 1)`` and both off-diagonals are ``-step``.
    """
    b = basis.step
    if b >= 1.0:
        raise ValueError("decay inverse needs per-interval decay < 1")
    n = basis.n
    scale = 1.0 / (1.0 - b * b)
    diag = np.full(n + 1, (1.0 + b * b) * scale)
    diag[0] = diag[-1] = scale
    inv = np.diag(diag)
    off = np.full(n, -b * scale)
    inv += np.diag(off, 1) + np.diag(off, -1)
    return inv


def w_system_inverse(basis: ExponentialBasis) -> np.ndarray:
    """Closed-form inverse of ``gram_cost - causal`` (zero permanent impact).

    The system matrix defining the opposed-flow strategy w is upper
    triangular for the exponential kernel; so is its inverse. With
    ``kappa = 1/2 + 2*theta/lam`` the inverse has diagonal ``1/(lam*kappa)``
    and ``(i, j)`` entry, for ``j > i`` and ``d = j - i``,

    ``-step**d * (kappa-1)**(d-1) / (lam * kappa**(d+1))``.

    Raises
    ------
    ValueError
        If the basis carries permanent impact (gamma != 0); the triangular
        structure (and this formula) need gamma = 0.
    """
    if basis.gamma != 0.0:
        raise ValueError("closed-form w-system inverse requires gamma = 0")
    n, kappa, b = basis.n, basis.kappa, basis.step
    inv = np.zeros((n + 1, n + 1))
    np.fill_diagonal(inv, 1.0 / kappa)
    for d in range(1, n + 1):
        val = -(b ** d) * (kappa - 1.0) ** (d - 1) / kappa ** (d + 1)
        inv += np.diag(np.full(n + 1 - d, val), k=d)
    return inv / basis.lam


def decay_lower_mix_inverse(basis: ExponentialBasis, alpha: float) -> np.ndarray:
    """Closed-form inverse of ``decay_lower + alpha * decay`` for alpha >= 0.

    Lower Hessenberg: one subdiagonal, explicit geometric fill above. Used to
    certify sign structure of the fundamental strategies near the critical
    threshold without going through a numerical factorization.
    """
    if not np.isfinite(alpha) or alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    n, b = basis.n, basis.step
    b2 = b * b
    beta = 1.0 / (1.0 + (1.0 - b2) * alpha)
    mu = (1.0 - b2) * alpha
    nu = (1.0 - b2) * (1.0 + alpha)

    inv = np.zeros((n + 1, n + 1))
    diag = np.full(n + 1, (1.0 + (1.0 - b2 * b2) * alpha) * beta * beta)
    diag[0] = diag[-1] = beta
    np.fill_diagonal(inv, diag)
    inv += np.diag(np.full(n, -b * beta), k=-1)
    for d in range(1, n + 1):
        band = np.empty(n + 1 - d)
        if d <= n - 2:
            band[:] = -(b ** d) * beta ** (d + 2) * mu * nu  # interior rows
        if d <= n - 1:
            # first row and last column follow a shorter geometric rule
            band[0] = -(b ** d) * beta ** (d + 1) * mu
            band[-1] = -(b ** d) * beta ** (d + 1) * mu
        if d == n:
            band[0] = -basis.a * alpha / (1.0 + alpha) * beta ** n
        inv += np.diag(band, k=d)
    return inv


def threshold_certificate_matrix(basis: ExponentialBasis, delta: float) -> np.ndarray:
    """Upper-triangular certificate matrix for the critical threshold.

    Returns ``decay^-1 @ (decay_lower - (gamma/lam) * ones_upper)
    + delta * decay^-1`` assembled from explicit entries (no numerical
    products). For every ``delta >= 0`` this is a nonsingular M-matrix, which
    is the structural fact behind nonnegativity of the fundamental
    strategies at and above the critical threshold.
    """
    if not np.isfinite(delta) or delta < 0.0:
        raise ValueError("delta must be nonnegative")
    n, b, g = basis.n, basis.step, basis.gamma / basis.lam
    scale = 1.0 - b * b

    m = np.zeros((n + 1, n + 1))
    np.fill_diagonal(m, 1.0 + b * g)
    m[0, 0] = scale
    if n >= 1:
        m[0, 1] = -b - g
        m[0, 2:] = -(1.0 - b) * g
    for i in range(1, n):
        m[i, i + 1] = -b - (1.0 - b + b * b) * g
        m[i, i + 2:] = -((1.0 - b) ** 2) * g
    m /= scale
    return m + delta * decay_inverse(basis)


@dataclass(frozen=True)
class MatrixClassification:
    """Sign-structure summary of a square matrix.

    ``is_z``                -- off-diagonal entries all <= tolerance;
    ``is_nonsingular_m``    -- Z-matrix with all leading principal minors
                               positive;
    ``is_inverse_positive`` -- invertible with entrywise nonnegative inverse;
    ``min_leading_minor``   -- smallest of the leading principal minors.

    For Z-matrices the M-matrix and inverse-positivity flags agree; that
    equivalence is exercised by the test suite on random instances.
    """

    is_z: bool
    is_nonsingular_m: bool
    is_inverse_positive: bool
    min_leading_minor: float


def classify_matrix(m: np.ndarray, tol: float = None) -> MatrixClassification:
    """Classify a square matrix by Z / M / inverse-positive structure.

    Parameters
    ----------
    m : ndarray
        Square matrix.
    tol : float, optional
        Entrywise sign tolerance. Defaults to ``1e-10 * ||m||_inf``.

    Notes
    -----
    Leading principal minors come from LU factorizations of the leading
    blocks; a minor counts as positive when it exceeds ``1e-12`` times the
    block's infinity norm.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("classification needs a square matrix")
    norm = float(np.abs(m).sum(axis=1).max()) if m.size else 0.0
    if tol is None:
        tol = 1e-10 * norm

    off = m - np.diag(np.diag(m))
    is_z = bool(np.all(off <= tol))

    n = m.shape[0]
    minors = np.empty(n)
    minors_positive = True
    for k in range(1, n + 1):
        block = m[:k, :k]
        block_norm = float(np.abs(block).sum(axis=1).max())
        minors[k - 1] = np.linalg.det(block)
        if not minors[k - 1] > 1e-12 * block_norm:
            minors_positive = False

    try:
        inv = np.linalg.inv(m)
        is_inverse_positive = bool(np.all(np.isfinite(inv)) and np.all(inv >= -tol))
    except np.linalg.LinAlgError:
        is_inverse_positive = False

    return MatrixClassification(
        is_z=is_z,
        is_nonsingular_m=is_z and minors_positive,
        is_inverse_positive=is_inverse_positive,
        min_leading_minor=float(minors.min()) if n else 0.0,
    )
