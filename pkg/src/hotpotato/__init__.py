"""Two-trader liquidation games under transient price impact.

Library layout:

* :mod:`hotpotato.kernels`      -- decay kernels, grids, model parameters;
* :mod:`hotpotato.matrices`     -- impact matrices and closed-form inverses;
* :mod:`hotpotato.equilibrium`  -- Nash equilibrium, costs, realized-cost
  simulation;
* :mod:`hotpotato.asymptotics`  -- oscillation diagnostics, the critical
  threshold, high-frequency limits;
* :mod:`hotpotato.sweeps`       -- cost sweeps over theta or grid size;
* :mod:`hotpotato.cli`          -- the ``hotpotato`` command-line tool.
"""

from .asymptotics import (
    InventoryPath,
    LimitReport,
    OscillationReport,
    ThresholdReport,
    ThresholdWitness,
    detect_oscillation,
    inventory_path,
    inventory_profile_limit,
    limit_report,
    oscillation_theta_bound,
    path_limit_error,
    verify_threshold,
    w_component_limit,
    w_normalization_limit,
    w_unnormalized,
    w_unnormalized_partial_sum,
    w_unnormalized_vector,
)
from .equilibrium import (
    CostReport,
    EquilibriumSolution,
    ModelAssumptionError,
    MonteCarloReport,
    RealizedCostSample,
    best_response,
    cost_breakdown,
    expected_cost,
    fundamental_strategies,
    monte_carlo_costs,
    realized_cost_sample,
    solve_equilibrium,
)
from .kernels import (
    CustomKernel,
    DecayKernel,
    ExponentialKernel,
    ModelParams,
    PowerLawKernel,
    TimeGrid,
    check_strictly_positive_definite,
    make_equidistant_grid,
)
from .matrices import (
    ExponentialBasis,
    ImpactMatrices,
    MatrixClassification,
    build_exponential_basis,
    build_impact_matrices,
    classify_matrix,
    decay_inverse,
    decay_lower_mix_inverse,
    threshold_certificate_matrix,
    w_system_inverse,
)
from .sweeps import CostSweep, sweep_n, sweep_theta

__version__ = "0.1.0"

__all__ = [
    "CostReport",
    "CostSweep",
    "CustomKernel",
    "DecayKernel",
    "EquilibriumSolution",
    "ExponentialBasis",
    "ExponentialKernel",
    "ImpactMatrices",
    "InventoryPath",
    "LimitReport",
    "MatrixClassification",
    "ModelAssumptionError",
    "ModelParams",
    "MonteCarloReport",
    "OscillationReport",
    "PowerLawKernel",
    "RealizedCostSample",
    "ThresholdReport",
    "ThresholdWitness",
    "TimeGrid",
    "best_response",
    "build_exponential_basis",
    "build_impact_matrices",
    "check_strictly_positive_definite",
    "classify_matrix",
    "cost_breakdown",
    "decay_inverse",
    "decay_lower_mix_inverse",
    "detect_oscillation",
    "expected_cost",
    "fundamental_strategies",
    "inventory_path",
    "inventory_profile_limit",
    "limit_report",
    "make_equidistant_grid",
    "monte_carlo_costs",
    "oscillation_theta_bound",
    "path_limit_error",
    "realized_cost_sample",
    "solve_equilibrium",
    "sweep_n",
    "sweep_theta",
    "threshold_certificate_matrix",
    "verify_threshold",
    "w_component_limit",
    "w_normalization_limit",
    "w_system_inverse",
    "w_unnormalized",
    "w_unnormalized_partial_sum",
    "w_unnormalized_vector",
]
