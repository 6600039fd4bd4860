"""Expenditure cascades on homophilic perception networks.

A deterministic agent-based simulator: agents draw incomes, choose whom to
observe through income-homophilic link formation, and consume upward-looking
relative to the highest consumption they observe. The package reproduces the
model's micro stylised facts (declining decile APCs, scale-invariant
aggregate APCs, expenditure homogenisation, approximately log-normal
expenditures) and the inequality/savings/segregation experiment.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .consumption import (
    ConsumptionParams,
    ConsumptionSolution,
    SolverError,
    isolated_consumption,
    recursive_expansion_oracle,
    solve_fixed_point,
)
from .experiment import (
    ConfigError,
    EnsembleSummary,
    RunResult,
    SimConfig,
    run_ensemble,
    run_single,
    stylised_facts_report,
    sweep_inequality,
    sweep_wc_grid,
)
from .income import IncomeRegime, IncomeVector, sample_incomes
from .network import (
    PerceptionGraph,
    choice_probabilities,
    generate_network,
    link_weight,
    segregation_diagnostics,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "ConsumptionParams",
    "ConsumptionSolution",
    "SolverError",
    "isolated_consumption",
    "recursive_expansion_oracle",
    "solve_fixed_point",
    "ConfigError",
    "EnsembleSummary",
    "RunResult",
    "SimConfig",
    "run_ensemble",
    "run_single",
    "stylised_facts_report",
    "sweep_inequality",
    "sweep_wc_grid",
    "IncomeRegime",
    "IncomeVector",
    "sample_incomes",
    "PerceptionGraph",
    "choice_probabilities",
    "generate_network",
    "link_weight",
    "segregation_diagnostics",
    "__version__",
]
