"""Bias analysis for a misclassified binary confounder in treatment-effect studies.

Closed-form bias of the average-treatment-effect estimator under two
analysis models (outcome regression and an inverse-probability-weighted
marginal model), an exact enumeration oracle that validates the formulas,
finite-sample estimators, a Monte Carlo harness, and a sensitivity
analysis driven by observable summary statistics.
"""

__version__ = "0.1.0"

from .errors import (
    ConditioningError,
    DegenerateObservableError,
    DegenerateParameterError,
    DomainError,
    EstimationError,
    InfeasibleAssumptionError,
    NonPositivityError,
    ObservableConsistencyWarning,
    ParameterError,
    PositivityError,
    SensitivityAnalysisError,
    SingularDesignError,
)
from .estimators import Dataset, FitResult, Z95, fit_conditional, fit_msm_ipw, sandwich_se
from .formulas import (
    CurvePoint,
    InvertedParams,
    SWEEPABLE_PARAMETERS,
    bias_conditional,
    bias_curve,
    bias_msm,
    bias_pair,
    implied_conditional_coefficients,
    implied_observables,
    invert_observables,
    phi,
    phi_table,
    u_coefficients,
)
from .oracle import Cell, CellTable, enumerate_cells, population_ipw_slope, population_ols
from .params import (
    ALGEBRAIC_TOL,
    ORACLE_TOL,
    BiasPair,
    ConditionalCoefficients,
    LatentParams,
    ObservedSummary,
    UCoefficients,
)
from .sensitivity import (
    AdjustedEstimate,
    BiasDistribution,
    DrawResult,
    SensitivityConfig,
    SensitivityReport,
    adjusted_estimate,
    calibrate_gamma,
    run_sensitivity,
)
from .simulation import (
    PerformanceSummary,
    Scenario,
    SimulationReport,
    builtin_scenario,
    generate_dataset,
    load_scenario_catalog,
    run_scenario,
)

__all__ = [
    "__version__",
    # errors
    "DomainError",
    "ParameterError",
    "NonPositivityError",
    "ConditioningError",
    "DegenerateObservableError",
    "SingularDesignError",
    "DegenerateParameterError",
    "InfeasibleAssumptionError",
    "EstimationError",
    "PositivityError",
    "SensitivityAnalysisError",
    "ObservableConsistencyWarning",
    # types
    "LatentParams",
    "ObservedSummary",
    "BiasPair",
    "UCoefficients",
    "ConditionalCoefficients",
    "Dataset",
    "FitResult",
    "Cell",
    "CellTable",
    "Scenario",
    "PerformanceSummary",
    "SimulationReport",
    "SensitivityConfig",
    "SensitivityReport",
    "BiasDistribution",
    "DrawResult",
    "AdjustedEstimate",
    "CurvePoint",
    "InvertedParams",
    # constants
    "ALGEBRAIC_TOL",
    "ORACLE_TOL",
    "Z95",
    "SWEEPABLE_PARAMETERS",
    # operations
    "implied_observables",
    "phi",
    "phi_table",
    "u_coefficients",
    "bias_conditional",
    "bias_msm",
    "bias_pair",
    "implied_conditional_coefficients",
    "invert_observables",
    "bias_curve",
    "enumerate_cells",
    "population_ols",
    "population_ipw_slope",
    "fit_conditional",
    "fit_msm_ipw",
    "sandwich_se",
    "generate_dataset",
    "run_scenario",
    "builtin_scenario",
    "load_scenario_catalog",
    "run_sensitivity",
    "adjusted_estimate",
    "calibrate_gamma",
]
