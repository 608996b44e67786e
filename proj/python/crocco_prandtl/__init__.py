"""Python bindings for the crocco-prandtl solver and Kolmogorov lab."""

from ._core import (
    ConfigError,
    Cutoff,
    Error,
    GridSpec,
    NumericalError,
    ParameterError,
    ValidationError,
    coefficients_at,
    dilate,
    dilation_defect,
    gamma0,
    gamma0_mass,
    run_scenario,
    scenario_catalog,
    solve,
    solve_model,
    validate,
    version,
)

__version__ = version()

__all__ = [
    "ConfigError",
    "Cutoff",
    "Error",
    "GridSpec",
    "NumericalError",
    "ParameterError",
    "ValidationError",
    "coefficients_at",
    "dilate",
    "dilation_defect",
    "gamma0",
    "gamma0_mass",
    "run_scenario",
    "scenario_catalog",
    "solve",
    "solve_model",
    "validate",
    "version",
]
