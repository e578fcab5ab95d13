"""Numerical toolkit for an order-parameterized concurrence family of
bipartite entanglement measures: pure/mixed evaluation, convex-roof
optimization, monogamy and polygamy residuals, multiqubit indicators,
inequality certificates, and figure-grid sweeps."""

from .analysis import (
    GridCert,
    RootResult,
    certify_subadditive,
    certify_superadditive_sq,
    find_convexity_threshold,
    find_monogamy_threshold,
    gradient_factor_pair,
    second_derivative,
    second_derivative_limit_at_one,
    squared_superadditivity_gap,
    subadditivity_gap,
)
from .measures import (
    CLOSED_FORM_OMEGA_MIN,
    SQUARED_SUPERADDITIVE_OMEGA_MIN,
    MeasureValue,
    Omega,
    concurrence_mixed,
    concurrence_of_assistance,
    concurrence_pure,
    gwc_from_concurrence,
    gwc_mixed_two_qubit,
    gwc_of_spectrum,
    gwc_pure,
    gwcoa_bound,
)
from .multiqubit import (
    IndicatorValue,
    ResidualReport,
    indicator_tau,
    indicator_tau_mixed,
    monogamy_residual,
    polygamy_residual,
    residual_422,
    residual_422_grid,
    three_tangle_pure3q,
)
from .roof import OptimizerBudget, RoofResult, coa_oracle, roof_extremize
from .states import (
    DensityOperator,
    DimensionError,
    PureState,
    SchmidtSpectrum,
    StateFormatError,
    load_state,
    partial_trace,
    preset,
    random_density_operator,
    random_pure_state,
    reduced_density,
    schmidt_spectrum,
    state_from_json,
    state_to_json,
)
from .sweeps import FIGURE_IDS, canonical_name, sweep_rows, write_sweep
from .verify import SUITES, run_suites

__version__ = "0.1.0"

__all__ = [
    "CLOSED_FORM_OMEGA_MIN",
    "SQUARED_SUPERADDITIVE_OMEGA_MIN",
    "DensityOperator",
    "DimensionError",
    "FIGURE_IDS",
    "GridCert",
    "IndicatorValue",
    "MeasureValue",
    "Omega",
    "OptimizerBudget",
    "PureState",
    "ResidualReport",
    "RoofResult",
    "RootResult",
    "SchmidtSpectrum",
    "StateFormatError",
    "SUITES",
    "canonical_name",
    "certify_subadditive",
    "certify_superadditive_sq",
    "coa_oracle",
    "concurrence_mixed",
    "concurrence_of_assistance",
    "concurrence_pure",
    "find_convexity_threshold",
    "find_monogamy_threshold",
    "gradient_factor_pair",
    "gwc_from_concurrence",
    "gwc_mixed_two_qubit",
    "gwc_of_spectrum",
    "gwc_pure",
    "gwcoa_bound",
    "indicator_tau",
    "indicator_tau_mixed",
    "load_state",
    "monogamy_residual",
    "partial_trace",
    "polygamy_residual",
    "preset",
    "random_density_operator",
    "random_pure_state",
    "reduced_density",
    "residual_422",
    "residual_422_grid",
    "roof_extremize",
    "run_suites",
    "schmidt_spectrum",
    "second_derivative",
    "second_derivative_limit_at_one",
    "squared_superadditivity_gap",
    "state_from_json",
    "state_to_json",
    "subadditivity_gap",
    "sweep_rows",
    "three_tangle_pure3q",
    "write_sweep",
    "__version__",
]
