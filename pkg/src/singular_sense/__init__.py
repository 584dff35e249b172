"""Estimation bounds for two-mode gain/loss sensors with singular response.

The package is organised bottom-up: phase-space linear algebra
(:mod:`~singular_sense.linalg`), the non-Hermitian sensor model
(:mod:`~singular_sense.sensor`), Laurent and Neumann expansions of the
inverse response (:mod:`~singular_sense.expansion`), the Gaussian
input-output channel (:mod:`~singular_sense.channel`), classical and
quantum Fisher information (:mod:`~singular_sense.fisher`), and the
benchmark sweeps with their CSV/verdict artifacts
(:mod:`~singular_sense.scenarios`).
"""

from __future__ import annotations

from .channel import (
    GaussianState,
    InputSpec,
    dominant_output_derivatives,
    effective_input_noise,
    output_derivatives,
    output_state,
    thermal_input,
    xi_matrix,
)
from .expansion import (
    LaurentExpansion,
    MatrixFamily,
    NotInvertibleFamilyError,
    PoleAtZeroError,
    direct_response,
    evaluate,
    neumann_expansion,
    pole_order,
    sm_expansion,
)
from .fisher import (
    FisherMatrix,
    cfim_gaussian,
    cfim_heterodyne,
    cfim_heterodyne_response,
    cfim_monte_carlo,
    error_bounds,
    qfim_asymptotic,
    qfim_exact,
    qfim_noisy,
    qfim_response,
    sld_matrix,
)
from .linalg import (
    SymplecticSpectrum,
    numerical_rank,
    phase_space_rep,
    symplectic_form,
    williamson,
)
from .scenarios import (
    ClosedFormCoefficients,
    FigureConfig,
    SweepDef,
    SweepResult,
    closed_form_coefficients,
    error_asymptote,
    figure_config,
    figure_ids,
    fit_slope,
    ns_thermal_f00,
    point_errors,
    reproduce_figure,
    s_coefficients,
    sweep_error,
    theta1zero_coeffs,
    write_sweep_csv,
)
from .sensor import (
    AtThresholdError,
    EigenData,
    PerturbationSpec,
    PhysicalityError,
    RegimeReport,
    SensorParams,
    SteadyState,
    build_generator,
    classify,
    eigensystem,
    lasing_threshold,
    perturbation,
    perturbation_names,
    perturbed_generator,
    singular_detunings,
    steady_state_occupations,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AtThresholdError",
    "ClosedFormCoefficients",
    "EigenData",
    "FigureConfig",
    "FisherMatrix",
    "GaussianState",
    "InputSpec",
    "LaurentExpansion",
    "MatrixFamily",
    "NotInvertibleFamilyError",
    "PerturbationSpec",
    "PhysicalityError",
    "PoleAtZeroError",
    "RegimeReport",
    "SensorParams",
    "SteadyState",
    "SweepDef",
    "SweepResult",
    "SymplecticSpectrum",
    "numerical_rank",
    "build_generator",
    "cfim_gaussian",
    "cfim_heterodyne",
    "cfim_heterodyne_response",
    "cfim_monte_carlo",
    "classify",
    "closed_form_coefficients",
    "direct_response",
    "dominant_output_derivatives",
    "effective_input_noise",
    "eigensystem",
    "error_asymptote",
    "error_bounds",
    "evaluate",
    "figure_config",
    "figure_ids",
    "fit_slope",
    "lasing_threshold",
    "neumann_expansion",
    "ns_thermal_f00",
    "output_derivatives",
    "output_state",
    "perturbation",
    "perturbation_names",
    "perturbed_generator",
    "phase_space_rep",
    "point_errors",
    "pole_order",
    "qfim_asymptotic",
    "qfim_exact",
    "qfim_noisy",
    "qfim_response",
    "reproduce_figure",
    "s_coefficients",
    "singular_detunings",
    "sld_matrix",
    "sm_expansion",
    "steady_state_occupations",
    "sweep_error",
    "symplectic_form",
    "theta1zero_coeffs",
    "thermal_input",
    "williamson",
    "write_sweep_csv",
    "xi_matrix",
]
