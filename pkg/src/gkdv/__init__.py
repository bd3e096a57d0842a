"""Arbitrary-depth nonlinear surface waves on a fluid layer.

The layer's surface elevation obeys an infinite-order generalization of the
KdV equation in which the dispersive and nonlinear terms carry the nonlocal
operators sin(h d/dx) and cos(h d/dx).  This package provides

  * exact Fourier-multiplier action of those operators (:mod:`gkdv.spectral`),
  * the linear dispersion relation and its limits (:mod:`gkdv.dispersion`),
  * traveling solitary-wave construction via the coefficient recursion, with
    convergence-radius and residual diagnostics (:mod:`gkdv.traveling_wave`),
  * integrating-factor pseudospectral time evolution (:mod:`gkdv.evolution`),
  * a deterministic CLI and an acceptance-test registry (:mod:`gkdv.cli`,
    :mod:`gkdv.acceptance`).

The third-order shallow-layer limit (the classical KdV equation) is built in
throughout as a verification oracle.
"""

from .errors import (
    BandLimitError,
    BlowUpError,
    ConfigError,
    GkdvError,
    NoSmoothMatchingError,
    ResonanceError,
    SeriesEvaluationError,
    StabilityError,
)
from .params import PhysicalParams
from .spectral import (
    PeriodicGrid,
    SpectralField,
    apply_cos_h_dx,
    apply_sin_h_dx,
    derivative,
    f_linear_from_eta,
    surface_velocity,
)
from .dispersion import (
    DispersionSample,
    dispersion_sample,
    dispersion_sweep,
    group_velocity,
    model_dispersion_gkdv,
    omega_squared,
    phase_velocity,
)
from .traveling_wave import (
    MODE_PAPER_PRINTED,
    MODE_STEADY_DERIVED,
    KoebeReport,
    ProfileSample,
    RadiusEstimate,
    ResidualReport,
    ScaledCoefficients,
    SeriesSolution,
    build_solution,
    koebe_diagnostic,
    radius_estimate,
    reconstruct_profile,
    recursion_paper_printed,
    recursion_shallow_derived,
    recursion_shallow_printed,
    recursion_steady_derived,
    residual_check,
    sample_profile,
    series_solution,
    solve_a1,
    velocity_constraint,
)
from .evolution import (
    EQUATION_GKDV,
    EQUATION_KDV,
    EvolutionState,
    Trajectory,
    evolve,
    rhs_gkdv,
    rhs_kdv,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "BandLimitError",
    "BlowUpError",
    "ConfigError",
    "GkdvError",
    "NoSmoothMatchingError",
    "ResonanceError",
    "SeriesEvaluationError",
    "StabilityError",
    "PhysicalParams",
    "PeriodicGrid",
    "SpectralField",
    "apply_cos_h_dx",
    "apply_sin_h_dx",
    "derivative",
    "f_linear_from_eta",
    "surface_velocity",
    "DispersionSample",
    "dispersion_sample",
    "dispersion_sweep",
    "group_velocity",
    "model_dispersion_gkdv",
    "omega_squared",
    "phase_velocity",
    "MODE_PAPER_PRINTED",
    "MODE_STEADY_DERIVED",
    "KoebeReport",
    "ProfileSample",
    "RadiusEstimate",
    "ResidualReport",
    "ScaledCoefficients",
    "SeriesSolution",
    "build_solution",
    "koebe_diagnostic",
    "radius_estimate",
    "reconstruct_profile",
    "recursion_paper_printed",
    "recursion_shallow_derived",
    "recursion_shallow_printed",
    "recursion_steady_derived",
    "residual_check",
    "sample_profile",
    "series_solution",
    "solve_a1",
    "velocity_constraint",
    "EQUATION_GKDV",
    "EQUATION_KDV",
    "EvolutionState",
    "Trajectory",
    "evolve",
    "rhs_gkdv",
    "rhs_kdv",
    "step",
    "__version__",
]
