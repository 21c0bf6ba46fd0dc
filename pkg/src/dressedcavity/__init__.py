"""Dressed-atom dynamics in a spherical cavity.

Normal-mode spectra, single-excitation survival amplitudes, the two-atom
reduced density matrix with its impurity, and the von Neumann
entanglement entropy, for both finite cavities and the free-space limit.
"""

from .bipartite import (
    EntangledStateConfig,
    EntropyFlatnessReport,
    SingleAtomReducedDensity,
    TwoAtomReducedDensity,
    analytic_entropy,
    entropy_time_independence_check,
    impurity,
    single_atom_reduced_density,
    two_atom_reduced_density,
    von_neumann_entropy,
)
from .errors import (
    ApproximationDomainError,
    CavityModelError,
    ConfigurationError,
    ConsistencyError,
    NearResonanceError,
    NormalizationError,
    NumericDomainError,
    PhysicalityError,
    PoleProximityError,
    QuadratureError,
    RegimeError,
    SpectrumSolverError,
    ValidationError,
)
from .evolution import (
    AmplitudeSet,
    SmallCavitySeries,
    amplitude,
    amplitude_row,
    amplitude_set,
    small_cavity_amplitude_first_order,
    small_cavity_lower_bound,
    survival_probability,
    survival_probability_small_cavity_series,
    unitarity_defect,
)
from .freespace import (
    freespace_f00_closed,
    freespace_f00_numeric,
    freespace_survival_asymptotic,
    g_integral,
)
from .modes import (
    ModeMatrix,
    assemble_raw_matrix,
    atom_element,
    build_matrix,
    field_element,
    small_cavity_elements,
)
from .params import (
    DEFAULT_N_MODES,
    REGIME_STRONG,
    REGIME_WEAK,
    SystemParams,
    make_params,
)
from .spectrum import (
    METHOD_EXACT,
    METHOD_SMALL_CAVITY,
    Spectrum,
    approx_spectrum_small_cavity,
    check_interlacing,
    eigenfrequency_mismatch,
    newton_residuals,
    solve_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSet",
    "ApproximationDomainError",
    "CavityModelError",
    "ConfigurationError",
    "ConsistencyError",
    "DEFAULT_N_MODES",
    "EntangledStateConfig",
    "EntropyFlatnessReport",
    "METHOD_EXACT",
    "METHOD_SMALL_CAVITY",
    "ModeMatrix",
    "NearResonanceError",
    "NormalizationError",
    "NumericDomainError",
    "PhysicalityError",
    "PoleProximityError",
    "QuadratureError",
    "REGIME_STRONG",
    "REGIME_WEAK",
    "RegimeError",
    "SingleAtomReducedDensity",
    "SmallCavitySeries",
    "Spectrum",
    "SpectrumSolverError",
    "SystemParams",
    "TwoAtomReducedDensity",
    "ValidationError",
    "amplitude",
    "amplitude_row",
    "amplitude_set",
    "analytic_entropy",
    "approx_spectrum_small_cavity",
    "assemble_raw_matrix",
    "atom_element",
    "build_matrix",
    "check_interlacing",
    "eigenfrequency_mismatch",
    "entropy_time_independence_check",
    "field_element",
    "freespace_f00_closed",
    "freespace_f00_numeric",
    "freespace_survival_asymptotic",
    "g_integral",
    "impurity",
    "make_params",
    "newton_residuals",
    "single_atom_reduced_density",
    "small_cavity_amplitude_first_order",
    "small_cavity_elements",
    "small_cavity_lower_bound",
    "solve_spectrum",
    "survival_probability",
    "survival_probability_small_cavity_series",
    "two_atom_reduced_density",
    "unitarity_defect",
    "von_neumann_entropy",
]
