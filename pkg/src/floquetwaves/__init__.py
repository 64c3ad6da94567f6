"""Floquet exponents and Bloch modes of the time-modulated 1D wave equation.

Coupled-harmonics (harmonic balance) eigenvalue computations with a
Legendre spectral Galerkin space discretization, plus the analytic and
time-domain machinery to validate them.
"""

from .errors import (
    FloquetWavesError, InvalidModulationError, PositivityError,
    NeedsMoreCoefficientsError, InvalidDegreeError, DomainError,
    DimensionMismatchError, NearResonanceError, UnsupportedVariantError,
    SizeLimitError, NumericError, ModeNotFoundError, ConfigMismatchError,
)
from .modulation import (
    ModulationSpec, HarmonicVector, preset, from_coefficients,
    fourier_coefficients, toeplitz_matrix, shifted_derivative, fold_shift,
    pairing, norm_kd,
)
from .spectral import SpatialBasis, build_basis, inverse_constant, \
    eval_on_grid, project_function, export_matrices
from .assembly import (
    ABSORBING, NEUMANN, HarmonicProblem, QuadraticPencil, BlockPencil,
    assemble_quadratic, assemble_block, assemble_fasttime, mass_load,
    solve_forced, residual_form, quadratic_form, export_pencil,
)
from .eigensolver import (
    FloquetMode, SpectrumReport, brillouin_fold, solve_spectrum,
    solve_eigenvalues, match_eigenvalue, constant_mode_vector,
)
from .timedomain import (
    State, ValidationTrace, cn_step, cn_integrate, energy,
    energy_identity_residual, manufactured_forcing, growth_constant,
    bloch_time_eval, floquet_validation,
)
from .oracles import (
    ResonanceSet, SturmLiouvilleResult, absorbing_determinant,
    absorbing_const_resonances, absorbing_length_scaled,
    neumann_const_resonances, sturm_liouville, sl_quadratic_fit,
    temporal_factor_residual, resolvent_series,
)
from .diagnostics import (
    LocalizationProfile, RegionReport, localization_profile,
    folding_residual, region_check, k_threshold, k_threshold_relaxed,
    bloch_defect_norm, localization_bound_constant,
)
from .experiments import ExperimentConfig, run_all

__version__ = "0.1.0"
