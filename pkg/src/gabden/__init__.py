"""Numerical density checks for Gabor systems with a Gaussian-window STFT."""
import os as _os

# GABDEN_THREADS caps the BLAS pools; it only takes effect if set before numpy loads
if _os.environ.get("GABDEN_THREADS", "").isdigit():
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["GABDEN_THREADS"])

from .signal import (DEFAULT_GRID, SampledSignal, TimeGrid, fourier_transform, inner_product,
                     make_preset, norm_sq, translate_modulate, weighted_norm_sq)
from .stft import (PhaseGrid, STFTField, check_covariance, gaussian_stft, stft_field,
                   stft_scattered, stft_values, window)
from .pointset import (Cube, Lattice2D, PointFamily, PointSet, angular_sector_family,
                       count_in_cube, density_profile, extremal_counts, lattice_points, rho_alpha)
from .frames import (GaborSection, GramMatrix, dual_system, gram_matrix, riesz_bounds,
                     trace_identity_check, biorthogonal_sum_field, uniform_minimality_margin)
from .report import VerificationReport
from .theorems import (CaseSpec, commutation_phase, err2_bound_check, error_integral, hap_radius,
                       point_estimate_constant, shifted_dual_biorthogonality,
                       verify_density_theorem, verify_uniform_minimality_density)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID",
    "SampledSignal",
    "TimeGrid",
    "fourier_transform",
    "inner_product",
    "make_preset",
    "norm_sq",
    "translate_modulate",
    "weighted_norm_sq",
    "PhaseGrid",
    "STFTField",
    "check_covariance",
    "gaussian_stft",
    "stft_field",
    "stft_scattered",
    "stft_values",
    "window",
    "Cube",
    "Lattice2D",
    "PointFamily",
    "PointSet",
    "angular_sector_family",
    "count_in_cube",
    "density_profile",
    "extremal_counts",
    "lattice_points",
    "rho_alpha",
    "GaborSection",
    "GramMatrix",
    "dual_system",
    "gram_matrix",
    "riesz_bounds",
    "trace_identity_check",
    "biorthogonal_sum_field",
    "uniform_minimality_margin",
    "CaseSpec",
    "commutation_phase",
    "err2_bound_check",
    "error_integral",
    "hap_radius",
    "point_estimate_constant",
    "shifted_dual_biorthogonality",
    "verify_density_theorem",
    "verify_uniform_minimality_density",
    "VerificationReport",
]
