"""Spectral density and spectral function of -y'' + q(x) y = lam y on (0, inf)
with a regular singular point at the origin."""
from .appell import (AppellState, AsymptoticCoeffs, asymptotic_coeffs, f1, f2, f3,
                     f3_literal, fN, residuals)
from .density import (DensityEstimate, DensityEvaluator, auto_density, density_at,
                      f3_gate, matching_heuristic)
from .errors import (DomainError, InvalidPotentialError, MatchingPointError,
                     RefinementError, ResonanceError, SeriesNotConvergedError,
                     SLDensityError, StiffnessError, TurningPointError,
                     UnsupportedOperationError)
from .frobenius import FrobeniusExpansion, build_coeffs, eval_phi, series_cutoff
from .integrator import BACKEND, IvpState, Shooter, integrate, step_exact_kernel
from .potentials import (ClosedFormTail, ExpBarrierTail, Potential, PowerSeriesTail,
                         bessel, hydrogen, make_barrier, make_rational)
from .spectral import PAPER16, SpectralGrid, rho_closed_form_oracle, rho_grid

__version__ = "0.1.0"

__all__ = [
    "AppellState", "AsymptoticCoeffs", "asymptotic_coeffs", "f1", "f2", "f3", "f3_literal",
    "fN", "residuals", "DensityEstimate", "DensityEvaluator", "auto_density", "density_at",
    "f3_gate", "matching_heuristic", "DomainError", "InvalidPotentialError",
    "MatchingPointError", "RefinementError", "ResonanceError", "SeriesNotConvergedError",
    "SLDensityError", "StiffnessError", "TurningPointError", "UnsupportedOperationError",
    "FrobeniusExpansion", "build_coeffs", "eval_phi", "series_cutoff", "BACKEND", "IvpState",
    "Shooter", "integrate", "step_exact_kernel", "ClosedFormTail", "ExpBarrierTail",
    "Potential", "PowerSeriesTail", "bessel", "hydrogen", "make_barrier", "make_rational",
    "PAPER16", "SpectralGrid", "rho_closed_form_oracle", "rho_grid",
]
