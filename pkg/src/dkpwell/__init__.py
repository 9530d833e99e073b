"""DKP particles in a one-dimensional Woods-Saxon well.

Scattering coefficients, bound-state spectra and the supercritical depth,
computed from the closed-form hypergeometric solution of the reduced
Klein-Gordon problem.
"""

__version__ = "0.1.0"

from .algebra import BetaSet, ReducedSolution, build_betas, reconstruct_spinor, verify_algebra
from .bound_states import (
    BoundRoot,
    CriticalPoint,
    SpectrumCurve,
    find_critical,
    find_spectrum,
    matching_residual,
    parity_residuals,
    track_spectrum,
)
from .logcomplex import LogComplex
from .scattering import (
    PhysicalSetup,
    amplitudes,
    coefficients,
    derive_params,
    find_resonances,
    reflection,
    sweep,
    transmission,
)
from .special import Hyp2F1Args, hyp2f1, ln_gamma
from .square_well import SquareWellSetup, bound_energies_square, transmission_square

__all__ = [
    "BetaSet", "BoundRoot", "CriticalPoint", "Hyp2F1Args", "LogComplex", "PhysicalSetup",
    "ReducedSolution", "SpectrumCurve", "SquareWellSetup", "amplitudes",
    "bound_energies_square", "build_betas", "coefficients", "derive_params",
    "find_critical", "find_resonances", "find_spectrum", "hyp2f1", "ln_gamma",
    "matching_residual", "parity_residuals", "reconstruct_spinor", "reflection",
    "sweep", "track_spectrum", "transmission", "transmission_square", "verify_algebra",
]
