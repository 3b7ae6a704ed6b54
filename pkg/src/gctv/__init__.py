"""Curvature + total-variation smoothing of 2-D scalar fields.

Minimizes a Gaussian-curvature / TV / L2-fidelity objective over periodic
grids by a four-step operator-splitting iteration whose linear substeps are
FFT diagonal solves and whose nonlinear substeps have per-pixel closed forms
or fast per-pixel iterations. Works on images and on surface height maps.
"""

from .fields import (
    MatrixField,
    ScalarField,
    Scheme,
    VectorField,
    det,
    diff,
    divergence,
    gradient,
    jacobian,
    matrix_divergence,
)
from .metrics import LpErrors, NoiseSpec, SsimParams, add_gaussian_noise, lp_errors, psnr, ssim
from .pixelwise import (
    InnerReport,
    InnerSolverParams,
    curvature_prox_fixed_point,
    curvature_prox_newton,
    det_prox,
    prox_abs_bilinear,
    shrink,
)
from .spectral import (
    SpectralSymbols,
    build_symbols,
    helmholtz_smooth,
    integrate_gradient,
    screened_poisson_scalar,
    screened_poisson_vector,
)
from .splitting import (
    NonFiniteError,
    SolveResult,
    SolveState,
    SplitParams,
    Status,
    discrete_energy,
    init_state,
    run,
    step,
)
from .synth import SYNTH_KINDS, cone, plateau, pyramid, steps, stripes, synth

__version__ = "0.1.0"

__all__ = [
    "MatrixField",
    "ScalarField",
    "Scheme",
    "VectorField",
    "det",
    "diff",
    "divergence",
    "gradient",
    "jacobian",
    "matrix_divergence",
    "LpErrors",
    "NoiseSpec",
    "SsimParams",
    "add_gaussian_noise",
    "lp_errors",
    "psnr",
    "ssim",
    "InnerReport",
    "InnerSolverParams",
    "curvature_prox_fixed_point",
    "curvature_prox_newton",
    "det_prox",
    "prox_abs_bilinear",
    "shrink",
    "SpectralSymbols",
    "build_symbols",
    "helmholtz_smooth",
    "integrate_gradient",
    "screened_poisson_scalar",
    "screened_poisson_vector",
    "NonFiniteError",
    "SolveResult",
    "SolveState",
    "SplitParams",
    "Status",
    "discrete_energy",
    "init_state",
    "run",
    "step",
    "SYNTH_KINDS",
    "cone",
    "plateau",
    "pyramid",
    "steps",
    "stripes",
    "synth",
]
