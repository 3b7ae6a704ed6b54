"""FFT solvers for the periodic linear elliptic substeps.

Every substep reduces to a screened Poisson (or pure Poisson) equation built
from the compositions div+ grad- or div- grad+. Both compositions are the same
circulant operator, diagonal in the 2-D DFT basis with eigenvalues
-(4 - 2cos z_i - 2cos z_j)/h^2 at the frequency angles z_i = 2*pi*i/M,
z_j = 2*pi*j/N (zero-based i, j). Each solver divides the transformed
right-hand side by the matching positive symbol and takes the real part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import MatrixField, ScalarField, Scheme, VectorField, divergence, matrix_divergence

__all__ = [
    "SpectralSymbols",
    "build_symbols",
    "screened_poisson_vector",
    "screened_poisson_scalar",
    "helmholtz_smooth",
    "integrate_gradient",
]


@dataclass(frozen=True)
class SpectralSymbols:
    """Denominator arrays for the diagonal solves on an M x N grid.

    lap is the (h^2-scaled) five-point Laplacian symbol 4 - 2cos z_i - 2cos z_j;
    it vanishes only at the zero frequency. a, b, c are each lap plus a strictly
    positive screening constant, so they never vanish:

        a = gamma*h^2 + lap              (vector coupling step)
        b = (tau/beta)*h^2 + gamma*lap   (data fusion step)
        c = h^2 + eps*lap                (initial smoother)

    Values are immutable after construction and safe to share across
    concurrent solves.
    """

    M: int
    N: int
    h: float
    zi: np.ndarray
    zj: np.ndarray
    lap: np.ndarray
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray


def build_symbols(
    M: int, N: int, h: float, gamma: float, tau: float, beta: float, eps: float = 0.0
) -> SpectralSymbols:
    """Precompute the solver symbols for an M x N periodic grid."""
    if M < 2 or N < 2:
        raise ValueError(f"grid must be at least 2x2, got {M}x{N}")
    if not (h > 0 and gamma > 0 and tau > 0 and beta > 0):
        raise ValueError(
            f"h, gamma, tau, beta must be positive, got {h}, {gamma}, {tau}, {beta}"
        )
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    zi = 2.0 * np.pi * np.arange(M) / M
    zj = 2.0 * np.pi * np.arange(N) / N
    lap = (2.0 - 2.0 * np.cos(zi))[:, None] + (2.0 - 2.0 * np.cos(zj))[None, :]
    h2 = h * h
    return SpectralSymbols(
        M=M,
        N=N,
        h=float(h),
        zi=zi,
        zj=zj,
        lap=lap,
        a=gamma * h2 + lap,
        b=(tau / beta) * h2 + gamma * lap,
        c=h2 + eps * lap,
    )


def _check_grid(field, sym: SpectralSymbols):
    if field.shape != (sym.M, sym.N):
        raise ValueError(f"field shape {field.shape} does not match symbols {(sym.M, sym.N)}")


def _diagonal_solve(g: np.ndarray, denom: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(np.fft.fft2(g) / denom).real


def screened_poisson_vector(
    p: VectorField,
    hess: MatrixField,
    gamma: float,
    h: float,
    sym: SpectralSymbols,
    rhs_scheme: Scheme = Scheme.BACKWARD,
) -> VectorField:
    """Couple a vector field to a target Jacobian, componentwise.

    Solves, for k = 1, 2,

        -div+ grad- w_k + gamma*w_k = gamma*p_k - div H_k,

    where the divergence on the right uses rhs_scheme (backward by default,
    which is adjoint-consistent with Jacobians taken backward).
    """
    _check_grid(p, sym)
    _check_grid(hess, sym)
    h2 = h * h
    src = matrix_divergence(hess, rhs_scheme)
    w1 = _diagonal_solve(gamma * h2 * p.c1.data - h2 * src.c1.data, sym.a)
    w2 = _diagonal_solve(gamma * h2 * p.c2.data - h2 * src.c2.data, sym.a)
    return VectorField(p.c1.like(w1), p.c2.like(w2))


def screened_poisson_scalar(
    p: VectorField,
    f: ScalarField,
    gamma: float,
    tau: float,
    beta: float,
    h: float,
    sym: SpectralSymbols,
) -> ScalarField:
    """Fuse a target gradient p with data f.

    Solves  -gamma div- grad+ u + (tau/beta)*u = (tau/beta)*f - gamma div- p.
    The zero-frequency symbol is (tau/beta)*h^2, so mean(u) = mean(f).
    """
    _check_grid(p, sym)
    _check_grid(f, sym)
    h2 = h * h
    g = (tau / beta) * h2 * f.data - gamma * h2 * divergence(p, Scheme.BACKWARD).data
    return f.like(_diagonal_solve(g, sym.b))


def helmholtz_smooth(f: ScalarField, eps: float, h: float, sym: SpectralSymbols) -> ScalarField:
    """Solve u - eps * (div- grad+ u) = f; preserves the mean of f.

    eps = 0 returns f up to FFT round-off.
    """
    _check_grid(f, sym)
    return f.like(_diagonal_solve(h * h * f.data, sym.c))


def integrate_gradient(q: VectorField, f: ScalarField, h: float, sym: SpectralSymbols) -> ScalarField:
    """Recover a scalar field from a gradient-like field q.

    Solves  div- grad+ v = div- q  with the additive constant fixed by
    mean(v) = mean(f). The Laplacian symbol vanishes at frequency zero, where
    the right-hand side coefficient is exactly zero (periodic divergences sum
    to zero); that coefficient is replaced by M*N*mean(f) to pin the mean.
    """
    _check_grid(q, sym)
    _check_grid(f, sym)
    g = h * h * divergence(q, Scheme.BACKWARD).data
    ghat = np.fft.fft2(g)
    denom = -sym.lap.copy()
    denom[0, 0] = 1.0
    vhat = ghat / denom
    vhat[0, 0] = sym.M * sym.N * f.mean()
    return f.like(np.fft.ifft2(vhat).real)
