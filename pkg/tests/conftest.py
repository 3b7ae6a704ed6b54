"""Shared helpers: random field constructors and independent oracles.

The oracles here intentionally avoid the code paths they check: dense
operator matrices are assembled by applying the difference stencils to
impulse fields and solved with numpy.linalg, never with FFTs; reference sums
use plain Python loops.
"""

import numpy as np

from gctv.fields import MatrixField, ScalarField, Scheme, VectorField, divergence, gradient


def rand_field(rng, M, N, h=1.0, scale=1.0):
    return ScalarField(scale * rng.standard_normal((M, N)), h)


def rand_vector(rng, M, N, h=1.0, scale=1.0):
    return VectorField(rand_field(rng, M, N, h, scale), rand_field(rng, M, N, h, scale))


def rand_matrix(rng, M, N, h=1.0, scale=1.0):
    return MatrixField(
        rand_field(rng, M, N, h, scale),
        rand_field(rng, M, N, h, scale),
        rand_field(rng, M, N, h, scale),
        rand_field(rng, M, N, h, scale),
    )


def operator_matrix(apply_op, M, N, h=1.0):
    """Dense (M*N)x(M*N) matrix of a linear ScalarField -> ScalarField map,
    column by column from impulse responses."""
    A = np.zeros((M * N, M * N))
    for k in range(M * N):
        e = np.zeros(M * N)
        e[k] = 1.0
        A[:, k] = apply_op(ScalarField(e.reshape(M, N), h)).data.ravel()
    return A


def screened_matrix(M, N, h, gamma):
    """Matrix of -div+ grad- + gamma*I."""
    return operator_matrix(
        lambda v: v.like(-divergence(gradient(v, Scheme.BACKWARD), Scheme.FORWARD).data
                         + gamma * v.data),
        M, N, h,
    )


def fusion_matrix(M, N, h, gamma, tau, beta):
    """Matrix of -gamma*div- grad+ + (tau/beta)*I."""
    return operator_matrix(
        lambda v: v.like(-gamma * divergence(gradient(v, Scheme.FORWARD), Scheme.BACKWARD).data
                         + (tau / beta) * v.data),
        M, N, h,
    )


def laplacian_matrix(M, N, h=1.0):
    """Matrix of div- grad+."""
    return operator_matrix(
        lambda v: divergence(gradient(v, Scheme.FORWARD), Scheme.BACKWARD), M, N, h
    )


def naive_diff(a, axis, forward, h):
    """Loop-based periodic difference for cross-checking the vectorized one."""
    M, N = a.shape
    out = np.zeros_like(a)
    for i in range(M):
        for j in range(N):
            if axis == 1:
                if forward:
                    out[i, j] = a[(i + 1) % M, j] - a[i, j]
                else:
                    out[i, j] = a[i, j] - a[(i - 1) % M, j]
            else:
                if forward:
                    out[i, j] = a[i, (j + 1) % N] - a[i, j]
                else:
                    out[i, j] = a[i, j] - a[i, (j - 1) % N]
    return out / h


def curvature_residual(q1, q2, b1, b2, det_hess, gamma, tau):
    """Residual of the per-pixel optimality system at (q1, q2)."""
    r2 = q1 * q1 + q2 * q2
    w = 3.0 * tau * np.abs(det_hess)
    f1 = gamma * q1 - w * q1 / (1.0 + r2) ** 2.5 - gamma * b1
    f2 = gamma * q2 - w * q2 / (1.0 + r2) ** 2.5 - gamma * b2
    return f1, f2


def bisect_root(fn, lo, hi, iters=200):
    """Plain bisection; fn(lo) and fn(hi) must bracket a sign change."""
    flo = fn(lo)
    assert flo * fn(hi) <= 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def prox_objective(v1, v2, a1, a2, b1, b2, c):
    return 0.5 * ((v1 - b1) ** 2 + (v2 - b2) ** 2) + c * np.abs(a1 * v1 - a2 * v2)


def prox_grid_min(a1, a2, b1, b2, c, points=401):
    """Brute-force minimum of the prox objective over a square grid centered
    at b with radius 2*(|b| + c*(|a1|+|a2|))."""
    r = 2.0 * (np.hypot(b1, b2) + c * (abs(a1) + abs(a2)))
    w1 = b1 + r * np.linspace(-1.0, 1.0, points)
    w2 = b2 + r * np.linspace(-1.0, 1.0, points)
    obj = (0.5 * (w1 - b1) ** 2)[:, None] + (0.5 * (w2 - b2) ** 2)[None, :] \
        + c * np.abs((a1 * w1)[:, None] - (a2 * w2)[None, :])
    return float(obj.min())
