"""Per-pixel solvers for the nonlinear and nonsmooth substeps.

Each pixel carries an independent small problem; the solvers below sweep all
pixels synchronously (Jacobi style) with vectorized updates, so results are
deterministic and independent of any pixel ordering. Stopping tests reduce
over the whole field after each sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import MatrixField, ScalarField, VectorField

__all__ = [
    "InnerSolverParams",
    "InnerReport",
    "curvature_prox_fixed_point",
    "curvature_prox_newton",
    "prox_abs_bilinear",
    "det_prox",
    "shrink",
]


@dataclass(frozen=True)
class InnerSolverParams:
    """Knobs for the inner per-pixel iterations.

    rho damps Newton steps; rho1 / rho2 are the relaxation rates of the fixed
    point and two-block iterations; xi1 / xi2 their max-norm stopping
    thresholds. s_floor guards the fixed-point denominator: pixels whose
    denominator falls at or below it keep their value for that sweep.
    """

    rho: float = 1.0
    rho1: float = 0.8
    rho2: float = 0.8
    xi1: float = 1e-5
    xi2: float = 1e-5
    max_inner: int = 100
    s_floor: float = 1e-8

    def __post_init__(self):
        for name in ("rho", "rho1", "rho2"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        for name in ("xi1", "xi2", "s_floor"):
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"{name} must be positive, got {v}")
        if self.max_inner < 1:
            raise ValueError(f"max_inner must be >= 1, got {self.max_inner}")


@dataclass(frozen=True)
class InnerReport:
    """Outcome of one inner solve: sweep count, convergence flag, and the
    final max-norm update difference."""

    iterations: int
    converged: bool
    max_residual: float


def curvature_prox_fixed_point(
    b: VectorField, det_hess: ScalarField, gamma: float, tau: float, prm: InnerSolverParams
) -> tuple[VectorField, InnerReport]:
    """Relaxed fixed-point solve of the curvature-weighted vector problem.

    Per pixel, finds q with  (gamma - 3*tau*|d| / (1+|q|^2)^(5/2)) * q = gamma*b
    where d is the local Hessian determinant, iterating

        s     = gamma - 3*tau*|d| / (1+|q|^2)^(5/2)
        q_new = q + rho1 * (gamma*b/s - q)

    from q = b until the update difference falls to xi1 or max_inner sweeps.
    The increment form keeps exact fixed points exact (zero curvature weight
    with gamma*b/s == b reproduces b bitwise).
    Pixels with s <= s_floor (loss of coercivity) are frozen for the sweep;
    the report is flagged unconverged if any pixel is still frozen when the
    iteration stops.
    """
    if not (gamma > 0 and tau > 0):
        raise ValueError(f"gamma and tau must be positive, got {gamma}, {tau}")
    w = 3.0 * tau * np.abs(det_hess.data)
    gb1 = gamma * b.c1.data
    gb2 = gamma * b.c2.data
    q1 = b.c1.data.copy()
    q2 = b.c2.data.copy()

    diff = np.inf
    frozen = np.zeros(q1.shape, dtype=bool)
    iterations = 0
    for _ in range(prm.max_inner):
        s = gamma - w / (1.0 + q1 * q1 + q2 * q2) ** 2.5
        frozen = s <= prm.s_floor
        safe_s = np.where(frozen, 1.0, s)
        n1 = np.where(frozen, q1, q1 + prm.rho1 * (gb1 / safe_s - q1))
        n2 = np.where(frozen, q2, q2 + prm.rho1 * (gb2 / safe_s - q2))
        diff = max(np.abs(n1 - q1).max(), np.abs(n2 - q2).max())
        q1, q2 = n1, n2
        iterations += 1
        if diff <= prm.xi1:
            break

    converged = diff <= prm.xi1 and not frozen.any()
    out = VectorField(b.c1.like(q1), b.c2.like(q2))
    return out, InnerReport(iterations, converged, float(diff))


def curvature_prox_newton(
    b: VectorField, det_hess: ScalarField, gamma: float, tau: float, prm: InnerSolverParams
) -> tuple[VectorField, InnerReport]:
    """Damped Newton solve of the same per-pixel problem.

    The residual is F(q) = gamma*q - 3*tau*|d|*q/(1+|q|^2)^(5/2) - gamma*b with
    Jacobian

        DF = gamma*I + 3*tau*|d|/(1+|q|^2)^(7/2) *
             [[4*q1^2 - q2^2 - 1,  5*q1*q2        ],
              [5*q1*q2,            4*q2^2 - q1^2 - 1]]

    and q steps by -rho * DF^-1 F from q = b. Pixels with a (near-)singular
    DF skip the sweep and leave the report unconverged if still singular when
    the iteration stops.
    """
    if not (gamma > 0 and tau > 0):
        raise ValueError(f"gamma and tau must be positive, got {gamma}, {tau}")
    w = 3.0 * tau * np.abs(det_hess.data)
    b1 = b.c1.data
    b2 = b.c2.data
    q1 = b1.copy()
    q2 = b2.copy()
    det_floor = 1e-12 * gamma * gamma

    diff = np.inf
    singular = np.zeros(q1.shape, dtype=bool)
    iterations = 0
    for _ in range(prm.max_inner):
        r2 = q1 * q1 + q2 * q2
        base = 1.0 + r2
        f1 = gamma * (q1 - b1) - w * q1 / base ** 2.5
        f2 = gamma * (q2 - b2) - w * q2 / base ** 2.5
        m = w / base ** 3.5
        j11 = gamma + m * (4.0 * q1 * q1 - q2 * q2 - 1.0)
        j22 = gamma + m * (4.0 * q2 * q2 - q1 * q1 - 1.0)
        j12 = m * 5.0 * q1 * q2
        detj = j11 * j22 - j12 * j12
        singular = np.abs(detj) <= det_floor
        safe = np.where(singular, 1.0, detj)
        d1 = (j22 * f1 - j12 * f2) / safe
        d2 = (j11 * f2 - j12 * f1) / safe
        n1 = np.where(singular, q1, q1 - prm.rho * d1)
        n2 = np.where(singular, q2, q2 - prm.rho * d2)
        diff = max(np.abs(n1 - q1).max(), np.abs(n2 - q2).max())
        q1, q2 = n1, n2
        iterations += 1
        if diff <= prm.xi1:
            break

    converged = diff <= prm.xi1 and not singular.any()
    out = VectorField(b.c1.like(q1), b.c2.like(q2))
    return out, InnerReport(iterations, converged, float(diff))


def _shrink_values(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    # soft threshold with the 0-at-0 convention
    mag = np.abs(x)
    factor = np.where(mag > 0, np.maximum(0.0, 1.0 - t / np.where(mag > 0, mag, 1.0)), 0.0)
    return factor * x


def prox_abs_bilinear(a1, a2, b1, b2, c):
    """Minimizer of 0.5*(w1-b1)^2 + 0.5*(w2-b2)^2 + c*|a1*w1 - a2*w2|.

    Closed form in five cases (broadcasts over array arguments):

      1. a1 = 0:  (b1, shrink(b2, c*|a2|))
      2. a2 = 0:  (shrink(b1, c*|a1|), b2)
      3. a1,a2 != 0 and (a1*b1 - a2*b2) - (a1^2+a2^2)*c > 0:  (b1 - c*a1, b2 + c*a2)
      4. a1,a2 != 0 and (a1*b1 - a2*b2) + (a1^2+a2^2)*c < 0:  (b1 + c*a1, b2 - c*a2)
      5. otherwise the minimizer sits on a1*w1 = a2*w2:
         ((a2^2*b1 + a1*a2*b2) / (a1^2+a2^2), (a1*a2*b1 + a1^2*b2) / (a1^2+a2^2))

    Equality in the case-3/4 tests falls through to case 5. Scalar inputs
    return floats.
    """
    a1, a2, b1, b2, c = np.broadcast_arrays(
        *(np.asarray(x, dtype=np.float64) for x in (a1, a2, b1, b2, c))
    )
    if not np.all(c > 0):
        raise ValueError("c must be positive")
    scalar = a1.ndim == 0
    a1, a2, b1, b2, c = (np.atleast_1d(x) for x in (a1, a2, b1, b2, c))

    case1 = a1 == 0
    case2 = ~case1 & (a2 == 0)
    rest = ~case1 & ~case2
    t = a1 * b1 - a2 * b2
    s = (a1 * a1 + a2 * a2) * c
    case3 = rest & (t - s > 0)
    case4 = rest & (t + s < 0)

    denom = np.where(rest, a1 * a1 + a2 * a2, 1.0)
    v1 = np.where(
        case1,
        b1,
        np.where(
            case2,
            _shrink_values(b1, c * np.abs(a1)),
            np.where(
                case3,
                b1 - c * a1,
                np.where(case4, b1 + c * a1, (a2 * a2 * b1 + a1 * a2 * b2) / denom),
            ),
        ),
    )
    v2 = np.where(
        case1,
        _shrink_values(b2, c * np.abs(a2)),
        np.where(
            case2,
            b2,
            np.where(
                case3,
                b2 + c * a2,
                np.where(case4, b2 - c * a2, (a1 * a2 * b1 + a1 * a1 * b2) / denom),
            ),
        ),
    )
    if scalar:
        return float(v1[0]), float(v2[0])
    return v1, v2


def det_prox(
    target: MatrixField, weight: ScalarField, tau: float, prm: InnerSolverParams
) -> tuple[MatrixField, InnerReport]:
    """Approximate prox of the weighted |det| penalty at a 2x2 matrix field.

    Per pixel, drives M toward a minimizer of

        0.5*|M - B|^2 + tau*weight*|det M|

    by alternating exact closed-form solves of the (m11, m12) block against
    the frozen (m21, m22) block and vice versa, each blended with rate rho2,
    until the largest entrywise change falls to xi2. weight must be strictly
    positive.
    """
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    c = tau * weight.data
    if not np.all(c > 0):
        raise ValueError("tau * weight must be strictly positive everywhere")
    t11 = target.m11.data
    t12 = target.m12.data
    t21 = target.m21.data
    t22 = target.m22.data
    m11 = t11.copy()
    m12 = t12.copy()
    m21 = t21.copy()
    m22 = t22.copy()

    diff = np.inf
    iterations = 0
    for _ in range(prm.max_inner):
        v1, v2 = prox_abs_bilinear(m22, m21, t11, t12, c)
        n11 = m11 + prm.rho2 * (v1 - m11)
        n12 = m12 + prm.rho2 * (v2 - m12)
        v1, v2 = prox_abs_bilinear(n11, n12, t22, t21, c)
        n22 = m22 + prm.rho2 * (v1 - m22)
        n21 = m21 + prm.rho2 * (v2 - m21)
        diff = max(
            np.abs(n11 - m11).max(),
            np.abs(n12 - m12).max(),
            np.abs(n21 - m21).max(),
            np.abs(n22 - m22).max(),
        )
        m11, m12, m21, m22 = n11, n12, n21, n22
        iterations += 1
        if diff <= prm.xi2:
            break

    out = MatrixField(
        target.m11.like(m11),
        target.m12.like(m12),
        target.m21.like(m21),
        target.m22.like(m22),
    )
    return out, InnerReport(iterations, diff <= prm.xi2, float(diff))


def shrink(p: VectorField, kappa: float) -> VectorField:
    """Magnitude soft-threshold: max(0, 1 - kappa/|p|) * p, zero where p = 0.

    Never increases the magnitude and keeps the direction.
    """
    if kappa < 0:
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    mag = p.magnitude()
    factor = np.where(mag > 0, np.maximum(0.0, 1.0 - kappa / np.where(mag > 0, mag, 1.0)), 0.0)
    return VectorField(p.c1.like(factor * p.c1.data), p.c2.like(factor * p.c2.data))
