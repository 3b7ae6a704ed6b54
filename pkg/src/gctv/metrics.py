"""Gaussian noise synthesis and image/surface quality metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.ndimage import correlate1d

from .fields import ScalarField

__all__ = [
    "NoiseSpec",
    "SsimParams",
    "LpErrors",
    "add_gaussian_noise",
    "psnr",
    "ssim",
    "lp_errors",
]


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean Gaussian noise of variance sigma (standard deviation
    sqrt(sigma)), keyed by a 64-bit seed."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")


def add_gaussian_noise(f: ScalarField, spec: NoiseSpec) -> ScalarField:
    """f plus i.i.d. zero-mean Gaussian noise of variance spec.sigma.

    The noise field is fully determined by (seed, shape): a Philox
    counter-based generator supplies two uniform arrays that feed a
    Box-Muller transform, so identical seeds reproduce identical fields
    bit-for-bit across platforms. Values are not clipped.
    """
    if spec.sigma == 0:
        return f.like(f.data.copy())
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    u1 = rng.random(f.shape)
    u2 = rng.random(f.shape)
    # 1 - u1 lies in (0, 1], keeping the log finite
    normal = np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)
    return f.like(f.data + math.sqrt(spec.sigma) * normal)


def psnr(u: ScalarField, ref: ScalarField, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; math.inf when the fields agree."""
    if u.shape != ref.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {ref.shape}")
    if not peak > 0:
        raise ValueError(f"peak must be positive, got {peak}")
    mse = float(np.mean((u.data - ref.data) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


@dataclass(frozen=True)
class SsimParams:
    """Gaussian-window SSIM constants (the usual 11x11 / 1.5 / 0.01 / 0.03
    defaults at unit dynamic range)."""

    window: int = 11
    window_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    peak: float = 1.0

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("k1 and k2 must be positive")
        if not (self.window_sigma > 0 and self.peak > 0):
            raise ValueError("window_sigma and peak must be positive")


def _gaussian_window(n: int, sigma: float) -> np.ndarray:
    x = np.arange(n) - (n - 1) / 2.0
    w = np.exp(-0.5 * (x / sigma) ** 2)
    return w / w.sum()


def ssim(u: ScalarField, ref: ScalarField, prm: SsimParams | None = None) -> float:
    """Mean structural similarity with a periodic Gaussian window.

    The window wraps around the field edges, consistent with the periodic
    convention used everywhere else in this package; scores are therefore
    only loosely comparable with implementations that crop borders.
    """
    if prm is None:
        prm = SsimParams()
    if u.shape != ref.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {ref.shape}")
    if min(u.shape) < prm.window:
        raise ValueError(f"field {u.shape} smaller than the {prm.window}-pixel window")
    w = _gaussian_window(prm.window, prm.window_sigma)

    def blur(a: np.ndarray) -> np.ndarray:
        return correlate1d(correlate1d(a, w, axis=0, mode="wrap"), w, axis=1, mode="wrap")

    x = u.data
    y = ref.data
    mu_x = blur(x)
    mu_y = blur(y)
    var_x = blur(x * x) - mu_x * mu_x
    var_y = blur(y * y) - mu_y * mu_y
    cov = blur(x * y) - mu_x * mu_y
    c1 = (prm.k1 * prm.peak) ** 2
    c2 = (prm.k2 * prm.peak) ** 2
    score = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / (
        (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    )
    return float(score.mean())


class LpErrors(NamedTuple):
    l1: float
    l2: float
    linf: float


def lp_errors(u: ScalarField, ref: ScalarField) -> LpErrors:
    """Unnormalized error norms: sum |d|, sqrt(sum d^2), max |d|."""
    if u.shape != ref.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {ref.shape}")
    d = np.abs(u.data - ref.data)
    return LpErrors(float(d.sum()), float(np.sqrt((d * d).sum())), float(d.max()))
