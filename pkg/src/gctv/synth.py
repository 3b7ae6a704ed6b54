"""Deterministic analytic test fields: developable shapes, plateaus, thin
ridges, and piecewise-constant blocks.

All generators are pure arithmetic (no RNG), so outputs are identical across
platforms. Coordinates are physical (index times h) and shapes are centered
on the grid point (M//2, N//2) so the stated peak values are attained exactly.
"""

from __future__ import annotations

import numpy as np

from .fields import ScalarField

__all__ = ["cone", "pyramid", "plateau", "stripes", "steps", "synth", "SYNTH_KINDS"]


def _check_size(M: int, N: int):
    if M < 8 or N < 8:
        raise ValueError(f"grid must be at least 8x8, got {M}x{N}")


def _center_dists(M: int, N: int, h: float):
    i = np.arange(M)[:, None] - M // 2
    j = np.arange(N)[None, :] - N // 2
    return np.abs(i) * h, np.abs(j) * h


def cone(M: int, N: int, h: float = 1.0, radius: float | None = None,
         slope: float | None = None, height: float = 1.0) -> ScalarField:
    """Circular cone: slope * max(0, radius - r). Default slope gives apex
    value = height; the apex sits on a grid point, so the field's maximum is
    exactly radius * slope."""
    _check_size(M, N)
    if radius is None:
        radius = 0.35 * min(M, N) * h
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if slope is None:
        slope = height / radius
    di, dj = _center_dists(M, N, h)
    r = np.hypot(di, dj)
    return ScalarField(slope * np.maximum(0.0, radius - r), h)


def pyramid(M: int, N: int, h: float = 1.0, radius: float | None = None,
            slope: float | None = None, height: float = 1.0) -> ScalarField:
    """Square pyramid (max-norm cone): slope * max(0, radius - max(|x|, |y|))."""
    _check_size(M, N)
    if radius is None:
        radius = 0.35 * min(M, N) * h
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if slope is None:
        slope = height / radius
    di, dj = _center_dists(M, N, h)
    r = np.maximum(di, dj)
    return ScalarField(slope * np.maximum(0.0, radius - r), h)


def plateau(M: int, N: int, h: float = 1.0, radius: float | None = None,
            height: float = 1.0, edge: float | None = None) -> ScalarField:
    """Flat disc of the given height with a smoothstep skirt of width edge."""
    _check_size(M, N)
    if radius is None:
        radius = 0.3 * min(M, N) * h
    if edge is None:
        edge = 3.0 * h
    if not (radius > 0 and edge > 0):
        raise ValueError(f"radius and edge must be positive, got {radius}, {edge}")
    di, dj = _center_dists(M, N, h)
    r = np.hypot(di, dj)
    t = np.clip((radius - r) / edge, 0.0, 1.0)
    return ScalarField(height * t * t * (3.0 - 2.0 * t), h)


def stripes(M: int, N: int, h: float = 1.0, width: int = 2, gap: int = 3,
            height: float = 1.0) -> ScalarField:
    """Thin parallel ridges along axis 1: columns j with j % (width+gap) < width
    carry the given height, the rest are zero."""
    _check_size(M, N)
    if width < 1 or gap < 1:
        raise ValueError(f"width and gap must be >= 1, got {width}, {gap}")
    j = np.arange(N)[None, :]
    mask = (j % (width + gap)) < width
    return ScalarField(np.broadcast_to(mask, (M, N)) * height, h)


def steps(M: int, N: int, h: float = 1.0, levels: int = 4, height: float = 1.0) -> ScalarField:
    """Piecewise-constant bands along axis 1, rising from 0 to height in
    `levels` equal plateaus."""
    _check_size(M, N)
    if levels < 2:
        raise ValueError(f"levels must be >= 2, got {levels}")
    k = (np.arange(M) * levels) // M
    vals = height * k / (levels - 1)
    return ScalarField(np.repeat(vals[:, None], N, axis=1), h)


SYNTH_KINDS = {
    "cone": cone,
    "pyramid": pyramid,
    "plateau": plateau,
    "stripes": stripes,
    "steps": steps,
}


def synth(kind: str, M: int, N: int, h: float = 1.0, **geometry) -> ScalarField:
    """Dispatch to a generator by kind name (see SYNTH_KINDS)."""
    try:
        gen = SYNTH_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown kind {kind!r}; choose from {sorted(SYNTH_KINDS)}") from None
    return gen(M, N, h=h, **geometry)
