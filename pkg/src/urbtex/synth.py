"""Deterministic synthetic rasters with known block statistics.

Real aerial imagery is not redistributable, so tests and demos run on
generated scenes instead: uniform fields, checkerboards, seeded two-level
noise, and rectangular composites of those. Every generator is a pure
function of its spec, and the noise generator draws from a fixed named
stream so fixtures are byte-stable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec


@dataclass(frozen=True)
class Uniform:
    """Constant raster at one luminance level."""

    width: int
    height: int
    level: float = 128.0


@dataclass(frozen=True)
class Checkerboard:
    """Alternating square cells of two levels; cell (0, 0) is ``low``."""

    width: int
    height: int
    cell: int = 1
    low: float = 0.0
    high: float = 255.0


@dataclass(frozen=True)
class SaltPepper:
    """Two-level impulse noise: each pixel is ``high`` with probability
    ``density``, otherwise ``low``.

    Randomness comes from the raw 64-bit stream of a PCG64 generator
    (O'Neill's permuted congruential generator, the published reference
    algorithm) seeded with ``seed``; uniform doubles are the top 53 bits
    scaled by 2**-53. No platform default RNG is involved, so the same
    spec always produces the same bytes.
    """

    width: int
    height: int
    density: float = 0.5
    seed: int = 0
    low: float = 0.0
    high: float = 255.0


@dataclass(frozen=True)
class Composite:
    """Rectangular regions, each filled by a nested spec.

    ``regions`` holds ((top, left, height, width), spec) entries that must
    tile the full raster exactly: no overlaps, no gaps, and each nested
    spec sized to its rectangle.
    """

    width: int
    height: int
    regions: tuple = ()


SynthSpec = Uniform | Checkerboard | SaltPepper | Composite


def _check_dims(spec):
    if spec.width < 1 or spec.height < 1:
        raise InvalidSpec(
            f"raster dimensions must be >= 1, got {spec.width}x{spec.height}"
        )


def _check_level(name, value):
    if not 0.0 <= value <= 255.0:
        raise InvalidSpec(f"{name} must be in [0, 255], got {value}")


def generate(spec):
    """Render a spec into a grayscale float64 raster of shape (H, W)."""
    if isinstance(spec, Uniform):
        return _uniform(spec)
    if isinstance(spec, Checkerboard):
        return _checkerboard(spec)
    if isinstance(spec, SaltPepper):
        return _salt_pepper(spec)
    if isinstance(spec, Composite):
        return _composite(spec)
    raise InvalidSpec(f"unknown spec type {type(spec).__name__}")


def _uniform(spec):
    _check_dims(spec)
    _check_level("level", spec.level)
    return np.full((spec.height, spec.width), float(spec.level))


def _checkerboard(spec):
    _check_dims(spec)
    if spec.cell < 1:
        raise InvalidSpec(f"cell size must be >= 1, got {spec.cell}")
    _check_level("low", spec.low)
    _check_level("high", spec.high)
    r = np.arange(spec.height) // spec.cell
    c = np.arange(spec.width) // spec.cell
    odd = (r[:, None] + c[None, :]) % 2 == 1
    return np.where(odd, float(spec.high), float(spec.low))


def _salt_pepper(spec):
    _check_dims(spec)
    if not 0.0 <= spec.density <= 1.0:
        raise InvalidSpec(f"density must be in [0, 1], got {spec.density}")
    _check_level("low", spec.low)
    _check_level("high", spec.high)
    raw = np.random.PCG64(spec.seed).random_raw(spec.height * spec.width)
    u = (raw >> np.uint64(11)) * 2.0 ** -53
    high = (u < spec.density).reshape(spec.height, spec.width)
    return np.where(high, float(spec.high), float(spec.low))


def _composite(spec):
    _check_dims(spec)
    canvas = np.full((spec.height, spec.width), np.nan)
    for rect, sub in spec.regions:
        top, left, height, width = rect
        if top < 0 or left < 0 or height < 1 or width < 1:
            raise InvalidSpec(f"bad region rectangle {rect}")
        if top + height > spec.height or left + width > spec.width:
            raise InvalidSpec(f"region {rect} extends beyond the raster")
        if (sub.height, sub.width) != (height, width):
            raise InvalidSpec(
                f"region {rect} is {width}x{height} but its spec renders "
                f"{sub.width}x{sub.height}"
            )
        target = canvas[top:top + height, left:left + width]
        if not np.isnan(target).all():
            raise InvalidSpec(f"region {rect} overlaps an earlier region")
        canvas[top:top + height, left:left + width] = generate(sub)
    if np.isnan(canvas).any():
        raise InvalidSpec("regions leave part of the raster unfilled")
    return canvas
