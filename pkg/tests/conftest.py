"""Shared synthetic scenes used across the test modules.

All scenes are fully deterministic (seeded noise streams) and their
expected metrics were derived by hand counting / the brute-force block
statistics before being asserted anywhere.
"""

import numpy as np
import pytest

from urbtex.synth import Checkerboard, Composite, SaltPepper, Uniform, generate

# low-contrast impulse noise keeps the ratio nearly equal across blocks, so
# the bright tones of an "urban" region cluster tightly near 255 instead of
# smearing over the histogram
URBAN_NOISE = dict(density=0.5, low=230.0, high=255.0)
RURAL_LEVEL = 90.0


def half_urban_image(size=256, seed=42):
    """Left half uniform farmland, right half dense urban-like noise."""
    half = size // 2
    return generate(Composite(size, size, regions=(
        ((0, 0, size, half), Uniform(half, size, level=RURAL_LEVEL)),
        ((0, half, size, half), SaltPepper(half, size, seed=seed, **URBAN_NOISE)),
    )))


def banded_image(urban_cols, total_cols=20, block=16, rows=8, seed=0):
    """Composite with the first ``urban_cols`` of ``total_cols`` block
    columns urban-textured and the rest uniform; the bright-block fraction
    is exactly urban_cols / total_cols."""
    width = total_cols * block
    height = rows * block
    regions = []
    if urban_cols:
        regions.append((
            (0, 0, height, urban_cols * block),
            SaltPepper(urban_cols * block, height, seed=seed, **URBAN_NOISE),
        ))
    if urban_cols < total_cols:
        rural_w = (total_cols - urban_cols) * block
        regions.append((
            (0, urban_cols * block, height, rural_w),
            Uniform(rural_w, height, level=RURAL_LEVEL),
        ))
    return generate(Composite(width, height, regions=tuple(regions)))


def transition_triple(block=16):
    """Rural / mixed / urban scenes with bright-block fractions exactly
    0.05, 0.45 and 0.85 (1, 9 and 17 of 20 block columns)."""
    return [
        ("a_rural", banded_image(1, block=block, seed=101)),
        ("b_mixed", banded_image(9, block=block, seed=102)),
        ("c_urban", banded_image(17, block=block, seed=103)),
    ]


def low_noise_image(size=256, seed=7):
    """Gentle texture everywhere: one diffuse bright mode, no second peak."""
    return generate(SaltPepper(size, size, density=0.5, seed=seed,
                               low=120.0, high=136.0))


def anchored_bump_image(size=256, seed=11, block=16):
    """Mild noise everywhere plus a single maximal-contrast block, so the
    bulk lands in a narrow bump around tone 40."""
    img = generate(SaltPepper(size, size, density=0.5, seed=seed,
                              low=150.0, high=205.0))
    img[:block, :block] = generate(Checkerboard(block, block, cell=1))
    return img


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
