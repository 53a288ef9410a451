"""Square maps from block statistics, step by step.

Builds a synthetic scene with an "urban" quarter (rapidly oscillating
brightness) inside rural surroundings (flat fields), then walks the whole
pipeline: block mean / deviation / ratio, tone normalization, and the
rendered square map. Outputs land in demos/output/.
"""

from pathlib import Path

import numpy as np

from urbtex import (
    BlockSpec,
    Checkerboard,
    Composite,
    SaltPepper,
    Uniform,
    block_stats_fast,
    compute_map,
    generate,
    normalize_tones,
    render_map,
    save_map,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# A 256x256 scene: fields at two brightness levels, a noisy town quarter,
# and a tight checkerboard strip standing in for a dense street grid.
scene = generate(Composite(256, 256, regions=(
    ((0, 0, 256, 96), Uniform(96, 256, level=70.0)),          # dark fields
    ((0, 96, 160, 160), SaltPepper(160, 160, density=0.5,
                                   seed=21, low=120.0, high=230.0)),  # town
    ((160, 96, 96, 160), Uniform(160, 96, level=140.0)),      # bright fields
)))
save_map(scene, OUT / "scene.png")
print(f"scene written to {OUT / 'scene.png'}")

# Step 1: per-block statistics at P=16. Every block gets a mean M, a
# population standard deviation S, and the ratio xi = S / M.
P = 16
spec = BlockSpec.from_image(*scene.shape, block_size=P)
grid = block_stats_fast(scene, spec)
print(f"\nblocks: {spec.rows} x {spec.cols} (P={P})")
print(f"mean brightness range: {grid.mean.min():.1f} .. {grid.mean.max():.1f}")
print(f"deviation range:       {grid.std.min():.1f} .. {grid.std.max():.1f}")
print(f"largest ratio:         {grid.ximax:.4f}")

# Step 2: tones. The largest ratio maps to 255, everything else scales
# linearly; uniform farmland blocks have zero deviation and stay black.
tone_map = normalize_tones(grid)
unique = np.unique(tone_map.tones)
print(f"distinct tones: {len(unique)} (min {unique[0]}, max {unique[-1]})")

# Step 3: the square map, rendered back at pixel scale.
save_map(render_map(tone_map), OUT / "scene.map.png")
print(f"square map written to {OUT / 'scene.map.png'}")

# compute_map bundles the three steps:
grid2, tone_map2 = compute_map(scene, P)
assert np.array_equal(tone_map2.tones, tone_map.tones)

# The town blocks light up, the fields go black -- including the *bright*
# fields: tone tracks local oscillation, not local brightness.
town = tone_map.tones[:160 // P, 96 // P:]
fields = tone_map.tones[:, :96 // P]
print(f"\nmean tone in the town quarter: {town.mean():6.1f}")
print(f"mean tone over the fields:     {fields.mean():6.1f}")

# A checkerboard is the extreme case: every block oscillates identically,
# so the whole map saturates at 255.
_, checker_map = compute_map(generate(Checkerboard(64, 64, cell=1)), 8)
print(f"\n1-px checkerboard: all tones = {np.unique(checker_map.tones)}")
