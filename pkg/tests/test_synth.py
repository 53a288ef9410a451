"""Synthetic raster generators: construction rules, determinism, and the
golden block statistics of the seeded noise fixture."""

import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from urbtex.blocks import BlockSpec, block_stats_naive, compute_map
from urbtex.errors import InvalidSpec
from urbtex.synth import Checkerboard, Composite, SaltPepper, Uniform, generate

DATA_DIR = Path(__file__).parent / "data"

# regression digests: regenerating these fixtures must stay byte-identical
FIXTURE_DIGESTS = {
    "uniform": (Uniform(16, 16, level=80),
                "3014f0f592badf2c8816944752ad757ab7c59dac95ab3d0cf2fbbfe7f110612c"),
    "checkerboard": (Checkerboard(16, 16, cell=1),
                     "9a58126241a53807862c3993a95d8993597a59210e110febfd81831f1de127e3"),
    "salt_pepper": (SaltPepper(64, 64, density=0.5, seed=42),
                    "edf60b1cd2dfab79084b9bde2041b63cd0d8d2c7c02c69da8dcd82df1c33774d"),
}


def sha(arr):
    return hashlib.sha256(arr.tobytes()).hexdigest()


class TestUniform:
    def test_constant_samples(self):
        arr = generate(Uniform(16, 16, level=80))
        assert arr.shape == (16, 16)
        assert np.all(arr == 80.0)

    def test_degenerate_tone_map(self):
        _, tone_map = compute_map(generate(Uniform(32, 24, level=200)), 8)
        assert tone_map.degenerate

    def test_bad_dims(self):
        with pytest.raises(InvalidSpec):
            generate(Uniform(0, 16))

    def test_bad_level(self):
        with pytest.raises(InvalidSpec):
            generate(Uniform(8, 8, level=300))


class TestCheckerboard:
    def test_alternation(self):
        arr = generate(Checkerboard(16, 16, cell=1))
        assert arr[0, 0] == 0.0 and arr[0, 1] == 255.0 and arr[1, 0] == 255.0
        assert np.all(arr[::2, ::2] == 0.0)
        assert np.all(arr[1::2, ::2] == 255.0)

    def test_any_2x2_block_stats(self):
        arr = generate(Checkerboard(16, 16, cell=1))
        grid = block_stats_naive(arr, BlockSpec.from_image(16, 16, 2))
        assert np.all(grid.mean == 127.5)
        assert np.all(grid.std == 127.5)
        assert np.all(grid.xi == 1.0)

    @pytest.mark.parametrize("cell,block", [(1, 2), (1, 8), (2, 4), (2, 8), (4, 8)])
    def test_whole_periods_saturate_every_tone(self, cell, block):
        # when a block spans whole checker periods every block has the same
        # composition, so all tones normalize to 255
        arr = generate(Checkerboard(32, 32, cell=cell))
        _, tone_map = compute_map(arr, block)
        assert not tone_map.degenerate
        assert np.all(tone_map.tones == 255)

    def test_bad_cell(self):
        with pytest.raises(InvalidSpec):
            generate(Checkerboard(8, 8, cell=0))


class TestSaltPepper:
    def test_seed_reproducibility(self):
        a = generate(SaltPepper(32, 32, density=0.4, seed=9))
        b = generate(SaltPepper(32, 32, density=0.4, seed=9))
        assert np.array_equal(a, b)

    def test_seed_sensitivity(self):
        a = generate(SaltPepper(32, 32, density=0.4, seed=9))
        b = generate(SaltPepper(32, 32, density=0.4, seed=10))
        assert not np.array_equal(a, b)

    def test_density_extremes(self):
        assert np.all(generate(SaltPepper(16, 16, density=0.0, seed=1)) == 0.0)
        assert np.all(generate(SaltPepper(16, 16, density=1.0, seed=1)) == 255.0)

    def test_density_plausible(self):
        arr = generate(SaltPepper(64, 64, density=0.5, seed=42))
        assert 0.4 < np.mean(arr == 255.0) < 0.6

    def test_bad_density(self):
        with pytest.raises(InvalidSpec):
            generate(SaltPepper(8, 8, density=1.5))


class TestDigestRegression:
    @pytest.mark.parametrize("name", sorted(FIXTURE_DIGESTS))
    def test_fixture_bytes_stable(self, name):
        spec, expected = FIXTURE_DIGESTS[name]
        assert sha(generate(spec)) == expected


class TestComposite:
    def test_tiled_regions(self):
        spec = Composite(16, 8, regions=(
            ((0, 0, 8, 8), Uniform(8, 8, level=10)),
            ((0, 8, 8, 8), Uniform(8, 8, level=20)),
        ))
        arr = generate(spec)
        assert np.all(arr[:, :8] == 10.0) and np.all(arr[:, 8:] == 20.0)

    def test_nested_composite(self):
        inner = Composite(8, 8, regions=(
            ((0, 0, 4, 8), Uniform(8, 4, level=1)),
            ((4, 0, 4, 8), Uniform(8, 4, level=2)),
        ))
        spec = Composite(8, 16, regions=(
            ((0, 0, 8, 8), inner),
            ((8, 0, 8, 8), Uniform(8, 8, level=3)),
        ))
        arr = generate(spec)
        assert arr.shape == (16, 8)
        assert np.all(arr[0:4] == 1.0) and np.all(arr[4:8] == 2.0)
        assert np.all(arr[8:] == 3.0)

    def test_overlap_rejected(self):
        spec = Composite(8, 8, regions=(
            ((0, 0, 8, 8), Uniform(8, 8, level=1)),
            ((0, 0, 4, 4), Uniform(4, 4, level=2)),
        ))
        with pytest.raises(InvalidSpec, match="overlap"):
            generate(spec)

    def test_gap_rejected(self):
        spec = Composite(8, 8, regions=(((0, 0, 8, 4), Uniform(4, 8, level=1)),))
        with pytest.raises(InvalidSpec, match="unfilled"):
            generate(spec)

    def test_out_of_bounds_rejected(self):
        spec = Composite(8, 8, regions=(((0, 4, 8, 8), Uniform(8, 8, level=1)),))
        with pytest.raises(InvalidSpec, match="beyond"):
            generate(spec)

    def test_size_mismatch_rejected(self):
        spec = Composite(8, 8, regions=(((0, 0, 8, 8), Uniform(4, 4, level=1)),))
        with pytest.raises(InvalidSpec, match="renders"):
            generate(spec)


class TestGoldenStats:
    def test_salt_pepper_matches_frozen_reference(self):
        golden = json.loads((DATA_DIR / "salt_pepper_64x64_d50_s42_P8.json").read_text())
        raster = generate(SaltPepper(64, 64, density=0.5, seed=42))
        assert sha(raster) == golden["raster_sha256"]
        grid = block_stats_naive(
            raster, BlockSpec.from_image(64, 64, golden["block_size"]))
        assert grid.ximax == golden["ximax"]
        np.testing.assert_array_equal(grid.mean, np.array(golden["mean"]))
        np.testing.assert_array_equal(grid.std, np.array(golden["std"]))
        np.testing.assert_array_equal(grid.xi, np.array(golden["xi"]))
