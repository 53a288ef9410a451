"""Urbanization metrics derived from tone maps.

Bright squares are the quantitative signal: counting the fraction of
blocks at or above a brightness threshold measures how built-up a scene
is, tone histograms expose the texture structure, and a sequence of
images yields a transition profile (rural scenes show one low-tone peak,
urban scenes develop a second bright-tone mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.signal import find_peaks, peak_prominences

from .blocks import (
    DEFAULT_BLOCK_SIZE,
    BlockSpec,
    block_stats_fast,
    normalize_tones,
)
from .errors import ImageTooSmall

DEFAULT_BRIGHT_THRESHOLD = 128
SMOOTHING_WINDOW = 9
PEAK_PROMINENCE_FRACTION = 0.05

PER_IMAGE = "per_image"
SHARED = "shared"
NORMALIZATION_MODES = (PER_IMAGE, SHARED)


class Modality(str, Enum):
    DEGENERATE = "degenerate"
    UNIMODAL = "unimodal"
    BIMODAL = "bimodal"
    MULTIMODAL = "multimodal"


@dataclass(frozen=True)
class ToneHistogram:
    """256-bin tone counts with a smoothed form and its prominent peaks.

    ``peaks`` holds (tone, prominence) pairs for local maxima of the
    smoothed curve whose prominence reaches the detection threshold.
    """

    bins: np.ndarray
    smoothed: np.ndarray
    peaks: tuple


@dataclass(frozen=True)
class UrbanReport:
    """Per-image metrics record.

    ``ximax`` is the normalization ceiling actually used for the tone map
    (the image's own ratio maximum, or the sequence-wide maximum under
    shared normalization).
    """

    image_id: str
    block_size: int
    blocks_total: int
    blocks_bright: int
    urbanization_index: float
    ximax: float
    modality: Modality
    coverage: float


@dataclass(frozen=True)
class ProfileEntry:
    image_id: str
    urbanization_index: float
    modality: Modality
    mean_tone: float


@dataclass(frozen=True)
class TransitionProfile:
    """Ordered per-image measurements over an image sequence."""

    entries: tuple
    normalization_mode: str
    reports: tuple


def urbanization_index(tone_map, threshold=DEFAULT_BRIGHT_THRESHOLD):
    """Count blocks at or above the brightness threshold.

    Returns:
        (blocks_bright, index): the bright-square count and its fraction
        of all blocks.
    """
    if not 0 <= threshold <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {threshold}")
    bright = int(np.count_nonzero(tone_map.tones >= threshold))
    return bright, bright / tone_map.spec.n_blocks


def tone_histogram(tone_map, window=SMOOTHING_WINDOW,
                   prominence_fraction=PEAK_PROMINENCE_FRACTION):
    """Histogram the tone map and detect the prominent modes.

    The smoothed form is a centered moving average whose window shrinks at
    the edges (bins near 0 and 255 average only real neighbours). A local
    maximum counts as a peak when its prominence is at least
    ``prominence_fraction`` of the total block count; maxima sitting on
    the 0 or 255 edge are eligible.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smoothing window must be odd and >= 1, got {window}")
    bins = np.bincount(tone_map.tones.ravel(), minlength=256).astype(np.int64)
    kernel = np.ones(window)
    smoothed = (np.convolve(bins.astype(np.float64), kernel, mode="same")
                / np.convolve(np.ones(256), kernel, mode="same"))
    peaks = _prominent_peaks(smoothed, prominence_fraction * bins.sum())
    return ToneHistogram(bins=bins, smoothed=smoothed, peaks=peaks)


def _prominent_peaks(smoothed, min_prominence):
    # zero padding makes maxima at tone 0 / 255 detectable and gives them
    # an empty baseline to be prominent against
    padded = np.concatenate(([0.0], smoothed, [0.0]))
    idx, _ = find_peaks(padded)
    if idx.size == 0:
        return ()
    prominences = peak_prominences(padded, idx)[0]
    keep = prominences >= min_prominence
    return tuple(
        (int(i) - 1, float(p)) for i, p in zip(idx[keep], prominences[keep])
    )


def classify_modality(hist):
    """Label a histogram by its prominent-peak count.

    All mass sitting in bin 0 is the blank-map signature and is reported
    as DEGENERATE rather than being forced into unimodal. A non-degenerate
    histogram with no prominent peak at all is one diffuse mode and folds
    into UNIMODAL.
    """
    total = int(hist.bins.sum())
    if total > 0 and int(hist.bins[0]) == total:
        return Modality.DEGENERATE
    n_peaks = len(hist.peaks)
    if n_peaks >= 3:
        return Modality.MULTIMODAL
    if n_peaks == 2:
        return Modality.BIMODAL
    return Modality.UNIMODAL


def build_report(image_id, grid, tone_map, threshold=DEFAULT_BRIGHT_THRESHOLD,
                 ximax=None):
    """Assemble the per-image metrics record from computed artifacts."""
    bright, index = urbanization_index(tone_map, threshold)
    modality = classify_modality(tone_histogram(tone_map))
    return UrbanReport(
        image_id=image_id,
        block_size=grid.spec.block_size,
        blocks_total=grid.spec.n_blocks,
        blocks_bright=bright,
        urbanization_index=index,
        ximax=float(grid.ximax if ximax is None else ximax),
        modality=modality,
        coverage=grid.spec.coverage,
    )


def _check_mode(mode):
    if mode not in NORMALIZATION_MODES:
        raise ValueError(
            f"normalization mode must be one of {NORMALIZATION_MODES}, got {mode!r}"
        )


def sequence_stats(images, block_size=DEFAULT_BLOCK_SIZE):
    """Compute the ratio grid for every (image_id, gray) pair, in order.

    A too-small image fails with its id in the message so batch callers
    can point at the offending file.
    """
    grids = []
    for image_id, gray in images:
        gray = np.asarray(gray, dtype=np.float64)
        try:
            spec = BlockSpec.from_image(gray.shape[0], gray.shape[1], block_size)
        except ImageTooSmall as exc:
            raise ImageTooSmall(f"{image_id}: {exc}") from None
        grids.append(block_stats_fast(gray, spec))
    return grids


def sequence_tone_maps(images, block_size=DEFAULT_BLOCK_SIZE, mode=PER_IMAGE):
    """Tone maps for an ordered image sequence.

    Shared mode runs in two phases: every ratio grid is computed first,
    then one common ceiling (the sequence-wide ratio maximum) normalizes
    all maps, making tones comparable across epochs. Per-image mode
    normalizes each map by its own maximum.

    Returns a list of (BlockStatGrid, ToneMap, ceiling) triples, where
    ``ceiling`` is the normalization maximum actually applied.
    """
    _check_mode(mode)
    images = list(images)
    if not images:
        raise ValueError("image sequence is empty")
    grids = sequence_stats(images, block_size)
    if mode == SHARED:
        ceilings = [max(g.ximax for g in grids)] * len(grids)
    else:
        ceilings = [g.ximax for g in grids]
    return [
        (grid, normalize_tones(grid, ximax=ceiling if ceiling > 0.0 else None), ceiling)
        for grid, ceiling in zip(grids, ceilings)
    ]


def transition_profile(images, block_size=DEFAULT_BLOCK_SIZE,
                       threshold=DEFAULT_BRIGHT_THRESHOLD, mode=PER_IMAGE,
                       computed=None):
    """Measure the texture transition across an ordered image sequence.

    Each entry records the urbanization index, histogram modality and mean
    tone of one image, in input order; a rural-to-urban sweep shows the
    index rising and the histogram growing a second bright mode.

    ``computed`` lets callers that already hold the output of
    :func:`sequence_tone_maps` for the same images and mode skip the
    recomputation.
    """
    images = list(images)
    if computed is None:
        computed = sequence_tone_maps(images, block_size, mode)
    entries = []
    reports = []
    for (image_id, _), (grid, tone_map, ceiling) in zip(images, computed):
        report = build_report(image_id, grid, tone_map, threshold, ximax=ceiling)
        reports.append(report)
        entries.append(ProfileEntry(
            image_id=image_id,
            urbanization_index=report.urbanization_index,
            modality=report.modality,
            mean_tone=float(tone_map.tones.mean()),
        ))
    return TransitionProfile(
        entries=tuple(entries),
        normalization_mode=mode,
        reports=tuple(reports),
    )
