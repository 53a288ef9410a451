"""Block-statistics texture maps and urbanization metrics for rasters.

Pipeline in one line: grayscale -> P x P block mean / deviation / ratio ->
tone map normalized to 0..255 -> bright-square counting, histograms and
transition profiles.
"""

from .blocks import (
    DEFAULT_BLOCK_SIZE,
    BlockSpec,
    BlockStatGrid,
    ToneMap,
    block_stats_fast,
    block_stats_naive,
    compute_map,
    normalize_tones,
    render_map,
    to_grayscale,
)
from .errors import (
    BitDepthUnsupported,
    CorruptFile,
    EmptyReport,
    ImageTooSmall,
    InvalidSpec,
    UnsupportedFormat,
    UrbtexError,
)
from .io import (
    ReportRow,
    export_histogram,
    load_gray,
    load_raster,
    save_map,
    write_report,
)
from .metrics import (
    DEFAULT_BRIGHT_THRESHOLD,
    PER_IMAGE,
    SHARED,
    Modality,
    ProfileEntry,
    ToneHistogram,
    TransitionProfile,
    UrbanReport,
    build_report,
    classify_modality,
    sequence_tone_maps,
    tone_histogram,
    transition_profile,
    urbanization_index,
)
from .synth import Checkerboard, Composite, SaltPepper, SynthSpec, Uniform, generate

__version__ = "0.1.0"
