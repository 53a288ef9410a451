"""Raster file I/O and report serialization.

Readable rasters: PNG (8-bit grayscale / RGB / RGBA, alpha dropped with a
warning), PPM (P3 plain / P6 binary) and PGM (P2 plain / P5 binary).
16-bit inputs are rejected explicitly instead of being truncated.
Writers cover rendered maps (PGM / PNG, integer-exact round trip),
metrics reports (CSV / JSON) and tone histograms (CSV).
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    BitDepthUnsupported,
    CorruptFile,
    EmptyReport,
    UnsupportedFormat,
)

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_PNM_MAGICS = (b"P2", b"P3", b"P5", b"P6")
_WHITESPACE = b" \t\n\r\x0b\x0c"

RASTER_FORMATS = ("png", "pgm")
REPORT_FORMATS = ("csv", "json")

# fixed column order of the consolidated report
REPORT_COLUMNS = (
    "image_id", "source_path", "P", "threshold", "normalization_mode",
    "blocks_total", "blocks_bright", "urbanization_index", "ximax",
    "modality", "coverage", "timestamp",
)


@dataclass(frozen=True)
class ReportRow:
    """One report line: a flattened UrbanReport plus run context."""

    image_id: str
    source_path: str
    block_size: int
    threshold: int
    normalization_mode: str
    blocks_total: int
    blocks_bright: int
    urbanization_index: float
    ximax: float
    modality: str
    coverage: float
    timestamp: str

    @classmethod
    def from_report(cls, report, source_path, threshold, normalization_mode,
                    timestamp=""):
        return cls(
            image_id=report.image_id,
            source_path=str(source_path),
            block_size=report.block_size,
            threshold=int(threshold),
            normalization_mode=normalization_mode,
            blocks_total=report.blocks_total,
            blocks_bright=report.blocks_bright,
            urbanization_index=float(report.urbanization_index),
            ximax=float(report.ximax),
            modality=report.modality.value,
            coverage=float(report.coverage),
            timestamp=timestamp,
        )

    def as_record(self):
        """Mapping keyed by the REPORT_COLUMNS names, in order."""
        return {
            "image_id": self.image_id,
            "source_path": self.source_path,
            "P": self.block_size,
            "threshold": self.threshold,
            "normalization_mode": self.normalization_mode,
            "blocks_total": self.blocks_total,
            "blocks_bright": self.blocks_bright,
            "urbanization_index": self.urbanization_index,
            "ximax": self.ximax,
            "modality": self.modality,
            "coverage": self.coverage,
            "timestamp": self.timestamp,
        }


def load_raster(path):
    """Decode an image file into an (H, W, 3) uint8 array.

    Grayscale sources load with R=G=B. The format is sniffed from the
    magic bytes, not the file name.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
    if head.startswith(_PNG_MAGIC):
        return _load_png(path)
    if head[:2] in _PNM_MAGICS:
        return _load_pnm(path)
    raise UnsupportedFormat(
        f"{path}: not a PNG, PPM (P3/P6) or PGM (P2/P5) file"
    )


def load_gray(path):
    """Decode a file and average its channels into a float64 raster."""
    rgb = load_raster(path)
    return rgb.astype(np.float64).sum(axis=2) / 3.0


def _load_png(path):
    try:
        with Image.open(path) as im:
            mode = im.mode
            if mode in ("I", "I;16", "I;16B", "I;16L", "I;16N", "F"):
                raise BitDepthUnsupported(
                    f"{path}: PNG sample depth beyond 8 bits is not supported"
                )
            if mode in ("RGBA", "LA", "PA"):
                warnings.warn(f"{path}: alpha channel dropped", stacklevel=3)
            if mode != "RGB":
                im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        # the PNG signature already matched, so an undecodable stream is
        # damage, not a foreign format
        raise CorruptFile(f"{path}: {exc}") from exc
    return arr


class _PnmScanner:
    """Tokenizer for PNM headers: whitespace-separated tokens with
    '#'-to-end-of-line comments, tracking byte offsets for errors."""

    def __init__(self, data, path):
        self.data = data
        self.pos = 0
        self.path = path

    def skip_separators(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            b = data[self.pos:self.pos + 1]
            if b == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            elif b in _WHITESPACE:
                self.pos += 1
            else:
                return

    def next_int(self, what):
        self.skip_separators()
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos:self.pos + 1] not in _WHITESPACE:
            if data[self.pos:self.pos + 1] == b"#":
                break
            self.pos += 1
        token = data[start:self.pos]
        if not token:
            raise CorruptFile(
                f"{self.path}: header ended while reading {what} "
                f"(byte {start})", offset=start)
        try:
            return int(token)
        except ValueError:
            raise CorruptFile(
                f"{self.path}: bad {what} token {token!r} at byte {start}",
                offset=start) from None


def _load_pnm(path):
    data = path.read_bytes()
    magic = data[:2]
    scanner = _PnmScanner(data, path)
    scanner.pos = 2
    width = scanner.next_int("width")
    height = scanner.next_int("height")
    maxval = scanner.next_int("maxval")
    if width < 1 or height < 1:
        raise CorruptFile(f"{path}: bad dimensions {width}x{height}")
    if maxval > 255:
        raise BitDepthUnsupported(
            f"{path}: maxval {maxval} means more than 8 bits per channel"
        )
    if maxval < 1:
        raise CorruptFile(f"{path}: bad maxval {maxval}")

    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # single whitespace byte separates maxval from the payload
        if scanner.pos >= len(data) or data[scanner.pos:scanner.pos + 1] not in _WHITESPACE:
            raise CorruptFile(f"{path}: missing separator after maxval",
                              offset=scanner.pos)
        start = scanner.pos + 1
        payload = data[start:start + count]
        if len(payload) < count:
            raise CorruptFile(
                f"{path}: payload truncated at byte {len(data)} "
                f"({len(payload)} of {count} sample bytes)",
                offset=len(data))
        samples = np.frombuffer(payload, dtype=np.uint8).astype(np.int64)
        offsets = start + np.arange(count)
    else:
        samples = np.empty(count, dtype=np.int64)
        offsets = np.empty(count, dtype=np.int64)
        for i in range(count):
            scanner.skip_separators()
            offsets[i] = scanner.pos
            samples[i] = scanner.next_int(f"sample {i}")

    over = np.nonzero(samples > maxval)[0]
    if over.size:
        i = int(over[0])
        raise CorruptFile(
            f"{path}: sample value {samples[i]} exceeds maxval {maxval}",
            offset=int(offsets[i]))
    if np.any(samples < 0):
        i = int(np.nonzero(samples < 0)[0][0])
        raise CorruptFile(f"{path}: negative sample value",
                          offset=int(offsets[i]))

    arr = samples.astype(np.uint8)
    if channels == 3:
        return arr.reshape(height, width, 3)
    gray = arr.reshape(height, width)
    return np.stack([gray, gray, gray], axis=-1)


def _quantize(raster):
    arr = np.asarray(raster, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d raster, got shape {arr.shape}")
    # half-away-from-zero, same rule as tone quantization; integer-valued
    # input passes through unchanged
    return np.clip(np.floor(arr + 0.5), 0.0, 255.0).astype(np.uint8)


def save_map(raster, path, fmt=None):
    """Write a rendered map as 8-bit grayscale PGM (P5) or PNG.

    Integer-valued rasters round-trip exactly through :func:`load_raster`.
    When ``fmt`` is omitted it is taken from the file suffix.
    """
    path = Path(path)
    if fmt is None:
        suffix = path.suffix.lower().lstrip(".")
        fmt = {"png": "png", "pgm": "pgm", "pnm": "pgm"}.get(suffix)
        if fmt is None:
            raise ValueError(f"cannot infer raster format from {path.name!r}")
    samples = _quantize(raster)
    height, width = samples.shape
    if fmt == "pgm":
        header = f"P5\n{width} {height}\n255\n".encode("ascii")
        path.write_bytes(header + samples.tobytes())
    elif fmt == "png":
        Image.fromarray(samples, mode="L").save(path, format="PNG")
    else:
        raise ValueError(f"unknown raster format {fmt!r}")


def write_report(rows, path, fmt="csv"):
    """Serialize report rows as CSV (RFC 4180, fixed column order) or as a
    JSON array of objects with the same field names.

    Numbers are written with full round-trip precision.
    """
    rows = list(rows)
    if not rows:
        raise EmptyReport("refusing to write a report with no rows")
    records = [row.as_record() for row in rows]
    path = Path(path)
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS)
            writer.writeheader()
            writer.writerows(records)
    elif fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(records, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def export_histogram(hist, path):
    """Write a histogram as CSV of (tone, count, smoothed) triples, with a
    trailing comment line listing the detected peaks."""
    lines = ["tone,count,smoothed"]
    for tone in range(256):
        lines.append(
            f"{tone},{int(hist.bins[tone])},{float(hist.smoothed[tone])!r}"
        )
    if hist.peaks:
        peaks = ", ".join(
            f"tone={tone} prominence={float(prom)!r}" for tone, prom in hist.peaks
        )
    else:
        peaks = "none"
    lines.append(f"# peaks: {peaks}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
