"""Batch command line driver.

Subcommands:
  analyze   per-image maps, histograms and a consolidated metrics report
  sequence  transition profile across an ordered image sequence
  synth     deterministic synthetic fixtures (optionally with golden stats)

Images are decoded and reduced by a worker pool but results are emitted in
input order, so identical inputs and flags produce byte-identical outputs
at any worker count. Shared normalization runs in two phases: all ratio
grids first, then every map is scaled by the common maximum. Diagnostics
go to stderr; report paths are printed to stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import io as uio
from .blocks import (
    DEFAULT_BLOCK_SIZE,
    BlockSpec,
    block_stats_fast,
    block_stats_naive,
    normalize_tones,
    render_map,
)
from .errors import UrbtexError
from .metrics import (
    DEFAULT_BRIGHT_THRESHOLD,
    PER_IMAGE,
    SHARED,
    build_report,
    tone_histogram,
    transition_profile,
    sequence_tone_maps,
)
from .synth import Checkerboard, SaltPepper, Uniform, generate

IMAGE_SUFFIXES = (".png", ".pgm", ".ppm", ".pnm")
EMIT_CHOICES = ("maps", "histograms", "report")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1; argparse's default of 2 is reserved here
    # for partial batch failure
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_FAILURE)


def _add_analysis_flags(sub):
    sub.add_argument("inputs", nargs="+", metavar="PATH",
                     help="image files and/or directories")
    sub.add_argument("-P", "--block-size", type=int, default=DEFAULT_BLOCK_SIZE,
                     help="square edge length in pixels (default %(default)s)")
    sub.add_argument("--threshold", type=int, default=DEFAULT_BRIGHT_THRESHOLD,
                     help="bright-square tone cut, 0..255 (default %(default)s)")
    sub.add_argument("--normalization", choices=("per-image", "shared"),
                     default="per-image",
                     help="tone normalization across the run (default %(default)s)")
    sub.add_argument("--emit", default="maps,histograms,report",
                     help="comma-separated subset of maps,histograms,report "
                          "(default all)")
    sub.add_argument("--out-dir", required=True, help="output directory")
    sub.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="worker count (default: logical CPUs)")
    sub.add_argument("--format", choices=("png", "pgm"), default="png",
                     dest="raster_format",
                     help="map file format (default %(default)s)")
    sub.add_argument("--report-format", choices=("csv", "json"), default="csv",
                     help="consolidated report format (default %(default)s)")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="leave the timestamp column empty (golden-file runs)")


def build_parser():
    parser = _Parser(prog="urbtex",
                     description="Block-statistics texture maps and "
                                 "urbanization metrics for raster imagery.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze images in batch")
    _add_analysis_flags(p_analyze)

    p_seq = sub.add_parser("sequence",
                           help="treat inputs as an ordered sequence and "
                                "emit a transition profile")
    _add_analysis_flags(p_seq)

    p_synth = sub.add_parser("synth", help="generate a synthetic fixture")
    p_synth.add_argument("kind", choices=("uniform", "checkerboard", "salt-pepper"))
    p_synth.add_argument("width", type=int)
    p_synth.add_argument("height", type=int)
    p_synth.add_argument("--out", required=True, help="output raster path")
    p_synth.add_argument("--level", type=float, default=128.0,
                         help="uniform level (default %(default)s)")
    p_synth.add_argument("--cell", type=int, default=1,
                         help="checkerboard cell size (default %(default)s)")
    p_synth.add_argument("--low", type=float, default=0.0,
                         help="low level (default %(default)s)")
    p_synth.add_argument("--high", type=float, default=255.0,
                         help="high level (default %(default)s)")
    p_synth.add_argument("--density", type=float, default=0.5,
                         help="salt-pepper high-pixel probability "
                              "(default %(default)s)")
    p_synth.add_argument("--seed", type=int, default=0,
                         help="salt-pepper stream seed (default %(default)s)")
    p_synth.add_argument("--golden-stats", metavar="PATH",
                         help="also dump reference block statistics as JSON")
    p_synth.add_argument("-P", "--block-size", type=int,
                         default=DEFAULT_BLOCK_SIZE,
                         help="block size for --golden-stats (default %(default)s)")
    return parser


def _validate_analysis_args(parser, args):
    if args.block_size < 1:
        parser.error(f"--block-size must be >= 1, got {args.block_size}")
    if not 0 <= args.threshold <= 255:
        parser.error(f"--threshold must be in [0, 255], got {args.threshold}")
    if args.jobs < 1:
        parser.error(f"--jobs must be >= 1, got {args.jobs}")
    emit = tuple(part.strip() for part in args.emit.split(",") if part.strip())
    bad = [part for part in emit if part not in EMIT_CHOICES]
    if bad:
        parser.error(f"--emit entries must be from {EMIT_CHOICES}, got {bad}")
    args.emit_set = frozenset(emit)
    args.mode = SHARED if args.normalization == "shared" else PER_IMAGE


def _expand_inputs(parser, inputs):
    """Files keep the given order; directories expand to their image files
    sorted lexicographically (this defines sequence order)."""
    paths = []
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            found = sorted(
                child for child in p.iterdir()
                if child.is_file() and child.suffix.lower() in IMAGE_SUFFIXES
            )
            if not found:
                parser.error(f"directory {p} contains no supported images")
            paths.extend(found)
        else:
            paths.append(p)
    if not paths:
        parser.error("no input images")
    return paths


def _timestamp(args):
    if args.no_timestamp:
        return ""
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _load_grid(path, block_size):
    """Worker body: decode one image and reduce it to a ratio grid."""
    gray = uio.load_gray(path)
    spec = BlockSpec.from_image(gray.shape[0], gray.shape[1], block_size)
    return block_stats_fast(gray, spec)


def _pooled_grids(paths, args):
    """Decode + reduce all inputs in parallel; per-path result is either a
    BlockStatGrid or the exception that killed it."""
    def job(path):
        try:
            return _load_grid(path, args.block_size)
        except (UrbtexError, OSError, ValueError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        return list(pool.map(job, paths))


def _write_image_artifacts(out_dir, stem, tone_map, hist, args):
    if "maps" in args.emit_set:
        uio.save_map(render_map(tone_map),
                     out_dir / f"{stem}.map.{args.raster_format}",
                     fmt=args.raster_format)
    if "histograms" in args.emit_set:
        uio.export_histogram(hist, out_dir / f"{stem}.hist.csv")


def cmd_analyze(parser, args):
    _validate_analysis_args(parser, args)
    paths = _expand_inputs(parser, args.inputs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stamp = _timestamp(args)

    results = _pooled_grids(paths, args)
    grids = [g for g in results if not isinstance(g, Exception)]

    shared_ceiling = None
    if args.mode == SHARED and grids:
        shared_ceiling = max(g.ximax for g in grids)

    rows = []
    failures = []
    for path, result in zip(paths, results):
        if isinstance(result, Exception):
            failures.append((path, result))
            continue
        grid = result
        ceiling = grid.ximax if shared_ceiling is None else shared_ceiling
        tone_map = normalize_tones(grid, ximax=ceiling if ceiling > 0.0 else None)
        hist = tone_histogram(tone_map)
        report = build_report(path.stem, grid, tone_map, args.threshold,
                              ximax=ceiling)
        _write_image_artifacts(out_dir, path.stem, tone_map, hist, args)
        rows.append(uio.ReportRow.from_report(
            report, path, args.threshold, args.mode, stamp))

    for path, exc in failures:
        print(f"urbtex: failed to process {path}: {exc}", file=sys.stderr)

    if rows and "report" in args.emit_set:
        report_path = out_dir / f"report.{args.report_format}"
        uio.write_report(rows, report_path, fmt=args.report_format)
        print(report_path)

    if not rows:
        return EXIT_FAILURE
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_sequence(parser, args):
    _validate_analysis_args(parser, args)
    paths = _expand_inputs(parser, args.inputs)
    out_dir = Path(args.out_dir)
    stamp = _timestamp(args)

    def job(path):
        try:
            return uio.load_gray(path)
        except (UrbtexError, OSError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        grays = list(pool.map(job, paths))

    failures = [(p, g) for p, g in zip(paths, grays) if isinstance(g, Exception)]
    if failures:
        # a profile with holes is meaningless: abort before writing anything
        for path, exc in failures:
            print(f"urbtex: failed to decode {path}: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    images = [(path.stem, gray) for path, gray in zip(paths, grays)]
    try:
        computed = sequence_tone_maps(images, args.block_size, args.mode)
        profile = transition_profile(images, args.block_size, args.threshold,
                                     args.mode, computed=computed)
    except UrbtexError as exc:
        print(f"urbtex: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for path, (_, tone_map, _), report in zip(paths, computed, profile.reports):
        hist = tone_histogram(tone_map)
        _write_image_artifacts(out_dir, path.stem, tone_map, hist, args)
        rows.append(uio.ReportRow.from_report(
            report, path, args.threshold, args.mode, stamp))

    profile_path = out_dir / "profile.csv"
    with open(profile_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id", "urbanization_index", "modality",
                         "mean_tone", "normalization_mode"])
        for entry in profile.entries:
            writer.writerow([entry.image_id, entry.urbanization_index,
                             entry.modality.value, entry.mean_tone,
                             profile.normalization_mode])
    print(profile_path)

    if "report" in args.emit_set:
        report_path = out_dir / f"report.{args.report_format}"
        uio.write_report(rows, report_path, fmt=args.report_format)
        print(report_path)
    return EXIT_OK


def cmd_synth(parser, args):
    if args.kind == "uniform":
        spec = Uniform(args.width, args.height, level=args.level)
    elif args.kind == "checkerboard":
        spec = Checkerboard(args.width, args.height, cell=args.cell,
                            low=args.low, high=args.high)
    else:
        spec = SaltPepper(args.width, args.height, density=args.density,
                          seed=args.seed, low=args.low, high=args.high)
    try:
        raster = generate(spec)
        out = Path(args.out)
        if out.parent != Path("."):
            out.parent.mkdir(parents=True, exist_ok=True)
        uio.save_map(raster, out)
        if args.golden_stats:
            grid = block_stats_naive(
                raster,
                BlockSpec.from_image(raster.shape[0], raster.shape[1],
                                     args.block_size))
            payload = {
                "block_size": grid.spec.block_size,
                "rows": grid.spec.rows,
                "cols": grid.spec.cols,
                "ximax": grid.ximax,
                "mean": grid.mean.tolist(),
                "std": grid.std.tolist(),
                "xi": grid.xi.tolist(),
            }
            Path(args.golden_stats).write_text(
                json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except (UrbtexError, ValueError) as exc:
        print(f"urbtex: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(args.out)
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(parser, args)
    if args.command == "sequence":
        return cmd_sequence(parser, args)
    return cmd_synth(parser, args)


if __name__ == "__main__":
    sys.exit(main())
