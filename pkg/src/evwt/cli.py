"""Command-line front end.

Subcommands::

    evwt synth OUTPUT [--tone R C] [--size H W]
    evwt decompose INPUT BUNDLE_DIR [--tau T | --gamma G] [--scale-step S]
                    [--max-levels L] [--seed-file CSV] [--bank-dir DIR]
    evwt reconstruct BUNDLE_DIR OUTPUT
    evwt partition INPUT OUT_DIR [detection flags]
    evwt info BUNDLE_DIR

Exit status: 0 success, 2 invalid input, 3 detection failure, 4 frame
failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import io
from .errors import DetectionError, FrameError, InvalidInputError
from .filterbank import build_bank
from .scalespace import ScaleSpaceParams
from .spectral import centered_view, forward_dft, magnitude
from .synth import make_pure_tone, make_toy_image
from .transform import EvwDecomposition, EvwParams, decompose_with_bank, partition_image, reconstruct
from .voronoi import region_boundary

EXIT_OK, EXIT_INVALID, EXIT_DETECTION, EXIT_FRAME, EXIT_IO = 0, 2, 3, 4, 5


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    tau: Optional[float] = None
    gamma: float = 0.3
    scale_step: float = 0.5
    max_levels: Optional[int] = None
    seed_file: Optional[str] = None
    bank_dir: Optional[str] = None
    tone: Optional[Sequence[float]] = None
    size: Optional[Sequence[int]] = None

    @property
    def params(self) -> EvwParams:
        return EvwParams(self.scale_step, self.max_levels, 8, self.gamma, self.tau)


def _seeds_from_file(path):
    rows = io.read_seeds_csv(path)
    if not rows:
        raise InvalidInputError(f"{path}: no seeds listed")
    return [(r, c) for _, r, c, _ in rows]


def _partition(cfg, img):
    seeds = _seeds_from_file(cfg.seed_file) if cfg.seed_file else None
    return partition_image(img, cfg.params, seeds)


def _cmd_synth(cfg, out):
    if cfg.tone is not None:
        dims = tuple(cfg.size) if cfg.size else (64, 64)
        img = make_pure_tone(dims, tuple(cfg.tone), 1.0)
    else:
        if cfg.size:
            raise InvalidInputError("--size only applies together with --tone")
        img = make_toy_image()
    io.write_image(cfg.output, img)
    print(f"wrote {cfg.output} ({img.shape[0]}x{img.shape[1]})", file=out)


def _cmd_decompose(cfg, out):
    img = io.read_image(cfg.input)
    if cfg.bank_dir:
        manifest, bank = io.load_bank(cfg.bank_dir)
        extra = manifest
    else:
        _, part = _partition(cfg, img)
        bank = build_bank(part, cfg.params.transition)
        extra = {
            "gamma": cfg.gamma,
            "scale_step": cfg.scale_step,
            "max_levels": ScaleSpaceParams(cfg.scale_step, cfg.max_levels).levels_for(img.shape),
        }
    dec = decompose_with_bank(img, bank)
    io.write_bundle(cfg.output, dec.bands, bank, extra)
    lo, hi = bank.frame_bounds
    print(f"wrote {len(dec.bands)} bands to {cfg.output} (tau={bank.tau:.6g}, A={lo:.6g}, B={hi:.6g})", file=out)


def _cmd_reconstruct(cfg, out):
    manifest, bank = io.load_bank(cfg.input)
    bands = io.read_bands(cfg.input, manifest["num_bands"])
    img = reconstruct(EvwDecomposition(bands, bank, None, bank.shape))
    io.write_image(cfg.output, img)
    print(f"wrote {cfg.output}", file=out)


def partition_view(img, part) -> np.ndarray:
    """8-bit DC-centered log-magnitude picture with cell edges drawn white."""
    logmag = np.log1p(magnitude(forward_dft(img)))
    span = logmag.max() - logmag.min()
    view = np.zeros_like(logmag) if span == 0 else (logmag - logmag.min()) / span
    view = np.rint(centered_view(view) * 200).astype(np.int64)
    labels = centered_view(part.labels)
    edges = np.zeros(labels.shape, dtype=bool)
    edges[:, 1:] |= labels[:, 1:] != labels[:, :-1]
    edges[1:, :] |= labels[1:, :] != labels[:-1, :]
    view[edges] = 255
    return view


def _cmd_partition(cfg, out):
    img = io.read_image(cfg.input)
    seeds, part = _partition(cfg, img)
    os.makedirs(cfg.output, exist_ok=True)
    io.write_partition(cfg.output, part)
    io.write_pgm(os.path.join(cfg.output, "partition_view.pgm"), partition_view(img, part), maxval=255)
    print(f"{part.num_cells} cells, {len(part.pair_classes())} pair classes, threshold={seeds.threshold}", file=out)


def _cmd_info(cfg, out):
    manifest, bank = io.load_bank(cfg.input)
    for key in io.MANIFEST_KEYS:
        print(f"{key}={manifest[key]}", file=out)
    lo, hi = bank.frame_bounds
    print(f"frame_lower_bound={io.fmt_float(lo)}", file=out)
    print(f"frame_upper_bound={io.fmt_float(hi)}", file=out)


COMMANDS = {
    "synth": _cmd_synth,
    "decompose": _cmd_decompose,
    "reconstruct": _cmd_reconstruct,
    "partition": _cmd_partition,
    "info": _cmd_info,
}


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        COMMANDS[cfg.command](cfg, out)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except DetectionError as exc:
        print(f"detection failed: {exc}", file=err)
        return EXIT_DETECTION
    except FrameError as exc:
        print(f"frame failure: {exc}", file=err)
        return EXIT_FRAME
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_IO
    return EXIT_OK


def _detection_flags(p):
    p.add_argument("--scale-step", type=float, default=0.5, help="sigma increment between levels")
    p.add_argument("--max-levels", type=int, default=None, help="smoothing levels (default: ceil(min(H,W)/4))")
    p.add_argument("--seed-file", default=None, help="CSV of row,col seeds; bypasses detection")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evwt", description="Empirical Voronoi wavelet transform")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write the synthetic toy image (or a pure tone)")
    p.add_argument("output")
    p.add_argument("--tone", type=float, nargs=2, metavar=("ROW_CYCLES", "COL_CYCLES"))
    p.add_argument("--size", type=int, nargs=2, metavar=("H", "W"))

    p = sub.add_parser("decompose", help="image -> coefficient bundle")
    p.add_argument("input")
    p.add_argument("output", help="bundle directory")
    p.add_argument("--tau", type=float, default=None, help="transition width in radians (wins over --gamma)")
    p.add_argument("--gamma", type=float, default=0.3, help="tau as a fraction of the smallest cell in-radius")
    p.add_argument("--bank-dir", default=None, help="reuse the filter bank of an existing bundle")
    _detection_flags(p)

    p = sub.add_parser("reconstruct", help="coefficient bundle -> image")
    p.add_argument("input", help="bundle directory")
    p.add_argument("output")

    p = sub.add_parser("partition", help="write partition.pgm, seeds.csv and a visualization")
    p.add_argument("input")
    p.add_argument("output", help="output directory")
    _detection_flags(p)

    p = sub.add_parser("info", help="print a bundle's manifest and frame bounds")
    p.add_argument("input", help="bundle directory")
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(command=ns.command, input=getattr(ns, "input", None), output=getattr(ns, "output", None))
    for key in ("tau", "gamma", "scale_step", "max_levels", "seed_file", "bank_dir", "tone", "size"):
        if getattr(ns, key, None) is not None:
            setattr(cfg, key, getattr(ns, key))
    try:
        cfg.params.scalespace, cfg.params.transition
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
