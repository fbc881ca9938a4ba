"""Raster and bundle file formats.

* PFM: grayscale ``Pf``, little-endian 32-bit floats (negative scale), rows
  stored bottom to top as the format prescribes.
* PGM: binary ``P5``, 8-bit or 16-bit (big-endian) samples.
* Bundle: a directory holding ``manifest.txt`` (``key=value`` lines),
  ``band_<k>.pfm``, ``filter_<k>.pfm``, ``partition.pgm`` and ``seeds.csv``.
"""
from __future__ import annotations

import csv
import os
import re

import numpy as np

from .errors import InvalidInputError
from .filterbank import FilterBank, TransitionParams, build_bank
from .voronoi import PartitionLabels

BUNDLE_VERSION = 1
MANIFEST_KEYS = (
    "version", "height", "width", "num_bands", "tau", "gamma",
    "scale_step", "max_levels", "dc_band_index",
)


def fmt_float(x) -> str:
    """Locale-independent round-trip formatting of a double."""
    return format(float(x), ".17g")


def write_pfm(path, data):
    data = np.asarray(data, dtype="<f4")
    if data.ndim != 2:
        raise InvalidInputError("PFM writer expects a 2D array")
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"Pf\n{w} {h}\n-1.0\n".encode("ascii"))
        fh.write(np.ascontiguousarray(data[::-1]).tobytes())


def _read_tokens(buf, count, pos=0):
    # whitespace-separated header tokens, with '#' comments (PGM)
    tokens = []
    while len(tokens) < count:
        m = re.compile(rb"\s*(#[^\n]*\n\s*)*([^\s#]+)").match(buf, pos)
        if m is None:
            raise InvalidInputError("truncated image header")
        tokens.append(m.group(2))
        pos = m.end()
    return tokens, pos + 1  # exactly one whitespace byte ends the header


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        buf = fh.read()
    (magic, w, h, scale), pos = _read_tokens(buf, 4)
    if magic != b"Pf":
        raise InvalidInputError(f"{path}: not a grayscale PFM file")
    w, h, scale = int(w), int(h), float(scale)
    dtype = "<f4" if scale < 0 else ">f4"
    n = w * h
    if len(buf) - pos < 4 * n:
        raise InvalidInputError(f"{path}: truncated PFM data")
    data = np.frombuffer(buf, dtype=dtype, count=n, offset=pos).reshape(h, w)
    return data[::-1].astype(float)


def write_pgm(path, data, maxval=None):
    data = np.asarray(data)
    if maxval is None:
        maxval = 255 if data.max(initial=0) <= 255 else 65535
    if data.min(initial=0) < 0 or data.max(initial=0) > maxval:
        raise InvalidInputError("PGM samples out of range")
    h, w = data.shape
    dtype = "u1" if maxval < 256 else ">u2"
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        fh.write(np.ascontiguousarray(data, dtype=dtype).tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        buf = fh.read()
    (magic, w, h, maxval), pos = _read_tokens(buf, 4)
    if magic != b"P5":
        raise InvalidInputError(f"{path}: not a binary PGM file")
    w, h, maxval = int(w), int(h), int(maxval)
    dtype = "u1" if maxval < 256 else ">u2"
    n = w * h
    if len(buf) - pos < n * np.dtype(dtype).itemsize:
        raise InvalidInputError(f"{path}: truncated PGM data")
    return np.frombuffer(buf, dtype=dtype, count=n, offset=pos).reshape(h, w).astype(np.int64)


def read_image(path) -> np.ndarray:
    """Read a PFM or PGM image as float64, dispatching on the magic number."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"Pf":
        return read_pfm(path)
    if magic == b"P5":
        return read_pgm(path).astype(float)
    raise InvalidInputError(f"{path}: unsupported image format (expected PFM 'Pf' or PGM 'P5')")


def write_image(path, data):
    """Write ``.pfm`` losslessly (float32) or ``.pgm`` rescaled to 16 bits."""
    if str(path).lower().endswith(".pgm"):
        data = np.asarray(data, dtype=float)
        lo, hi = data.min(), data.max()
        scaled = np.zeros(data.shape) if hi == lo else (data - lo) / (hi - lo)
        write_pgm(path, np.rint(scaled * 65535).astype(np.int64), 65535)
    else:
        write_pfm(path, data)


def write_seeds_csv(path, part: PartitionLabels):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["cell_id", "row", "col", "pair_id"])
        for c, (r, col) in enumerate(part.seed_of):
            wr.writerow([c, r, col, part.pair_of[c]])


def read_seeds_csv(path):
    """Rows of a seeds table as ``(cell_id, row, col, pair_id)``; pair_id may be None.

    Files with only ``row,col`` columns (or no header) are accepted as seed lists.
    """
    out = []
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        return out
    header = [h.strip() for h in rows[0]]
    try:
        int(header[0])
        body, header = rows, None
    except ValueError:
        body = rows[1:]
    for i, r in enumerate(body):
        vals = [int(v) for v in r]
        if header is None or header == ["row", "col"]:
            if len(vals) != 2:
                raise InvalidInputError(f"{path}: expected row,col on line {i + 1}")
            out.append((i, vals[0], vals[1], None))
        else:
            rec = dict(zip(header, vals))
            try:
                out.append((rec["cell_id"], rec["row"], rec["col"], rec.get("pair_id")))
            except KeyError as exc:
                raise InvalidInputError(f"{path}: missing column {exc}") from None
    return out


def write_manifest(path, values: dict):
    with open(path, "w", newline="\n") as fh:
        for key in MANIFEST_KEYS:
            v = values[key]
            fh.write(f"{key}={fmt_float(v) if isinstance(v, float) else v}\n")


def read_manifest(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidInputError(f"{path}: malformed manifest line {line!r}")
            out[key.strip()] = value.strip()
    missing = [k for k in MANIFEST_KEYS if k not in out]
    if missing:
        raise InvalidInputError(f"{path}: manifest missing keys {missing}")
    ints = ("version", "height", "width", "num_bands", "max_levels", "dc_band_index")
    return {k: (int(v) if k in ints else float(v)) for k, v in out.items() if k in MANIFEST_KEYS}


def _require(path):
    if not os.path.isfile(path):
        raise InvalidInputError(f"missing bundle file: {path}")
    return path


def write_bundle(dirname, bands, bank: FilterBank, manifest_extra: dict):
    """Write a coefficient bundle.  ``manifest_extra`` supplies gamma, scale_step, max_levels."""
    os.makedirs(dirname, exist_ok=True)
    h, w = bank.shape
    manifest = {
        "version": BUNDLE_VERSION,
        "height": h,
        "width": w,
        "num_bands": len(bands),
        "tau": float(bank.tau),
        "gamma": float(manifest_extra["gamma"]),
        "scale_step": float(manifest_extra["scale_step"]),
        "max_levels": int(manifest_extra["max_levels"]),
        "dc_band_index": bank.scaling_index,
    }
    write_manifest(os.path.join(dirname, "manifest.txt"), manifest)
    for k, band in enumerate(bands):
        write_pfm(os.path.join(dirname, f"band_{k}.pfm"), band)
    for k, f in enumerate(bank.filters):
        write_pfm(os.path.join(dirname, f"filter_{k}.pfm"), f.mask)
    if bank.partition is not None:
        write_partition(dirname, bank.partition)
    return manifest


def write_partition(dirname, part: PartitionLabels):
    if part.num_cells > 65536:
        raise InvalidInputError("too many cells for a 16-bit label map")
    write_pgm(os.path.join(dirname, "partition.pgm"), part.labels, maxval=65535)
    write_seeds_csv(os.path.join(dirname, "seeds.csv"), part)


def read_partition(dirname) -> PartitionLabels:
    labels = read_pgm(_require(os.path.join(dirname, "partition.pgm")))
    rows = read_seeds_csv(_require(os.path.join(dirname, "seeds.csv")))
    rows = sorted(rows)
    if [r[0] for r in rows] != list(range(len(rows))) or any(r[3] is None for r in rows):
        raise InvalidInputError(f"{dirname}: seeds.csv must list cell ids 0..n-1 with pair ids")
    if labels.max() >= len(rows):
        raise InvalidInputError(f"{dirname}: partition labels exceed the seed table")
    seed_of = [(r[1], r[2]) for r in rows]
    pair_of = [r[3] for r in rows]
    return PartitionLabels(labels, seed_of, pair_of, int(labels[0, 0]))


def load_bank(dirname) -> tuple:
    """Rebuild the exact filter bank of a bundle from its partition and tau."""
    manifest = read_manifest(_require(os.path.join(dirname, "manifest.txt")))
    part = read_partition(dirname)
    if part.shape != (manifest["height"], manifest["width"]):
        raise InvalidInputError(f"{dirname}: partition size disagrees with manifest")
    bank = build_bank(part, TransitionParams(tau=manifest["tau"]))
    bank.gamma = manifest["gamma"]
    if len(bank) != manifest["num_bands"]:
        raise InvalidInputError(f"{dirname}: manifest lists {manifest['num_bands']} bands, partition yields {len(bank)}")
    return manifest, bank


def read_bands(dirname, num_bands):
    return [read_pfm(_require(os.path.join(dirname, f"band_{k}.pfm"))) for k in range(num_bands)]
