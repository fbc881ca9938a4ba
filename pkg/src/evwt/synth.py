"""Synthetic test images: piecewise-constant objects plus harmonic modes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class Mode:
    amplitude: float
    freq: Tuple[float, float]  # cycles per image along (rows, cols)
    phase: float = 0.0


@dataclass(frozen=True)
class Shape:
    kind: str  # "rectangle" or "ellipse"
    center: Tuple[float, float]
    half_sizes: Tuple[float, float]
    intensity: float


@dataclass(frozen=True)
class ToySpec:
    dims: Tuple[int, int] = (256, 256)
    modes: Tuple[Mode, ...] = ()
    objects: Tuple[Shape, ...] = ()


def default_toy_spec() -> ToySpec:
    """Two objects and four modes forming two radius classes at two orientations each."""
    return ToySpec(
        dims=(256, 256),
        modes=(
            Mode(1.0, (20, 8)),
            Mode(1.0, (8, 20)),
            Mode(1.0, (36, 14)),
            Mode(1.0, (14, 36)),
        ),
        objects=(
            Shape("rectangle", (64, 64), (40, 24), 0.5),
            Shape("ellipse", (176, 160), (48, 28), 0.5),
        ),
    )


def _cosine(dims, freq, amplitude, phase=0.0):
    h, w = dims
    fr, fc = freq
    if not (abs(fr) < h / 2 and abs(fc) < w / 2):
        raise InvalidInputError(f"frequency {freq} not below Nyquist for {h}x{w}")
    r = np.arange(h)[:, None]
    c = np.arange(w)[None, :]
    return amplitude * np.cos(2 * np.pi * (fr * r / h + fc * c / w) + phase)


def make_pure_tone(dims, freq_pair, amplitude=1.0, phase=0.0):
    return _cosine(tuple(dims), freq_pair, amplitude, phase)


def _object_mask(dims, obj: Shape):
    r = np.arange(dims[0])[:, None] - obj.center[0]
    c = np.arange(dims[1])[None, :] - obj.center[1]
    hr, hc = obj.half_sizes
    if obj.kind == "rectangle":
        return (np.abs(r) <= hr) & (np.abs(c) <= hc)
    if obj.kind == "ellipse":
        return (r / hr) ** 2 + (c / hc) ** 2 <= 1.0
    raise InvalidInputError(f"unknown object shape {obj.kind!r}")


def make_toy_image(spec: ToySpec = None) -> np.ndarray:
    spec = default_toy_spec() if spec is None else spec
    dims = tuple(spec.dims)
    img = np.zeros(dims)
    for obj in spec.objects:
        img[_object_mask(dims, obj)] += obj.intensity
    for m in spec.modes:
        img += _cosine(dims, m.freq, m.amplitude, m.phase)
    return img
