"""Forward empirical Voronoi wavelet transform and its dual-frame inverse."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidInputError
from .filterbank import FilterBank, TransitionParams, build_bank
from .scalespace import ScaleSpaceParams, SeedSet, detect_seeds, symmetrize_seeds
from .spectral import forward_dft, inverse_dft, magnitude
from .voronoi import PartitionLabels, label_grid

MIN_SIZE = 8


@dataclass(frozen=True)
class EvwParams:
    """All knobs of :func:`decompose`.  An explicit ``tau`` overrides ``gamma``."""

    scale_step: float = 0.5
    max_levels: Optional[int] = None
    neighborhood: int = 8
    gamma: float = 0.3
    tau: Optional[float] = None

    @property
    def scalespace(self) -> ScaleSpaceParams:
        return ScaleSpaceParams(self.scale_step, self.max_levels, self.neighborhood)

    @property
    def transition(self) -> TransitionParams:
        return TransitionParams(self.tau, self.gamma)


@dataclass
class EvwDecomposition:
    """Bands ``f_0 .. f_N`` (band 0 is the residue of the scaling filter)."""

    bands: List[np.ndarray]
    bank: FilterBank
    seeds: Optional[SeedSet] = None
    source_dims: Tuple[int, int] = None
    imag_ratios: List[float] = field(default_factory=list)

    @property
    def partition(self) -> Optional[PartitionLabels]:
        return self.bank.partition

    def __len__(self):
        return len(self.bands)


def _check_image(img):
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise InvalidInputError(f"expected a 2D image, got shape {img.shape}")
    if min(img.shape) < MIN_SIZE:
        raise InvalidInputError(f"image must be at least {MIN_SIZE}x{MIN_SIZE}, got {img.shape}")
    if not np.all(np.isfinite(img)):
        raise InvalidInputError("image contains non-finite values")
    return img


def decompose_with_bank(img, bank: FilterBank) -> EvwDecomposition:
    """Filter ``img`` with a fixed bank; linear in ``img``."""
    img = np.asarray(img, dtype=float)
    if img.shape != bank.shape:
        raise InvalidInputError(f"image shape {img.shape} does not match bank shape {bank.shape}")
    spec = forward_dft(img)
    bands, ratios = [], []
    for f in bank.filters:
        band, ratio = inverse_dft(spec * f.mask, return_imag_ratio=True)
        bands.append(band)
        ratios.append(ratio)
    return EvwDecomposition(bands, bank, None, img.shape, ratios)


def partition_image(img, params: EvwParams = EvwParams(), seeds=None):
    """Detect seeds (unless given) and build the Voronoi partition of ``img``'s spectrum."""
    img = _check_image(img)
    if seeds is None:
        seed_set = detect_seeds(magnitude(forward_dft(img)), params.scalespace)
    else:
        pts = symmetrize_seeds(seeds, img.shape)
        seed_set = SeedSet(seeds=pts, threshold=float("nan"))
    return seed_set, label_grid(seed_set.seeds, img.shape)


def decompose(img, params: EvwParams = EvwParams(), seeds=None) -> EvwDecomposition:
    """Empirical Voronoi wavelet transform of ``img``.

    Seeds are detected from the magnitude spectrum unless an explicit list of
    bins is passed (it is closed under the mate map first).
    """
    seed_set, part = partition_image(img, params, seeds)
    bank = build_bank(part, params.transition)
    dec = decompose_with_bank(img, bank)
    dec.seeds = seed_set
    return dec


def reconstruct(dec: EvwDecomposition) -> np.ndarray:
    """Dual-frame synthesis from the (possibly edited) bands."""
    bank = dec.bank
    if len(dec.bands) != len(bank.duals):
        raise InvalidInputError(f"{len(dec.bands)} bands for a bank of {len(bank.duals)} filters")
    acc = np.zeros(bank.shape, dtype=complex)
    for band, dual in zip(dec.bands, bank.duals):
        band = np.asarray(band, dtype=float)
        if band.shape != bank.shape:
            raise InvalidInputError(f"band shape {band.shape} does not match bank shape {bank.shape}")
        acc += forward_dft(band) * dual
    return inverse_dft(acc)
