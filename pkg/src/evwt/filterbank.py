"""Empirical Voronoi wavelet filters and their dual frame.

Each pair of centrally symmetric cells is merged into one region and gets a
single real, mate-symmetric Fourier mask built from the signed distance to
the region edge:

    1                                   if D > tau
    cos(pi/2 * beta((tau - D) / (2 tau)))   if |D| <= tau
    0                                   if D < -tau

with ``beta(x) = x^4 (35 - 84x + 70x^2 - 20x^3)``.  The dual masks are the
masks divided by the per-bin energy ``sum_k mask_k^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .distance import SignedDistanceMap, default_norm_factor, frequency_signed_distances
from .errors import FrameError, InvalidInputError
from .spectral import mated
from .voronoi import PartitionLabels

#: Smallest per-bin energy accepted as a frame lower bound.
MIN_ENERGY = 1e-12


@dataclass(frozen=True)
class TransitionParams:
    """Transition width of the filters.

    An explicit ``tau`` (radians) wins; otherwise it is ``gamma`` times the
    smallest cell in-radius.
    """

    tau: Optional[float] = None
    gamma: float = 0.3

    def __post_init__(self):
        if self.tau is not None and not self.tau > 0:
            raise InvalidInputError("tau must be positive")
        if not 0 < self.gamma < 1:
            raise InvalidInputError("gamma must lie in (0, 1)")


@dataclass
class WaveletFilter:
    mask: np.ndarray
    cell_ids: Tuple[int, ...]
    is_scaling: bool = False

    @property
    def cell_id(self) -> int:
        return self.cell_ids[0]


@dataclass
class FilterBank:
    filters: List[WaveletFilter]
    duals: List[np.ndarray]
    energy: np.ndarray
    tau: float
    gamma: Optional[float] = None
    partition: Optional[PartitionLabels] = field(default=None, repr=False)

    def __len__(self):
        return len(self.filters)

    @property
    def shape(self):
        return self.energy.shape

    @property
    def frame_bounds(self) -> Tuple[float, float]:
        """Measured (A, B): extremes of the per-bin filter energy."""
        return float(self.energy.min()), float(self.energy.max())

    @property
    def scaling_index(self) -> int:
        return next(i for i, f in enumerate(self.filters) if f.is_scaling)


def beta(x):
    """Meyer transition polynomial, clamped to 0 below 0 and 1 above 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    # Horner form keeps beta(x) + beta(1 - x) == 1 to a few ulps
    return x**4 * (35 + x * (-84 + x * (70 - 20 * x)))


def build_filter(dist, tau: float) -> np.ndarray:
    """Fourier mask from a signed distance map (or raw array of distances)."""
    if not tau > 0:
        raise InvalidInputError("tau must be positive")
    d = dist.values if isinstance(dist, SignedDistanceMap) else np.asarray(dist, dtype=float)
    mid = np.cos(0.5 * np.pi * beta((tau - d) / (2 * tau)))
    return np.where(d > tau, 1.0, np.where(d < -tau, 0.0, mid))


def auto_tau(dist_maps: Sequence[SignedDistanceMap], gamma: float) -> float:
    """``gamma`` times the smallest positive in-radius over the given regions.

    Regions covering the whole grid, and regions with no interior bin
    (in-radius 0), are skipped.  If nothing is left, one grid step
    (``gamma * norm_factor``) is returned.
    """
    if not 0 < gamma < 1:
        raise InvalidInputError("gamma must lie in (0, 1)")
    radii = []
    norm = None
    for dm in dist_maps:
        norm = dm.norm_factor
        if dm.whole_grid:
            continue
        r = float(dm.values[dm.cell].max())
        if r > 0:
            radii.append(r)
    if radii:
        return gamma * min(radii)
    return gamma * (norm if norm is not None else 2 * np.pi)


def _class_distances(regions, norm_factor):
    maps = frequency_signed_distances(regions, norm_factor)
    for region, dm in zip(regions, maps):
        if np.array_equal(region, mated(region)):
            # symmetric region: make the map exactly mate-symmetric despite rounding
            dm.values = 0.5 * (dm.values + mated(dm.values))
    return maps


def compute_duals(masks, min_energy: float = MIN_ENERGY):
    """Per-bin energy and dual masks; raises :class:`FrameError` on a vanishing bound."""
    energy = np.zeros_like(masks[0])
    for m in masks:
        energy += m * m
    bad = np.unravel_index(np.argmin(energy), energy.shape)
    if energy[bad] <= min_energy:
        raise FrameError(
            f"frame lower bound violated: energy {energy[bad]:.3e} at bin {tuple(int(v) for v in bad)}; "
            "try a smaller gamma or tau",
            bin_index=tuple(int(v) for v in bad),
            energy=float(energy[bad]),
        )
    return energy, [m / energy for m in masks]


def build_bank(partition: PartitionLabels, params: TransitionParams = TransitionParams()) -> FilterBank:
    """One filter per pair class of the partition, scaling filter first."""
    dims = partition.shape
    norm = default_norm_factor(dims)
    classes = partition.pair_classes()
    dc_class = next(i for i, g in enumerate(classes) if partition.dc_cell in g)
    order = [dc_class] + [i for i in range(len(classes)) if i != dc_class]
    classes = [classes[i] for i in order]

    dists = _class_distances([partition.class_mask(g) for g in classes], norm)
    tau = params.tau if params.tau is not None else auto_tau(dists, params.gamma)

    filters = [
        WaveletFilter(mask=build_filter(dm, tau), cell_ids=g, is_scaling=(i == 0))
        for i, (g, dm) in enumerate(zip(classes, dists))
    ]
    energy, duals = compute_duals([f.mask for f in filters])
    gamma = None if params.tau is not None else params.gamma
    return FilterBank(filters, duals, energy, float(tau), gamma, partition)


def bank_from_masks(masks, scaling_index: int = 0, tau: float = float("nan")) -> FilterBank:
    """Wrap precomputed masks (e.g. read back from disk) into a bank."""
    masks = [np.asarray(m, dtype=float) for m in masks]
    if not masks:
        raise InvalidInputError("no masks given")
    if any(m.shape != masks[0].shape for m in masks):
        raise InvalidInputError("masks have inconsistent shapes")
    filters = [WaveletFilter(m, (i,), i == scaling_index) for i, m in enumerate(masks)]
    energy, duals = compute_duals(masks)
    return FilterBank(filters, duals, energy, tau)
