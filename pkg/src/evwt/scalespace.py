"""Detection of meaningful spectral maxima through a Gaussian scale-space.

Local maxima of the magnitude spectrum are followed across increasingly
smoothed versions of it.  Each maximum found on the unsmoothed spectrum
starts a track whose length counts the consecutive smoothing levels at which
it survives.  Otsu's method on the histogram of track lengths separates the
short-lived (noise) maxima from the persistent ones, which become the seeds
of the partition.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import correlate1d
from scipy.spatial import cKDTree

from .errors import DetectionError, InvalidInputError
from .spectral import mate

logger = logging.getLogger(__name__)

FreqIndex = Tuple[int, int]

#: Relative magnitude below which spectrum bins are treated as exact zeros.
NOISE_FLOOR = 1e-10


@dataclass(frozen=True)
class ScaleSpaceParams:
    """Discretisation of the scale-space.

    Level ``i`` uses a Gaussian of standard deviation ``i * scale_step``.
    ``max_levels=None`` means ``ceil(min(H, W) / 4)``.
    """

    scale_step: float = 0.5
    max_levels: Optional[int] = None
    neighborhood: int = 8

    def __post_init__(self):
        if not self.scale_step > 0:
            raise InvalidInputError("scale_step must be positive")
        if self.max_levels is not None and self.max_levels < 2:
            raise InvalidInputError("max_levels must be at least 2")
        if self.neighborhood not in (4, 8):
            raise InvalidInputError("neighborhood must be 4 or 8")

    def levels_for(self, dims) -> int:
        if self.max_levels is not None:
            return self.max_levels
        return max(2, math.ceil(min(dims) / 4))


@dataclass
class MaximaTrack:
    origin: FreqIndex
    length: int = 1
    last: FreqIndex = None

    def __post_init__(self):
        if self.last is None:
            self.last = self.origin


@dataclass
class SeedSet:
    seeds: List[FreqIndex]
    threshold: float
    all_tracks: List[MaximaTrack] = field(default_factory=list)
    maxima_counts: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.seeds)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled Gaussian of standard deviation ``sigma``, radius ``ceil(4 sigma)``, unit sum."""
    radius = math.ceil(4 * sigma)
    x = np.arange(-radius, radius + 1, dtype=float)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_smooth(mag, sigma: float) -> np.ndarray:
    """Periodic Gaussian smoothing; ``sigma == 0`` returns the input unchanged."""
    if sigma < 0:
        raise InvalidInputError("sigma must be nonnegative")
    mag = np.asarray(mag, dtype=float)
    if sigma == 0:
        return mag.copy()
    k = gaussian_kernel(sigma)
    out = correlate1d(mag, k, axis=0, mode="wrap")
    return correlate1d(out, k, axis=1, mode="wrap")


def _neighbor_offsets(neighborhood):
    if neighborhood == 4:
        return [(-1, 0), (1, 0), (0, -1), (0, 1)]
    return [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)]


def local_maxima(smoothed, neighborhood: int = 8) -> List[FreqIndex]:
    """Bins strictly greater than all their (periodically wrapped) neighbors.

    Returned in row-major order.
    """
    a = np.asarray(smoothed, dtype=float)
    is_max = np.ones(a.shape, dtype=bool)
    for dr, dc in _neighbor_offsets(neighborhood):
        is_max &= a > np.roll(a, (dr, dc), axis=(0, 1))
    rows, cols = np.nonzero(is_max)
    return [(int(r), int(c)) for r, c in zip(rows, cols)]


def _periodic_offset(a, b, n):
    d = abs(a - b) % n
    return min(d, n - d)


def track_maxima(mag, params: ScaleSpaceParams = ScaleSpaceParams(), return_counts=False):
    """Follow level-0 maxima through the scale-space and measure their persistence.

    At level ``i`` a live track may be extended by a maximum lying within
    Chebyshev distance ``ceil(sigma_i) + 1`` (periodic) of its most recent
    position.  Candidate pairs are matched greedily, closest first, ties
    going to the track whose origin comes first in row-major order.  A track
    that finds no match stops growing.
    """
    mag = np.asarray(mag, dtype=float)
    h, w = mag.shape
    n_levels = params.levels_for(mag.shape)

    level0 = local_maxima(mag, params.neighborhood)
    tracks = [MaximaTrack(origin=m) for m in level0]
    counts = [len(level0)]
    alive = list(range(len(tracks)))

    for i in range(1, n_levels + 1):
        sigma = i * params.scale_step
        maxima = local_maxima(gaussian_smooth(mag, sigma), params.neighborhood)
        counts.append(len(maxima))
        if not alive:
            continue
        radius = math.ceil(sigma) + 1
        candidates = []
        if maxima:
            pts = np.asarray(maxima, dtype=float)
            tree = cKDTree(pts, boxsize=(h, w))
            lasts = np.asarray([tracks[t].last for t in alive], dtype=float)
            # small slack keeps the integer radius inclusive under rounding
            hits = tree.query_ball_point(lasts, r=radius + 1e-9, p=np.inf)
            for t, js in zip(alive, hits):
                tr, tc = tracks[t].last
                for j in js:
                    mr, mc = maxima[j]
                    dr = _periodic_offset(tr, mr, h)
                    dc = _periodic_offset(tc, mc, w)
                    candidates.append((dr * dr + dc * dc, tracks[t].origin, j, t))
        candidates.sort()
        used_tracks, used_maxima = set(), set()
        for _, _, j, t in candidates:
            if t in used_tracks or j in used_maxima:
                continue
            used_tracks.add(t)
            used_maxima.add(j)
            tracks[t].length += 1
            tracks[t].last = maxima[j]
        alive = [t for t in alive if t in used_tracks]

    if any(b > a for a, b in zip(counts, counts[1:])):
        logger.info("number of maxima increased across scales: %s", counts)
    if return_counts:
        return tracks, counts
    return tracks


def _between_class_score(n0, s0, n1, s1):
    # n0*n1*(mu0 - mu1)^2 as an exact fraction (numerator, denominator)
    return (n1 * s0 - n0 * s1) ** 2, n0 * n1


def otsu_threshold(lengths: Sequence[int]) -> float:
    """Otsu threshold on the unit-bin histogram of integer track lengths.

    Classes are ``{l <= T}`` and ``{l > T}``.  The between-class variance is
    compared in exact integer arithmetic; among equally good thresholds the
    smallest is returned.  If every length is the same the result is that
    value minus one, so that all of them lie above the threshold.
    """
    lengths = [int(v) for v in lengths]
    if not lengths:
        raise InvalidInputError("otsu_threshold needs at least one value")
    lo, hi = min(lengths), max(lengths)
    if lo == hi:
        return float(lo - 1)

    hist = np.bincount(np.asarray(lengths) - lo)
    values = np.arange(lo, hi + 1)
    n = len(lengths)
    total = int(np.dot(hist, values))

    best_t, best = None, None
    n0 = s0 = 0
    for t, (count, v) in enumerate(zip(hist.tolist(), values.tolist())):
        n0 += count
        s0 += count * v
        n1 = n - n0
        if n1 == 0:
            break
        if n0 == 0:
            continue
        num, den = _between_class_score(n0, s0, n1, total - s0)
        if best is None or num * best[1] > best[0] * den:
            best, best_t = (num, den), lo + t
    return float(best_t)


def symmetrize_seeds(seeds, dims):
    """Close a seed list under the mate map, keeping first-seen order."""
    out = list(dict.fromkeys(tuple(s) for s in seeds))
    present = set(out)
    for s in list(out):
        m = mate(s, dims)
        if m not in present:
            out.append(m)
            present.add(m)
    return out


def detect_seeds(
    mag,
    params: ScaleSpaceParams = ScaleSpaceParams(),
    include_dc: bool = True,
    noise_floor: float = NOISE_FLOOR,
) -> SeedSet:
    """Positions of the persistent maxima of a magnitude spectrum.

    The kept seeds are those whose track length exceeds the Otsu threshold,
    closed under the mate map.  With ``include_dc`` the DC bin is always a
    seed so that a scaling (low-pass) cell exists.  Magnitudes below
    ``noise_floor`` times the peak are FFT round-off and are zeroed first.
    """
    mag = np.asarray(mag, dtype=float)
    if mag.ndim != 2 or mag.size == 0:
        raise InvalidInputError("magnitude spectrum must be a nonempty 2D array")
    if np.any(mag < 0):
        raise InvalidInputError("magnitude spectrum must be nonnegative")
    if noise_floor > 0:
        mag = np.where(mag < noise_floor * mag.max(), 0.0, mag)
    tracks, counts = track_maxima(mag, params, return_counts=True)
    if not tracks:
        raise DetectionError("no meaningful modes detected: spectrum has no strict local maxima", tracks)
    threshold = otsu_threshold([t.length for t in tracks])
    kept = [t.origin for t in tracks if t.length > threshold]
    if not kept:
        dump = ", ".join(f"{t.origin}:{t.length}" for t in tracks)
        raise DetectionError(f"no meaningful modes detected (T={threshold}); tracks: {dump}", tracks)
    if include_dc and (0, 0) not in kept:
        kept.insert(0, (0, 0))
    seeds = symmetrize_seeds(kept, mag.shape)
    return SeedSet(seeds=seeds, threshold=threshold, all_tracks=tracks, maxima_counts=counts)
