"""Voronoi partition of the frequency plane with exact central symmetry.

Bins are assigned to their nearest seed under the Euclidean distance taken on
centered frequency coordinates (no wrap-around).  On an even-sized axis the
Nyquist coordinate is both ``+n/2`` and ``-n/2``; the distance along that
axis uses whichever is closer, which makes the metric invariant under the
mate map.

Labels are computed only on a canonical half of the grid and copied to the
other half through the mate map, so that ``labels[mate(x)] ==
pair_of[labels[x]]`` holds exactly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .errors import InvalidInputError
from .spectral import canonical_mask, centered_coords, mate, mate_map, self_mate_mask

FreqIndex = Tuple[int, int]


@dataclass
class PartitionLabels:
    labels: np.ndarray
    seed_of: List[FreqIndex]
    pair_of: List[int]
    dc_cell: int

    @property
    def num_cells(self) -> int:
        return len(self.seed_of)

    @property
    def shape(self):
        return self.labels.shape

    def pair_classes(self) -> List[Tuple[int, ...]]:
        """Cell-id groups ``(c,)`` or ``(c, pair_of[c])``, ordered by smallest id."""
        seen, out = set(), []
        for c in range(self.num_cells):
            if c in seen:
                continue
            group = tuple(sorted({c, self.pair_of[c]}))
            seen.update(group)
            out.append(group)
        return out

    def class_mask(self, cells) -> np.ndarray:
        return np.isin(self.labels, list(cells))


def _axis_offsets(n, coords_a, coords_b):
    """|a - b| along one axis, folding the Nyquist coordinate of even axes."""
    d = np.abs(coords_a[:, None] - coords_b[None, :])
    if n % 2 == 0:
        half = n // 2
        a_alt = np.where(coords_a == half, -half, coords_a)
        b_alt = np.where(coords_b == half, -half, coords_b)
        for aa, bb in ((a_alt, coords_b), (coords_a, b_alt), (a_alt, b_alt)):
            d = np.minimum(d, np.abs(aa[:, None] - bb[None, :]))
    return d


def squared_distances(dims, rows, cols, seeds) -> np.ndarray:
    """Integer squared distances between bins ``(rows, cols)`` and each seed."""
    h, w = dims
    cr, cc = centered_coords(h), centered_coords(w)
    seeds = np.asarray(seeds, dtype=int).reshape(-1, 2)
    row_table = _axis_offsets(h, cr, cr[seeds[:, 0]]) ** 2
    col_table = _axis_offsets(w, cc, cc[seeds[:, 1]]) ** 2
    return row_table[rows] + col_table[cols]


def _nearest(dims, rows, cols, seeds, block=4096):
    # first (smallest id) nearest seed, computed in blocks to bound memory
    out = np.empty(len(rows), dtype=np.int64)
    for start in range(0, len(rows), block):
        sl = slice(start, start + block)
        out[sl] = np.argmin(squared_distances(dims, rows[sl], cols[sl], seeds), axis=1)
    return out


def pair_symmetric_cells(part: PartitionLabels) -> PartitionLabels:
    """Fill ``pair_of``: each cell maps to the cell seeded at the mate of its seed."""
    dims = part.labels.shape
    index = {tuple(s): c for c, s in enumerate(part.seed_of)}
    pair_of = []
    for c, s in enumerate(part.seed_of):
        m = mate(s, dims)
        if m not in index:
            raise RuntimeError(f"seed set is not mate-closed: mate {m} of seed {tuple(s)} missing")
        pair_of.append(index[m])
    return PartitionLabels(part.labels, part.seed_of, pair_of, part.dc_cell)


def label_grid(seeds, dims) -> PartitionLabels:
    """Nearest-seed labelling of every bin.

    Ties are broken by smallest cell id on the canonical half.  Self-mate bins
    (DC and the Nyquist corners) must carry a self-paired label to keep the
    partition symmetric: the nearest self-paired cell is used, and only if
    the seed set has no self-mate seed at all does the bin fall back to the
    smallest nearest id (the symmetry then cannot hold there).
    """
    seeds = [tuple(int(v) for v in s) for s in seeds]
    if not seeds:
        raise InvalidInputError("seed set is empty")
    if len(set(seeds)) != len(seeds):
        raise InvalidInputError("seed set contains duplicates")
    h, w = dims
    for r, c in seeds:
        if not (0 <= r < h and 0 <= c < w):
            raise InvalidInputError(f"seed {(r, c)} outside {h}x{w} grid")

    part = pair_symmetric_cells(PartitionLabels(np.zeros(dims, dtype=np.int64), seeds, [], 0))
    pair_of = np.asarray(part.pair_of)

    canon = canonical_mask(dims)
    selfm = self_mate_mask(dims)
    labels = np.full(dims, -1, dtype=np.int64)

    rows, cols = np.nonzero(canon & ~selfm)
    labels[rows, cols] = _nearest(dims, rows, cols, seeds)

    self_paired = np.flatnonzero(pair_of == np.arange(len(seeds)))
    rows, cols = np.nonzero(selfm)
    d2 = squared_distances(dims, rows, cols, seeds)
    for i, (r, c) in enumerate(zip(rows, cols)):
        if self_paired.size:
            j = self_paired[np.argmin(d2[i, self_paired])]
        else:
            j = int(np.argmin(d2[i]))
            warnings.warn(
                f"no self-mate seed: bin {(int(r), int(c))} cannot be labelled symmetrically",
                RuntimeWarning,
                stacklevel=2,
            )
        labels[r, c] = j

    # fill the other half through the mate map
    mated_labels = labels[mate_map(dims)]
    rest = labels < 0
    labels[rest] = pair_of[mated_labels[rest]]

    return PartitionLabels(labels, seeds, part.pair_of, int(labels[0, 0]))


def cell_boundary(part: PartitionLabels, cell: int, merge_pair: bool = True) -> np.ndarray:
    """Inner boundary of a cell as a boolean mask.

    With ``merge_pair`` the cell is taken together with its mate cell.  A bin
    is on the boundary when it belongs to the region and has at least one
    4-neighbor (periodic wrap) outside it.
    """
    if not 0 <= cell < part.num_cells:
        raise InvalidInputError(f"invalid cell id {cell}")
    cells = {cell, part.pair_of[cell]} if merge_pair else {cell}
    region = part.class_mask(cells)
    return region_boundary(region)


def region_boundary(region) -> np.ndarray:
    region = np.asarray(region, dtype=bool)
    outside_neighbor = np.zeros_like(region)
    for shift, axis in ((1, 0), (-1, 0), (1, 1), (-1, 1)):
        outside_neighbor |= ~np.roll(region, shift, axis=axis)
    return region & outside_neighbor
