"""Signed quasi-Euclidean distance to the edge of a frequency-plane region.

The metric between bins ``(k, l)`` and ``(p, q)`` is

    max(|p-k|, |q-l|) + (sqrt(2) - 1) * min(|p-k|, |q-l|)

which is the cost of the cheapest 8-connected path with unit axial steps and
``sqrt(2)`` diagonal steps.  A raster two-pass chamfer sweep with those
weights therefore computes it exactly.

On the frequency plane (:func:`frequency_signed_distance`) coordinates are
the centered frequencies, without wrap-around.  On an even-sized axis the
Nyquist bin sits at both ends of the centered range, so the sweep runs on a
grid extended by that duplicate line and each bin keeps the smaller of its
two values.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .voronoi import region_boundary

SQRT2 = np.sqrt(2.0)


def quasi_euclidean(k, l, p, q):
    """Quasi-Euclidean distance between ``(k, l)`` and ``(p, q)``; broadcasts over arrays."""
    a = np.abs(np.subtract(p, k))
    b = np.abs(np.subtract(q, l))
    return np.where(a >= b, (SQRT2 - 1) * b + a, (SQRT2 - 1) * a + b)


def default_norm_factor(dims):
    return 2 * np.pi / max(dims)


@dataclass
class SignedDistanceMap:
    """Signed distance in radians: positive inside, zero on the edge, negative outside."""

    values: np.ndarray
    cell: np.ndarray
    norm_factor: float

    @property
    def whole_grid(self) -> bool:
        return bool(self.cell.all())


def sentinel(dims, norm_factor):
    """Value standing in for +inf when a region covers the whole grid."""
    h, w = dims
    return norm_factor * (h + w)


def _extended_axis(n):
    # bin index of every position of the centered (Nyquist-duplicated) axis
    half = n // 2
    lo = -half if n % 2 == 0 else -(n - 1) // 2
    return np.arange(lo, half + 1) % n


def _validate(cell, boundary):
    cell = np.asarray(cell, dtype=bool)
    boundary = np.asarray(boundary, dtype=bool)
    if cell.ndim != 2 or cell.shape != boundary.shape:
        raise InvalidInputError("cell and boundary must be 2D masks of the same shape")
    if not cell.any():
        raise InvalidInputError("empty cell")
    if np.any(boundary & ~cell):
        raise InvalidInputError("boundary must be contained in the cell")
    if not boundary.any() and not cell.all():
        raise InvalidInputError("empty boundary for a cell that is not the whole grid")
    return cell, boundary


def _sign(dist, cell, norm_factor):
    return np.where(cell, dist, -dist) * norm_factor


def chamfer(sources) -> np.ndarray:
    """Two-pass 3x3 chamfer transform (weights 1, sqrt 2) from a boolean source mask.

    Non-periodic.  Returns grid-unit distances; ``inf`` where no source exists.
    Leading axes are treated as a batch; the sweep runs over the last two.
    """
    d = np.where(sources, 0.0, np.inf)
    n_rows, n_cols = d.shape[-2:]
    j = np.arange(n_cols, dtype=float)

    def from_row(src):
        cand = src + 1.0
        cand[..., 1:] = np.minimum(cand[..., 1:], src[..., :-1] + SQRT2)
        cand[..., :-1] = np.minimum(cand[..., :-1], src[..., 1:] + SQRT2)
        return cand

    for i in range(n_rows):
        row = d[..., i, :]
        if i > 0:
            np.minimum(row, from_row(d[..., i - 1, :]), out=row)
        # left-to-right: d[j] = min_{k<=j} d[k] + (j - k)
        np.minimum(row, j + np.minimum.accumulate(row - j, axis=-1), out=row)

    for i in range(n_rows - 1, -1, -1):
        row = d[..., i, :]
        if i < n_rows - 1:
            np.minimum(row, from_row(d[..., i + 1, :]), out=row)
        # right-to-left: d[j] = min_{k>=j} d[k] + (k - j)
        back = np.flip(np.minimum.accumulate(np.flip(row + j, axis=-1), axis=-1), axis=-1)
        np.minimum(row, back - j, out=row)
    return d


def signed_distance(cell, boundary, norm_factor=None) -> SignedDistanceMap:
    """Signed distance map of a raster region given its boundary bins (chamfer sweep).

    Distances are measured in the array's own row/column coordinates, without
    wrap-around.
    """
    cell, boundary = _validate(cell, boundary)
    if norm_factor is None:
        norm_factor = default_norm_factor(cell.shape)
    if cell.all():
        return SignedDistanceMap(np.full(cell.shape, sentinel(cell.shape, norm_factor)), cell, norm_factor)
    return SignedDistanceMap(_sign(chamfer(boundary), cell, norm_factor), cell, norm_factor)


def brute_force_signed_distance(cell, boundary, norm_factor=None) -> SignedDistanceMap:
    """Reference implementation of :func:`signed_distance`: explicit minimum over boundary bins."""
    cell, boundary = _validate(cell, boundary)
    h, w = cell.shape
    if norm_factor is None:
        norm_factor = default_norm_factor(cell.shape)
    if cell.all():
        return SignedDistanceMap(np.full(cell.shape, sentinel(cell.shape, norm_factor)), cell, norm_factor)
    k = np.arange(h)[:, None]
    l = np.arange(w)[None, :]
    dist = np.full(cell.shape, np.inf)
    for p, q in zip(*np.nonzero(boundary)):
        dist = np.minimum(dist, quasi_euclidean(k, l, p, q))
    return SignedDistanceMap(_sign(dist, cell, norm_factor), cell, norm_factor)


def frequency_signed_distance(cell, boundary, norm_factor=None, method=signed_distance) -> SignedDistanceMap:
    """Signed distance of a region of the (unshifted) frequency plane.

    The region is laid out on centered frequency coordinates, with the
    Nyquist line of an even axis present at both ends, ``method`` is applied
    there, and each bin keeps its smallest distance.  The resulting metric is
    invariant under the mate map.
    """
    cell, boundary = _validate(cell, boundary)
    if norm_factor is None:
        norm_factor = default_norm_factor(cell.shape)
    if cell.all():
        return SignedDistanceMap(np.full(cell.shape, sentinel(cell.shape, norm_factor)), cell, norm_factor)
    rows = _extended_axis(cell.shape[0])
    cols = _extended_axis(cell.shape[1])
    ext = method(cell[np.ix_(rows, cols)], boundary[np.ix_(rows, cols)], norm_factor)
    dist = np.full(cell.shape, np.inf)
    np.minimum.at(dist, (rows[:, None], cols[None, :]), np.abs(ext.values))
    return SignedDistanceMap(np.where(cell, dist, -dist), cell, norm_factor)


def frequency_signed_distances(cells, norm_factor=None, batch=32):
    """:func:`frequency_signed_distance` for many regions at once, boundaries derived.

    Each region's boundary is its inner periodic 4-neighbour boundary.  The
    chamfer sweeps of up to ``batch`` regions run together.
    """
    cells = [np.asarray(c, dtype=bool) for c in cells]
    if not cells:
        return []
    dims = cells[0].shape
    if norm_factor is None:
        norm_factor = default_norm_factor(dims)
    rows = _extended_axis(dims[0])
    cols = _extended_axis(dims[1])
    out = [None] * len(cells)
    todo = []
    for i, cell in enumerate(cells):
        boundary = region_boundary(cell)
        _validate(cell, boundary)
        if cell.all():
            out[i] = SignedDistanceMap(np.full(dims, sentinel(dims, norm_factor)), cell, norm_factor)
        else:
            todo.append((i, boundary))
    for start in range(0, len(todo), batch):
        chunk = todo[start:start + batch]
        ext = chamfer(np.stack([b[np.ix_(rows, cols)] for _, b in chunk]))
        for (i, _), e in zip(chunk, ext):
            dist = np.full(dims, np.inf)
            np.minimum.at(dist, (rows[:, None], cols[None, :]), e)
            out[i] = SignedDistanceMap(np.where(cells[i], dist, -dist) * norm_factor, cells[i], norm_factor)
    return out
