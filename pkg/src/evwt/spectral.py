"""Frequency-plane bookkeeping.

Spectra are always stored in unshifted DFT order, bin ``(0, 0)`` being DC.
The forward transform is unnormalized and the inverse carries the
``1 / (H * W)`` factor, so ``inverse_dft(forward_dft(f)) == f``.

The *mate* of a bin ``(k, l)`` is ``(-k mod H, -l mod W)``: for a real image
the spectrum value at the mate is the complex conjugate of the value at
``(k, l)``.
"""
import warnings

import numpy as np

from .errors import InvalidInputError

#: Relative imaginary residue tolerated when returning to the image domain.
IMAG_TOL = 1e-9


def _as_grid(a, dtype=None):
    a = np.asarray(a, dtype=dtype)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a 2D array, got shape {a.shape}")
    if a.size == 0:
        raise InvalidInputError("zero-sized grid")
    return a


def forward_dft(img):
    """Unnormalized 2D DFT of a real image.

    The FFT output is only conjugate-symmetric up to round-off; averaging it
    with its conjugated mate makes the symmetry exact, which keeps the
    imaginary residue of every symmetric band proportional to that band's own
    energy rather than to the whole spectrum's.
    """
    img = _as_grid(img, dtype=float)
    if not np.all(np.isfinite(img)):
        raise InvalidInputError("image contains non-finite values")
    spec = np.fft.fft2(img)
    return 0.5 * (spec + np.conj(mated(spec)))


def imag_ratio(z):
    """Return ``max|Im z| / max|Re z|`` (0 when both vanish)."""
    im = np.max(np.abs(z.imag)) if np.iscomplexobj(z) else 0.0
    re = np.max(np.abs(np.real(z)))
    if im == 0.0:
        return 0.0
    if re == 0.0:
        return np.inf
    return float(im / re)


def inverse_dft(spec, return_imag_ratio=False):
    """Inverse 2D DFT, returning the real part.

    The imaginary residue is measured before it is discarded; if it exceeds
    ``IMAG_TOL`` relative to the real part a :class:`RuntimeWarning` is
    issued.  Pass ``return_imag_ratio=True`` to also get the measured ratio.
    """
    spec = _as_grid(spec, dtype=complex)
    z = np.fft.ifft2(spec)
    ratio = imag_ratio(z)
    if ratio > IMAG_TOL:
        warnings.warn(
            f"inverse DFT has imaginary residue {ratio:.3e} relative to real part",
            RuntimeWarning,
            stacklevel=2,
        )
    out = np.ascontiguousarray(z.real)
    if return_imag_ratio:
        return out, ratio
    return out


def magnitude(spec):
    return np.abs(np.asarray(spec))


def mate(idx, dims):
    """Centrally symmetric bin of ``idx`` on a grid of shape ``dims``."""
    k, l = idx
    h, w = dims
    return ((h - k) % h, (w - l) % w)


def mate_map(dims):
    """Row and column index arrays such that ``a[mate_map(a.shape)]`` is ``a`` mated."""
    h, w = dims
    rows = (-np.arange(h)) % h
    cols = (-np.arange(w)) % w
    return np.ix_(rows, cols)


def mated(a):
    """Return ``a`` re-indexed by the mate map: ``out[k, l] = a[mate(k, l)]``."""
    return a[mate_map(a.shape)]


def centered_coords(n):
    """Signed frequency representative of each bin along an axis of size ``n``.

    Values lie in ``(-n/2, n/2]``.
    """
    k = np.arange(n)
    return np.where(k <= n // 2, k, k - n)


def is_self_mate(idx, dims):
    return tuple(mate(idx, dims)) == tuple(idx)


def canonical_mask(dims):
    """Boolean mask choosing one bin of every mate pair, plus all self-mate bins.

    A bin is canonical when its centered coordinates are lexicographically
    greater than or equal to those of its mate.
    """
    h, w = dims
    r = centered_coords(h)[:, None]
    c = centered_coords(w)[None, :]
    rm = centered_coords(h)[(-np.arange(h)) % h][:, None]
    cm = centered_coords(w)[(-np.arange(w)) % w][None, :]
    return (r > rm) | ((r == rm) & (c >= cm))


def self_mate_mask(dims):
    h, w = dims
    rows = np.arange(h) == (-np.arange(h)) % h
    cols = np.arange(w) == (-np.arange(w)) % w
    return rows[:, None] & cols[None, :]


def centered_view(a):
    """DC-centered copy of an unshifted spectrum-domain array (visualization only)."""
    return np.fft.fftshift(a)
