import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evwt.errors import DetectionError, InvalidInputError
from evwt.scalespace import (
    ScaleSpaceParams,
    detect_seeds,
    gaussian_kernel,
    gaussian_smooth,
    local_maxima,
    otsu_threshold,
    track_maxima,
)
from evwt.spectral import forward_dft, magnitude, mate
from evwt.synth import make_pure_tone


def brute_force_otsu(values):
    """Exhaustive between-class variance maximiser, exact rational arithmetic."""
    lo, hi = min(values), max(values)
    if lo == hi:
        return lo - 1
    n = len(values)
    best_t, best = None, None
    for t in range(lo, hi):
        c0 = [v for v in values if v <= t]
        c1 = [v for v in values if v > t]
        if not c0 or not c1:
            continue
        w0, w1 = Fraction(len(c0), n), Fraction(len(c1), n)
        mu0, mu1 = Fraction(sum(c0), len(c0)), Fraction(sum(c1), len(c1))
        var = w0 * w1 * (mu0 - mu1) ** 2
        if best is None or var > best:
            best, best_t = var, t
    return best_t


def direct_periodic_convolution(img, kernel):
    h, w = img.shape
    r = len(kernel) // 2
    out = np.zeros_like(img)
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for a in range(-r, r + 1):
                for b in range(-r, r + 1):
                    acc += kernel[a + r] * kernel[b + r] * img[(i + a) % h, (j + b) % w]
            out[i, j] = acc
    return out


def exhaustive_maxima(a, neighborhood=8):
    h, w = a.shape
    out = []
    for i in range(h):
        for j in range(w):
            nbrs = []
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if (di, dj) == (0, 0) or (neighborhood == 4 and di and dj):
                        continue
                    nbrs.append(a[(i + di) % h, (j + dj) % w])
            if all(a[i, j] > v for v in nbrs):
                out.append((i, j))
    return out


# --- gaussian_smooth -------------------------------------------------------

def test_sigma_zero_is_identity(rng):
    a = rng.random((9, 11))
    np.testing.assert_array_equal(gaussian_smooth(a, 0.0), a)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 3.7, 20.0])
def test_constant_stays_constant(sigma):
    out = gaussian_smooth(np.full((12, 10), 3.25), sigma)
    np.testing.assert_allclose(out, 3.25, rtol=1e-14)


def test_impulse_matches_direct_convolution():
    img = np.zeros((32, 32))
    img[5, 7] = 1.0
    k = gaussian_kernel(1.0)
    expected = direct_periodic_convolution(img, k)
    out = gaussian_smooth(img, 1.0)
    np.testing.assert_allclose(out, expected, atol=1e-15)
    assert out[5, 7] == pytest.approx(k[len(k) // 2] ** 2)


def test_kernel_wider_than_grid_wraps(rng):
    img = rng.random((6, 5))
    k = gaussian_kernel(3.0)  # 25 taps on a 6x5 grid
    np.testing.assert_allclose(gaussian_smooth(img, 3.0), direct_periodic_convolution(img, k), atol=1e-14)


def test_negative_sigma_rejected():
    with pytest.raises(InvalidInputError):
        gaussian_smooth(np.ones((4, 4)), -1)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10.0), st.integers(0, 2**31))
def test_smoothing_preserves_mass_and_sign(sigma, seed):
    a = np.random.default_rng(seed).random((16, 20)) ** 3
    out = gaussian_smooth(a, sigma)
    assert out.sum() == pytest.approx(a.sum(), rel=1e-9)
    assert out.min() >= 0


# --- local_maxima -----------------------------------------------------------

def test_constant_has_no_maxima():
    assert local_maxima(np.ones((5, 5))) == []


def test_single_impulse():
    a = np.zeros((6, 6))
    a[2, 3] = 1
    assert local_maxima(a) == [(2, 3)]


def test_two_impulses():
    a = np.zeros((16, 16))
    a[2, 3] = 2
    a[10, 12] = 1
    assert local_maxima(a) == exhaustive_maxima(a) == [(2, 3), (10, 12)]


def test_plateau_is_not_a_maximum():
    a = np.zeros((6, 6))
    a[2, 2] = a[2, 3] = 1
    assert local_maxima(a) == []


@pytest.mark.parametrize("neighborhood", [4, 8])
def test_maxima_match_exhaustive_scan(rng, neighborhood):
    for _ in range(10):
        a = rng.integers(0, 5, size=(9, 13)).astype(float)
        assert local_maxima(a, neighborhood) == exhaustive_maxima(a, neighborhood)


# --- track_maxima -----------------------------------------------------------

def test_impulse_track_spans_all_levels():
    a = np.zeros((32, 32))
    a[3, 4] = 1
    params = ScaleSpaceParams(0.5, 10)
    tracks = track_maxima(a, params)
    assert len(tracks) == 1
    assert tracks[0].origin == (3, 4)
    assert tracks[0].length == params.max_levels + 1


def test_constant_has_no_tracks():
    assert track_maxima(np.ones((16, 16))) == []


def test_bump_outlives_spike():
    h = w = 48
    r = np.arange(h)[:, None]
    c = np.arange(w)[None, :]
    img = 5 * np.exp(-((r - 12) ** 2 + (c - 12) ** 2) / (2 * 4.0**2))
    img[34, 30] += 0.3
    tracks = {t.origin: t.length for t in track_maxima(img, ScaleSpaceParams(0.5, 12))}
    assert tracks[(12, 12)] > tracks[(34, 30)]


def test_track_lengths_bounded_and_counts_recorded(rng):
    params = ScaleSpaceParams(0.5, 6)
    tracks, counts = track_maxima(rng.random((20, 20)), params, return_counts=True)
    assert len(counts) == params.max_levels + 1
    assert counts[0] == len(tracks)
    assert all(1 <= t.length <= params.max_levels + 1 for t in tracks)
    # a level can extend at most as many tracks as it has maxima
    for i in range(1, len(counts)):
        assert sum(t.length > i for t in tracks) <= counts[i]


@pytest.mark.parametrize("img_kind", ["impulse", "bump", "tone"])
def test_maxima_count_non_increasing_on_smooth_inputs(img_kind):
    if img_kind == "impulse":
        a = np.zeros((32, 32))
        a[0, 0] = 1
    elif img_kind == "bump":
        r = np.arange(32)[:, None]
        a = np.exp(-((r - 16) ** 2 + (r.T - 10) ** 2) / 18.0)
    else:
        a = magnitude(forward_dft(make_pure_tone((32, 32), (0, 5))))
        a = np.where(a < 1e-10 * a.max(), 0, a)
    _, counts = track_maxima(a, ScaleSpaceParams(0.5, 8), return_counts=True)
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_default_levels():
    assert ScaleSpaceParams().levels_for((64, 48)) == 12
    assert ScaleSpaceParams(max_levels=5).levels_for((64, 48)) == 5


@pytest.mark.parametrize("kwargs", [{"scale_step": 0}, {"max_levels": 1}, {"neighborhood": 6}])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidInputError):
        ScaleSpaceParams(**kwargs)


# --- otsu -------------------------------------------------------------------

@pytest.mark.parametrize(
    "lengths, expected",
    [([1, 1, 1, 10, 10], 1), ([5, 5, 5, 5], 4), ([1, 2, 8, 9], 2), ([7], 6)],
)
def test_otsu_examples(lengths, expected):
    assert brute_force_otsu(lengths) == expected
    assert otsu_threshold(lengths) == expected


def test_otsu_empty():
    with pytest.raises(InvalidInputError):
        otsu_threshold([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=50))
def test_otsu_matches_brute_force(values):
    assert otsu_threshold(values) == brute_force_otsu(values)


# --- detect_seeds -----------------------------------------------------------

def test_pure_cosine_seeds():
    mag = magnitude(forward_dft(make_pure_tone((64, 64), (0, 8), 1.0)))
    seeds = detect_seeds(mag)
    assert {(0, 8), (0, 56), (0, 0)} <= set(seeds.seeds)


def test_dc_impulse_gives_single_seed():
    mag = np.zeros((32, 32))
    mag[0, 0] = 10.0
    seeds = detect_seeds(mag)
    assert seeds.seeds == [(0, 0)]
    assert seeds.threshold == math.ceil(32 / 4)  # all tracks equal: length - 1


def test_flat_spectrum_fails_cleanly():
    with pytest.raises(DetectionError, match="no meaningful modes"):
        detect_seeds(np.zeros((16, 16)))


def test_negative_magnitude_rejected():
    with pytest.raises(InvalidInputError):
        detect_seeds(-np.ones((8, 8)))


@settings(max_examples=20, deadline=None)
@given(st.integers(8, 40), st.integers(8, 40), st.integers(0, 2**31))
def test_seeds_are_mate_closed_and_persistent(h, w, seed):
    img = np.random.default_rng(seed).standard_normal((h, w))
    out = detect_seeds(magnitude(forward_dft(img)))
    seeds = set(out.seeds)
    assert len(seeds) == len(out.seeds)
    assert all(mate(s, (h, w)) in seeds for s in seeds)
    long_tracks = {t.origin for t in out.all_tracks if t.length > out.threshold}
    assert long_tracks
    # every seed is a persistent track origin, the mate of one, or DC
    assert all(s in long_tracks or mate(s, (h, w)) in long_tracks or s == (0, 0) for s in seeds)
