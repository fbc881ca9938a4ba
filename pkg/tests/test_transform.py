import warnings

import numpy as np
import pytest

from evwt import (
    DetectionError,
    EvwParams,
    InvalidInputError,
    decompose,
    decompose_with_bank,
    make_pure_tone,
    reconstruct,
)
from evwt.filterbank import build_bank
from evwt.spectral import forward_dft
from evwt.transform import EvwDecomposition
from evwt.voronoi import label_grid


def rel_err(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_pure_tone_band_holds_the_tone():
    img = make_pure_tone((64, 64), (0, 8), 1.0)
    dec = decompose(img)
    assert len(dec.bands) == 2
    assert dec.bank.filters[0].is_scaling
    non_dc = [np.sum(b**2) for i, b in enumerate(dec.bands) if i != 0]
    assert max(non_dc) >= 0.99 * sum(non_dc)
    assert rel_err(dec.bands[1], img) < 1e-12


def test_zero_image_detection_error():
    with pytest.raises(DetectionError):
        decompose(np.zeros((16, 16)))


def test_constant_image_single_band():
    img = np.full((16, 16), 2.0)
    dec = decompose(img)
    assert len(dec.bands) == 1
    np.testing.assert_allclose(dec.bands[0], img, rtol=1e-12)


@pytest.mark.parametrize("shape", [(4, 16), (16, 7)])
def test_small_images_rejected(shape):
    with pytest.raises(InvalidInputError):
        decompose(np.ones(shape))


def test_non_finite_rejected():
    img = np.ones((16, 16))
    img[3, 3] = np.nan
    with pytest.raises(InvalidInputError):
        decompose(img)


def test_deterministic(rng):
    img = rng.standard_normal((32, 40))
    a, b = decompose(img), decompose(img)
    assert len(a.bands) == len(b.bands)
    for x, y in zip(a.bands, b.bands):
        np.testing.assert_array_equal(x, y)


@pytest.mark.parametrize("shape", [(64, 64), (48, 80), (33, 21)])
def test_perfect_reconstruction(rng, shape):
    for _ in range(5):
        img = rng.standard_normal(shape)
        assert rel_err(reconstruct(decompose(img)), img) <= 1e-9


def test_zero_bands_reconstruct_to_zero(rng):
    dec = decompose(rng.standard_normal((32, 32)))
    zero = EvwDecomposition([np.zeros_like(b) for b in dec.bands], dec.bank)
    assert not reconstruct(zero).any()


def test_single_cell_bank_reconstructs_band(rng):
    bank = build_bank(label_grid([(0, 0)], (16, 16)))
    band = rng.standard_normal((16, 16))
    out = reconstruct(EvwDecomposition([band], bank))
    np.testing.assert_allclose(out, band, atol=1e-14)


def test_band_count_mismatch(rng):
    dec = decompose(rng.standard_normal((32, 32)))
    with pytest.raises(InvalidInputError):
        reconstruct(EvwDecomposition(dec.bands[:-1], dec.bank))
    bad = list(dec.bands)
    bad[0] = np.zeros((8, 8))
    with pytest.raises(InvalidInputError):
        reconstruct(EvwDecomposition(bad, dec.bank))


def test_fixed_bank_linearity(rng):
    bank = decompose(rng.standard_normal((40, 40))).bank
    f, g = rng.standard_normal((2, 40, 40))
    a, b = 1.7, -0.4
    lhs = decompose_with_bank(a * f + b * g, bank).bands
    rf = decompose_with_bank(f, bank).bands
    rg = decompose_with_bank(g, bank).bands
    for x, y, z in zip(lhs, rf, rg):
        assert np.linalg.norm(x - (a * y + b * z)) <= 1e-10 * np.linalg.norm(x)


def test_reusing_bank_gives_identical_bands(rng):
    img = rng.standard_normal((32, 32))
    dec = decompose(img)
    again = decompose_with_bank(img, dec.bank)
    for x, y in zip(dec.bands, again.bands):
        assert np.abs(x - y).max() <= 1e-12


def test_bank_transfer_reconstructs_other_image(rng):
    bank = decompose(rng.standard_normal((48, 48))).bank
    other = rng.standard_normal((48, 48))
    assert rel_err(reconstruct(decompose_with_bank(other, bank)), other) <= 1e-9
    with pytest.raises(InvalidInputError):
        decompose_with_bank(np.ones((40, 48)), bank)


def test_frame_energy_bounds(rng):
    for _ in range(5):
        img = rng.standard_normal((32, 48))
        dec = decompose(img)
        a, b = dec.bank.frame_bounds
        spec = forward_dft(img)
        total = sum(np.sum(np.abs(spec * f.mask) ** 2) for f in dec.bank.filters) / img.size
        norm2 = np.sum(img**2)
        assert a * norm2 * (1 - 1e-12) <= total <= b * norm2 * (1 + 1e-12)


def test_bands_are_real(rng):
    for _ in range(5):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            dec = decompose(rng.standard_normal((32, 32)))
        assert max(dec.imag_ratios) <= 1e-9


def test_explicit_seeds_are_symmetrized(rng):
    img = rng.standard_normal((32, 32))
    dec = decompose(img, seeds=[(0, 0), (3, 5)])
    assert set(dec.seeds.seeds) == {(0, 0), (3, 5), (29, 27)}
    assert len(dec.bands) == 2


def test_params_forwarded(rng):
    img = rng.standard_normal((32, 32))
    dec = decompose(img, EvwParams(tau=0.07))
    assert dec.bank.tau == 0.07
