import numpy as np
import pytest

from evwt import (
    Mode,
    Shape,
    ToySpec,
    default_toy_spec,
    detect_seeds,
    forward_dft,
    local_maxima,
    magnitude,
    make_pure_tone,
    make_toy_image,
)
from evwt.errors import InvalidInputError
from evwt.transform import decompose


def direct_dft_at(img, k, l):
    h, w = img.shape
    r = np.arange(h)[:, None]
    c = np.arange(w)[None, :]
    return np.sum(img * np.exp(-2j * np.pi * (k * r / h + l * c / w)))


def test_tone_peaks():
    img = make_pure_tone((64, 64), (0, 8), 1.0)
    spec = forward_dft(img)
    assert abs(direct_dft_at(img, 0, 8)) == pytest.approx(64 * 64 / 2)
    assert abs(direct_dft_at(img, 0, 56)) == pytest.approx(64 * 64 / 2)
    support = set(zip(*np.nonzero(np.abs(spec) > 1e-8)))
    assert support == {(0, 8), (0, 56)}


def test_zero_amplitude():
    assert not make_pure_tone((16, 16), (2, 3), 0.0).any()


def test_tones_add_linearly():
    a = make_pure_tone((32, 32), (2, 5), 1.0)
    b = make_pure_tone((32, 32), (7, -3), 0.5)
    np.testing.assert_allclose(forward_dft(a + b), forward_dft(a) + forward_dft(b), atol=1e-10)


@pytest.mark.parametrize("freq", [(16, 0), (0, -16), (20, 3)])
def test_nyquist_rejected(freq):
    with pytest.raises(InvalidInputError):
        make_pure_tone((32, 32), freq)


def test_unknown_shape_rejected():
    with pytest.raises(InvalidInputError):
        make_toy_image(ToySpec((16, 16), (), (Shape("triangle", (8, 8), (2, 2), 1.0),)))


def test_deterministic():
    assert make_toy_image().tobytes() == make_toy_image().tobytes()


def test_objects_are_drawn():
    spec = ToySpec((32, 32), (), (Shape("rectangle", (10, 10), (2, 3), 1.5), Shape("ellipse", (22, 20), (3, 2), 0.5)))
    img = make_toy_image(spec)
    assert img[10, 10] == 1.5 and img[12, 13] == 1.5 and img[13, 10] == 0
    assert img[22, 20] == 0.5 and img[25, 20] == 0.5 and img[22, 23] == 0
    assert img.sum() == pytest.approx(1.5 * 5 * 7 + 0.5 * np.sum(
        ((np.arange(32)[:, None] - 22) / 3) ** 2 + ((np.arange(32)[None, :] - 20) / 2) ** 2 <= 1))


def test_mode_bins_are_strict_maxima(toy_image):
    maxima = set(local_maxima(magnitude(forward_dft(toy_image))))
    h, w = toy_image.shape
    for m in default_toy_spec().modes:
        k, l = int(m.freq[0]) % h, int(m.freq[1]) % w
        assert (k, l) in maxima
        assert ((-k) % h, (-l) % w) in maxima


def test_default_toy_seed_pairs(toy_decomposition):
    seeds = toy_decomposition.seeds.seeds
    non_dc = [s for s in seeds if s != (0, 0)]
    assert len(non_dc) // 2 >= 4
    for m in default_toy_spec().modes:
        assert (int(m.freq[0]), int(m.freq[1])) in seeds


def test_objects_only_energy_stays_near_dc():
    spec = default_toy_spec()
    img = make_toy_image(ToySpec(spec.dims, (), spec.objects))
    dec = decompose(img)
    energy = np.array([np.sum(b**2) for b in dec.bands])
    assert dec.bank.filters[0].is_scaling
    assert energy.argmax() == 0
    assert energy[0] >= 0.9 * energy.sum()


def test_modes_only_spec():
    spec = ToySpec((64, 64), (Mode(1.0, (5, 3)), Mode(0.5, (-4, 9), 0.3)))
    img = make_toy_image(spec)
    expected = make_pure_tone((64, 64), (5, 3), 1.0) + make_pure_tone((64, 64), (-4, 9), 0.5, 0.3)
    np.testing.assert_allclose(img, expected, atol=1e-15)
