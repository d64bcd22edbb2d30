import numpy as np
import pytest

from ambc.ofdm import (Constellation, bits_to_symbols, detect_grid,
                       gen_frame, qam4, qam_detect, symbols_to_bits)


def test_qam4_points():
    const = qam4()
    assert np.allclose(np.abs(const.points) ** 2, 2.0)
    assert np.isclose(const.points.mean(), 0.0)
    assert const.points.size == 4


def test_constellation_rejects_nonconstant_modulus():
    with pytest.raises(ValueError):
        Constellation(points=np.array([1 + 0j, -1 + 0j, 3 + 0j, -3 + 0j]),
                      symbol_energy=1.0)


def test_gen_frame_entries_in_constellation():
    const = qam4()
    frame = gen_frame(32, 100, const, np.random.default_rng(0))
    assert frame.shape == (32, 100)
    assert np.all(np.isin(frame, const.points))
    assert np.allclose(np.abs(frame) ** 2, 2.0)


def test_gen_frame_single_symbol():
    frame = gen_frame(1, 1, qam4(), np.random.default_rng(1))
    assert frame.shape == (1, 1)
    assert frame[0, 0] in qam4().points


def test_gen_frame_zero_mean():
    n = 10 ** 5
    frame = gen_frame(n, 1, qam4(), np.random.default_rng(2))
    # per-component std is 1, so the complex mean has se sqrt(2/n)
    assert abs(frame.mean()) < 3 * np.sqrt(2.0 / n)


def test_qam_detect_nearest_point():
    assert qam_detect(2 + 2j, 1 + 0j, qam4()) == 1 + 1j


def test_qam_detect_noise_free_round_trip():
    const = qam4()
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = rng.choice(const.points)
        gain = rng.standard_normal() + 1j * rng.standard_normal()
        if gain == 0:
            continue
        assert qam_detect(gain * x, gain, const) == x


def test_qam_detect_zero_gain_returns_first_point():
    const = qam4()
    assert qam_detect(5 - 3j, 0j, const) == const.points[0]


def test_qam_detect_matches_bruteforce():
    const = qam4()
    rng = np.random.default_rng(4)
    for _ in range(500):
        y = rng.standard_normal() + 1j * rng.standard_normal()
        gain = rng.standard_normal() + 1j * rng.standard_normal()
        best = min(const.points, key=lambda x: abs(y - gain * x) ** 2)
        assert qam_detect(y, gain, const) == best


def test_detect_grid_matches_scalar():
    const = qam4()
    rng = np.random.default_rng(5)
    y = rng.standard_normal((8, 6)) + 1j * rng.standard_normal((8, 6))
    gain = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    out = detect_grid(y, gain, const)
    for l in range(8):
        for m in range(6):
            assert out[l, m] == qam_detect(y[l, m], gain[l], const)


def test_bit_mapping_round_trip():
    const = qam4()
    bits = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])
    symbols = bits_to_symbols(bits, const)
    assert np.array_equal(symbols_to_bits(symbols, const), bits)
    # Gray property: adjacent quadrants (rotation by 90 deg) differ in one bit
    rotated = symbols * 1j
    diff = np.sum(symbols_to_bits(rotated, const) != bits, axis=1)
    assert np.all(diff == 1)
