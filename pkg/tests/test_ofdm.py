import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowres_precoding.channel import TapChannel, apply_channel, draw_rayleigh, frequency_response
from lowres_precoding.ofdm import OfdmFrame, constellation, draw_data, from_time, to_time

NAMES = ["qpsk", "16qam", "64qam", "4psk", "8psk", "16psk", "32psk"]


def direct_idft(freq):
    t_f = freq.shape[0]
    m = np.arange(t_f)
    kernel = np.exp(2j * np.pi * np.outer(m, m) / t_f) / t_f
    return kernel @ freq


@pytest.mark.parametrize("name", NAMES)
def test_constellation_normalized_zero_mean(name):
    c = constellation(name)
    assert abs(np.mean(np.abs(c.points) ** 2) - 1.0) < 1e-12
    assert abs(np.sum(c.points)) < 1e-12
    assert len(set(np.round(c.points, 12))) == c.size


def test_qpsk_points():
    pts = set(np.round(constellation("qpsk").points * np.sqrt(2), 12))
    assert pts == {1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j}


@pytest.mark.parametrize("name", ["16qam", "64qam", "8psk"])
def test_gray_labels_neighbors_differ_in_one_bit(name):
    c = constellation(name)
    d = np.abs(c.points[:, None] - c.points[None, :])
    np.fill_diagonal(d, np.inf)
    dmin = d.min()
    for i, j in zip(*np.nonzero(np.isclose(d, dmin))):
        assert bin(i ^ j).count("1") == 1


def test_unknown_constellation():
    with pytest.raises(ValueError):
        constellation("12qam")


def test_draw_data_properties():
    q = draw_data(constellation("qpsk"), 4, 100, seed=0)
    assert np.allclose(np.abs(q), 1.0)
    d = draw_data(constellation("16qam"), 16, 256, seed=1)
    assert d.shape == (256, 16)
    big = draw_data(constellation("64qam"), 10, 10**4, seed=2)
    assert abs(np.mean(big)) < 0.02
    assert abs(np.mean(np.abs(big) ** 2) - 1) < 0.02
    assert np.array_equal(draw_data(constellation("16qam"), 3, 5, seed=9),
                          draw_data(constellation("16qam"), 3, 5, seed=9))


def test_dc_tone():
    freq = np.zeros((16, 1), dtype=complex)
    freq[0] = 16
    assert np.allclose(to_time(freq, 0), 1.0)


def test_prefix_is_tail_copy():
    rng = np.random.default_rng(0)
    freq = rng.standard_normal((32, 2)) + 1j * rng.standard_normal((32, 2))
    u = to_time(freq, 3)
    assert u.shape == (35, 2)
    assert np.array_equal(u[0:3], u[32:35])
    assert np.allclose(u[3:], direct_idft(freq), atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), t_f=st.sampled_from([8, 32, 64, 396]), t_c=st.integers(0, 8))
def test_transform_pair_and_parseval(seed, t_f, t_c):
    rng = np.random.default_rng(seed)
    freq = rng.standard_normal((t_f, 3)) + 1j * rng.standard_normal((t_f, 3))
    u = to_time(freq, t_c)
    back = from_time(u, t_f, t_c)
    assert np.max(np.abs(back - freq)) <= 1e-12 * np.max(np.abs(freq))
    core = u[t_c:]
    assert np.isclose(np.sum(np.abs(core) ** 2), np.sum(np.abs(freq) ** 2) / t_f, rtol=1e-12)


def test_non_power_of_two_matches_direct_transform():
    rng = np.random.default_rng(4)
    freq = rng.standard_normal((396, 2)) + 1j * rng.standard_normal((396, 2))
    assert np.max(np.abs(to_time(freq, 0) - direct_idft(freq))) < 1e-10


def test_from_time_errors_and_zero():
    with pytest.raises(ValueError):
        from_time(np.zeros((5, 1)), 4, 2)
    assert np.array_equal(from_time(np.zeros((10, 2)), 8, 2), np.zeros((8, 2)))


def test_prefix_diagonalizes_channel():
    rng = np.random.default_rng(1)
    t_f, t_c, L = 32, 3, 4
    ch = draw_rayleigh(1, 1, L, seed=rng)
    freq = rng.standard_normal((t_f, 1)) + 1j * rng.standard_normal((t_f, 1))
    y = apply_channel(ch, to_time(freq, t_c))
    yf = from_time(y, t_f, t_c)
    hf = frequency_response(ch, t_f).per_subcarrier[:, 0, 0]
    assert np.max(np.abs(yf[:, 0] - hf * freq[:, 0])) < 1e-10


def test_frame_from_freq():
    freq = draw_data(constellation("qpsk"), 2, 16, seed=0)
    fr = OfdmFrame.from_freq(freq, 4)
    assert (fr.t_f, fr.n_slots, fr.n_ue, fr.t_c) == (16, 20, 2, 4)
    one = OfdmFrame.from_freq(freq[:, 0], 0)
    assert one.freq.shape == (16, 1)
