"""Tests for the frequency-selective channel and its two application paths."""

import numpy as np
import pytest

from cesim.channel import (ChannelRealization, apply_downlink_freq,
                           apply_downlink_time, draw_channel, draw_noise,
                           load_channel, save_channel)
from cesim.transforms import to_freq


def test_shapes_and_freq_response():
    """The per-subcarrier response is the unnormalized DFT of the taps."""
    ch = draw_channel(np.random.default_rng(0), n_ue=3, n_tx=5, n_taps=4, n_fft=16)
    assert ch.taps.shape == (4, 3, 5)
    assert ch.freq.shape == (16, 3, 5)
    assert (ch.n_taps, ch.n_ue, ch.n_tx, ch.n_fft) == (4, 3, 5, 16)
    k = np.arange(16)[:, None, None]
    expected = sum(ch.taps[tap] * np.exp(-2j * np.pi * k * tap / 16)
                   for tap in range(4))
    np.testing.assert_allclose(ch.freq, expected, atol=1e-12)


def test_tap_statistics():
    """Taps are CN(0, 1/L): unit average energy per (user, antenna) link."""
    ch = draw_channel(np.random.default_rng(1), n_ue=40, n_tx=50, n_taps=4, n_fft=8)
    link_energy = np.sum(np.abs(ch.taps) ** 2, axis=0)
    assert np.mean(link_energy) == pytest.approx(1.0, rel=0.05)
    assert np.mean(ch.taps.real) == pytest.approx(0.0, abs=0.01)
    # Per-subcarrier responses inherit unit average energy.
    assert np.mean(np.abs(ch.freq) ** 2) == pytest.approx(1.0, rel=0.05)


def test_paths_agree_noiseless():
    """Cyclic-prefix time path equals the per-subcarrier frequency path."""
    rng = np.random.default_rng(2)
    for _ in range(25):
        ch = draw_channel(rng, n_ue=2, n_tx=4, n_taps=3, n_fft=32)
        x = rng.standard_normal((4, 32)) + 1j * rng.standard_normal((4, 32))
        y_time = apply_downlink_time(ch, x)
        y_freq = apply_downlink_freq(ch, to_freq(x))
        scale = np.max(np.abs(y_freq))
        assert np.max(np.abs(to_freq(y_time) - y_freq)) / scale < 1e-12


def test_paths_agree_with_shared_noise():
    """With one shared time-domain noise draw the two paths still agree."""
    rng = np.random.default_rng(3)
    ch = draw_channel(rng, n_ue=2, n_tx=4, n_taps=4, n_fft=64)
    x = rng.standard_normal((4, 64)) + 1j * rng.standard_normal((4, 64))
    w = draw_noise(rng, n_ue=2, n_fft=64, noise_var=0.3)
    y_time = apply_downlink_time(ch, x, w)
    y_freq = apply_downlink_freq(ch, to_freq(x), w)
    np.testing.assert_allclose(to_freq(y_time), y_freq, atol=1e-11)


def test_single_tap_is_flat():
    """L = 1 collapses to a frequency-flat channel: same matrix every carrier."""
    ch = draw_channel(np.random.default_rng(4), n_ue=2, n_tx=3, n_taps=1, n_fft=8)
    for k in range(8):
        np.testing.assert_allclose(ch.freq[k], ch.taps[0], atol=1e-13)


def test_noise_variance():
    w = draw_noise(np.random.default_rng(5), n_ue=200, n_fft=256, noise_var=0.25)
    assert np.mean(np.abs(w) ** 2) == pytest.approx(0.25, rel=0.02)
    assert np.mean(np.abs(w.real) ** 2) == pytest.approx(0.125, rel=0.03)


def test_save_load_round_trip(tmp_path):
    ch = draw_channel(np.random.default_rng(6), n_ue=2, n_tx=4, n_taps=3, n_fft=16)
    path = str(tmp_path / "ch.bin")
    save_channel(path, ch)
    loaded = load_channel(path)
    assert loaded.n_fft == 16
    np.testing.assert_allclose(loaded.taps, ch.taps, atol=1e-6)
    np.testing.assert_allclose(loaded.freq, ch.freq, atol=1e-4)


def test_load_rejects_truncated_file(tmp_path):
    ch = draw_channel(np.random.default_rng(7), n_ue=2, n_tx=2, n_taps=2, n_fft=8)
    path = str(tmp_path / "ch.bin")
    save_channel(path, ch)
    data = open(path, "rb").read()
    with open(path, "wb") as fh:
        fh.write(data[:-8])
    with pytest.raises(ValueError):
        load_channel(path)


def test_realization_direct_construction():
    taps = np.zeros((2, 1, 1), dtype=complex)
    taps[0, 0, 0] = 1.0
    ch = ChannelRealization(taps=taps, freq=np.ones((4, 1, 1), dtype=complex))
    assert ch.n_taps == 2 and ch.n_fft == 4
