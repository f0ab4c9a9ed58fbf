"""Frequency-selective Rayleigh downlink channel with two equivalent paths.

The channel is an L-tap impulse response with i.i.d. CN(0, 1/L) entries, so
the per-subcarrier responses have unit average energy. It can be applied
either per subcarrier in the frequency domain (fast path) or as a cyclic-
prefixed linear convolution in the time domain (reference path); with the
unitary transform convention of :mod:`cesim.transforms` the two agree to
machine precision.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .transforms import to_freq

_HEADER = struct.Struct("<4I")  # n_tx, n_ue, n_fft, n_taps


@dataclass(frozen=True)
class ChannelRealization:
    """taps: (L, U, B) impulse response; freq: (N, U, B) subcarrier responses."""

    taps: np.ndarray
    freq: np.ndarray

    @property
    def n_taps(self) -> int:
        return self.taps.shape[0]

    @property
    def n_ue(self) -> int:
        return self.taps.shape[1]

    @property
    def n_tx(self) -> int:
        return self.taps.shape[2]

    @property
    def n_fft(self) -> int:
        return self.freq.shape[0]


def _freq_response(taps: np.ndarray, n_fft: int) -> np.ndarray:
    # Unnormalized forward DFT of the zero-padded taps along the delay axis.
    return np.fft.fft(taps, n=n_fft, axis=0)


def draw_channel(rng: np.random.Generator, n_ue: int, n_tx: int, n_taps: int,
                 n_fft: int) -> ChannelRealization:
    shape = (n_taps, n_ue, n_tx)
    taps = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    taps *= np.sqrt(1.0 / (2 * n_taps))
    return ChannelRealization(taps=taps, freq=_freq_response(taps, n_fft))


def draw_noise(rng: np.random.Generator, n_ue: int, n_fft: int,
               noise_var: float) -> np.ndarray:
    """Time-domain CN(0, noise_var) receive noise, shape (U, N)."""
    w = rng.standard_normal((n_ue, n_fft)) + 1j * rng.standard_normal((n_ue, n_fft))
    return w * np.sqrt(noise_var / 2.0)


def apply_downlink_freq(ch: ChannelRealization, x_freq: np.ndarray,
                        noise_time: np.ndarray | None = None) -> np.ndarray:
    """Per-subcarrier product y_k = H_k x_k, plus transformed noise if given."""
    y = np.einsum("kub,bk->uk", ch.freq, x_freq)
    if noise_time is not None:
        y = y + to_freq(noise_time)
    return y


def apply_downlink_time(ch: ChannelRealization, x_time: np.ndarray,
                        noise_time: np.ndarray | None = None) -> np.ndarray:
    """Cyclic-prefixed linear convolution, prefix stripped at the receiver.

    Prefix length is n_taps - 1, exactly long enough to make the link
    circular over the n_fft retained samples.
    """
    n_fft = x_time.shape[-1]
    cp = ch.n_taps - 1
    x_cp = np.concatenate([x_time[:, n_fft - cp:], x_time], axis=1) if cp else x_time
    y = np.zeros((ch.n_ue, n_fft), dtype=np.complex128)
    for tap in range(ch.n_taps):
        y += ch.taps[tap] @ x_cp[:, cp - tap:cp - tap + n_fft]
    if noise_time is not None:
        y = y + noise_time
    return y


def save_channel(path: str, ch: ChannelRealization) -> None:
    """Binary dump: little-endian header (B, U, N, L) then complex64 taps."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(ch.n_tx, ch.n_ue, ch.n_fft, ch.n_taps))
        fh.write(np.ascontiguousarray(ch.taps, dtype=np.complex64).tobytes())


def load_channel(path: str) -> ChannelRealization:
    with open(path, "rb") as fh:
        n_tx, n_ue, n_fft, n_taps = _HEADER.unpack(fh.read(_HEADER.size))
        raw = np.frombuffer(fh.read(), dtype=np.complex64)
    if raw.size != n_taps * n_ue * n_tx:
        raise ValueError(f"channel file {path} is truncated")
    taps = raw.reshape(n_taps, n_ue, n_tx).astype(np.complex128)
    return ChannelRealization(taps=taps, freq=_freq_response(taps, n_fft))
