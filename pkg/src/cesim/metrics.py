"""Link metrics and cost accounting: EVM, CCDF, PAR, multiplication counts."""

from __future__ import annotations

import math

import numpy as np

from .grid import OfdmGrid


def evm(s_freq: np.ndarray, y_noiseless_freq: np.ndarray, beta: np.ndarray,
        grid: OfdmGrid) -> np.ndarray:
    """Per-user EVM over occupied carriers against the noiseless channel output.

    EVM_u = sqrt( sum_k |s_u,k - beta_u y_u,k|^2 / sum_k |s_u,k|^2 ).
    """
    s_occ = s_freq[:, grid.occupied]
    y_occ = y_noiseless_freq[:, grid.occupied]
    err = np.sum(np.abs(s_occ - np.asarray(beta)[:, None] * y_occ) ** 2, axis=1)
    ref = np.sum(np.abs(s_occ) ** 2, axis=1)
    return np.sqrt(err / ref)


def par_db(x_time: np.ndarray) -> np.ndarray:
    """Per-row peak-to-average power ratio in dB."""
    x_time = np.atleast_2d(x_time)
    power = np.abs(x_time) ** 2
    return 10.0 * np.log10(power.max(axis=1) / power.mean(axis=1))


def ccdf(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Empirical P[X > x] evaluated at the sorted sample values."""
    s = np.sort(np.asarray(samples).ravel())
    if s.size == 0:
        raise ValueError("ccdf needs at least one sample")
    # Right-continuous: at value v, count strictly greater samples.
    greater = s.size - np.searchsorted(s, s, side="right")
    return s, greater / s.size


def _check_fft_size(n_fft: int) -> int:
    log2n = n_fft.bit_length() - 1
    if n_fft <= 0 or (1 << log2n) != n_fft:
        raise ValueError(f"multiplication counts assume a power-of-two FFT, got {n_fft}")
    return log2n


def mult_count_wf(n_tx: int, n_ue: int, n_used: int, n_fft: int) -> int:
    """Real multiplications for the linear precoder: per-carrier Cholesky
    solves plus one split-radix IDFT per antenna."""
    log2n = _check_fft_size(n_fft)
    per_carrier = (n_ue ** 3 - n_ue) // 3 + n_tx * n_ue ** 2 + 2 * n_ue ** 2
    fft_part = 4 * n_tx * (n_fft * log2n - 3 * n_fft + 4)
    return 2 * n_used * per_carrier + fft_part


def mult_count_dr(n_tx: int, n_ue: int, n_used: int, n_fft: int, n_iter: int) -> int:
    """Real multiplications for the splitting precoder: preprocessing of the
    per-carrier filters plus, per iteration, the filter application and a
    split-radix DFT/IDFT pair with the time-domain clipping."""
    log2n = _check_fft_size(n_fft)
    preproc = 2 * n_used * ((5 * n_ue ** 3 - 2 * n_ue) // 3
                            + 3 * n_tx * n_ue ** 2 + 6 * n_tx * n_ue)
    per_iter = 4 * n_tx * (2 * n_used * n_ue + 2 * n_fft * log2n - 5 * n_fft + 8)
    return preproc + n_iter * per_iter


def dac_rate_bits_per_s(bits_per_sample: float, n_tx: int, sample_rate_hz: float) -> float:
    """Aggregate converter rate: bits per sample per antenna times B times fs."""
    if not math.isfinite(bits_per_sample) or bits_per_sample <= 0:
        raise ValueError("bits_per_sample must be finite and positive")
    return bits_per_sample * n_tx * sample_rate_hz
