"""Regularized (Wiener-filter) linear precoder with phase quantization.

Per occupied subcarrier k the unnormalized precoder is
H_k^H (H_k H_k^H + U N0 I)^{-1} s_k; guard carriers transmit nothing. The
scale beta is chosen analytically so the expected time-domain signal energy
over uniform symbols equals the occupied-carrier count, then the time signal
is either transmitted as-is (infinite-resolution reference) or phase
quantized onto the constant-envelope alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .grid import OfdmGrid
from .quantize import PhaseQuantizer
from .transforms import to_time


def _chol_inverse(gram: np.ndarray) -> np.ndarray:
    """Hermitian positive-definite inverse via the Cholesky factor, batched."""
    chol = np.linalg.cholesky(gram)
    eye = np.broadcast_to(np.eye(gram.shape[-1], dtype=gram.dtype), gram.shape)
    inv_chol = np.linalg.solve(chol, eye)
    return np.swapaxes(inv_chol, -1, -2).conj() @ inv_chol


@dataclass(frozen=True)
class WfOutput:
    x_quant: np.ndarray    # (B, N) constant-envelope time signal
    x_unquant: np.ndarray  # (B, N) infinite-resolution time signal
    beta: float            # normalization applied before quantization


def wf_beta_and_filters(ch: ChannelRealization, grid: OfdmGrid,
                        noise_var: float) -> tuple[float, np.ndarray]:
    """Per-carrier filters P_k = H_k^H (H_k H_k^H + U N0 I)^{-1} and beta.

    beta**2 equals the mean of ||P_k||_F^2 over occupied carriers, which
    makes E||to_time(Z)||_F^2 = n_used for unit-energy uniform symbols.
    """
    h_occ = ch.freq[grid.occupied]                      # (S, U, B)
    h_occ_h = np.swapaxes(h_occ, -1, -2).conj()         # (S, B, U)
    gram = h_occ @ h_occ_h
    gram = gram + (ch.n_ue * noise_var) * np.eye(ch.n_ue)
    filters = h_occ_h @ _chol_inverse(gram)             # (S, B, U)
    beta = float(np.sqrt(np.sum(np.abs(filters) ** 2) / grid.n_used))
    return beta, filters


def wf_precode(s_freq: np.ndarray, grid: OfdmGrid, ch: ChannelRealization,
               noise_var: float, quantizer: PhaseQuantizer) -> WfOutput:
    beta, filters = wf_beta_and_filters(ch, grid, noise_var)
    z = np.zeros((ch.n_tx, ch.n_fft), dtype=np.complex128)
    z[:, grid.occupied] = np.einsum("kbu,uk->bk", filters, s_freq[:, grid.occupied]) / beta
    x_unquant = to_time(z)
    return WfOutput(x_quant=quantizer(x_unquant), x_unquant=x_unquant, beta=beta)
