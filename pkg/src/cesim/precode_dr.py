"""Douglas-Rachford splitting precoder for the constant-envelope downlink.

The nonconvex constant-envelope constraint is relaxed to a squared max-norm
penalty on the time-domain transmit signal, weighted by B*U*N*N0, and the
resulting convex problem is solved by Douglas-Rachford splitting between

  f(B) = sum over occupied k of ||s_k - H_k b_k||^2    (frequency domain)
  g(B) = penalty on to_time(B)                          (time domain)

The prox of f is per-subcarrier and is applied through the Woodbury-reduced
filters Q_k = H_k^H (H_k H_k^H + I/2)^{-1}: prox_f(v)_k = v_k - Q_k H_k v_k
+ d_k on occupied carriers and the identity on guards. The prox of g clips
time-domain magnitudes (see :mod:`cesim.prox`), with a geometry matched to
the phase resolution: the modulus for p >= 3 or ideal phase, independent
real/imaginary clipping for p = 2, and a purely imaginary signal for p = 1.
After T iterations the time-domain iterate is phase quantized.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .grid import OfdmGrid
from .prox import prox_sq_maxnorm
from .quantize import PhaseQuantizer
from .transforms import to_freq, to_time


class ProxGeometry(enum.Enum):
    CIRCLE = "circle"  # clip complex moduli
    BOX = "box"        # clip real and imaginary parts independently
    LINE = "line"      # zero real parts, clip imaginary parts


def geometry_for_phase_bits(phase_bits: float) -> ProxGeometry:
    """Penalty geometry matching the quantizer's output set."""
    if phase_bits == 1:
        return ProxGeometry.LINE
    if phase_bits == 2:
        return ProxGeometry.BOX
    return ProxGeometry.CIRCLE


def _prox_time(x: np.ndarray, geometry: ProxGeometry, weight: float) -> np.ndarray:
    if geometry is ProxGeometry.CIRCLE:
        return prox_sq_maxnorm(x, weight)
    if geometry is ProxGeometry.BOX:
        # One pooled level over all real components; the factor 2 restates the
        # complex-envelope weight for the component-wise norm.
        parts = np.stack([x.real, x.imag])
        parts = prox_sq_maxnorm(parts, 2.0 * weight)
        return parts[0] + 1j * parts[1]
    return 1j * prox_sq_maxnorm(x.imag, weight)


def penalty_value(x: np.ndarray, geometry: ProxGeometry, weight: float) -> float:
    """Penalty g evaluated on a time-domain signal."""
    if geometry is ProxGeometry.CIRCLE:
        return weight * float(np.max(np.abs(x)) ** 2)
    if geometry is ProxGeometry.BOX:
        level = max(float(np.max(np.abs(x.real))), float(np.max(np.abs(x.imag))))
        return 2.0 * weight * level ** 2
    if np.max(np.abs(x.real)) > 0:
        return math.inf
    return weight * float(np.max(np.abs(x.imag)) ** 2)


def relaxed_objective(b_freq: np.ndarray, s_freq: np.ndarray, grid: OfdmGrid,
                      ch: ChannelRealization, geometry: ProxGeometry,
                      weight: float) -> float:
    """Objective of the relaxed precoding problem at frequency iterate b."""
    residual = s_freq[:, grid.occupied] - np.einsum(
        "kub,bk->uk", ch.freq[grid.occupied], b_freq[:, grid.occupied])
    return float(np.sum(np.abs(residual) ** 2)) + penalty_value(
        to_time(b_freq), geometry, weight)


@dataclass(frozen=True)
class DrFilters:
    """Per-occupied-carrier prox_f pieces: filters q (S, B, U), offsets d (S, B)."""

    q: np.ndarray
    d: np.ndarray


def dr_preprocess(ch: ChannelRealization, grid: OfdmGrid,
                  s_freq: np.ndarray) -> DrFilters:
    h_occ = ch.freq[grid.occupied]                  # (S, U, B)
    h_occ_h = np.swapaxes(h_occ, -1, -2).conj()     # (S, B, U)
    gram = h_occ @ h_occ_h + 0.5 * np.eye(ch.n_ue)
    chol = np.linalg.cholesky(gram)
    eye = np.broadcast_to(np.eye(ch.n_ue, dtype=gram.dtype), gram.shape)
    inv_chol = np.linalg.solve(chol, eye)
    q = h_occ_h @ (np.swapaxes(inv_chol, -1, -2).conj() @ inv_chol)
    matched = np.einsum("kbu,uk->kb", h_occ_h, s_freq[:, grid.occupied])
    d = 2.0 * (matched - np.einsum("kbu,ku->kb", q,
                                   np.einsum("kub,kb->ku", h_occ, matched)))
    return DrFilters(q=q, d=d)


@dataclass(frozen=True)
class DrOutput:
    x_quant: np.ndarray     # (B, N) constant-envelope time signal
    x_unquant: np.ndarray   # (B, N) relaxed solution in the time domain
    b_freq: np.ndarray      # (B, N) final frequency-domain iterate
    objective: np.ndarray | None


def dr_precode(s_freq: np.ndarray, grid: OfdmGrid, ch: ChannelRealization,
               noise_var: float, n_iter: int, quantizer: PhaseQuantizer,
               trace_objective: bool = False) -> DrOutput:
    """Run T iterations from the all-zero state and quantize the result."""
    geometry = geometry_for_phase_bits(quantizer.phase_bits)
    weight = ch.n_tx * ch.n_ue * ch.n_fft * noise_var
    filters = dr_preprocess(ch, grid, s_freq)
    h_occ = ch.freq[grid.occupied]
    occ = grid.occupied

    b = np.zeros((ch.n_tx, ch.n_fft), dtype=np.complex128)
    c = np.zeros_like(b)
    x = np.zeros_like(b)
    trace = [] if trace_objective else None
    for _ in range(n_iter):
        v = 2.0 * b - c
        a = v.copy()
        v_occ = v[:, occ]
        hv = np.einsum("kub,bk->ku", h_occ, v_occ)
        a[:, occ] = v_occ - np.einsum("kbu,ku->kb", filters.q, hv).T + filters.d.T
        c += a - b
        x = _prox_time(to_time(c), geometry, weight)
        b = to_freq(x)
        if trace is not None:
            trace.append(relaxed_objective(b, s_freq, grid, ch, geometry, weight))

    return DrOutput(
        x_quant=quantizer(x),
        x_unquant=x,
        b_freq=b,
        objective=None if trace is None else np.asarray(trace),
    )
