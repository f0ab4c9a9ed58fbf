"""Per-user scaling and nearest-neighbor detection.

Each user estimates a single real scale from its own received power:
beta_u = 1 / sqrt(mean |y_u,k|^2 over occupied k - N0), which removes the
(unknown to the user) precoding gain before symbol detection. The radicand
is clamped at a tiny floor when noise dominates; such trials are flagged so
harnesses can count them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Constellation, OfdmGrid

RADICAND_FLOOR = 1e-12


@dataclass(frozen=True)
class UeEstimates:
    beta: np.ndarray      # (U,) per-user scale
    s_tilde: np.ndarray   # (U, N) scaled estimates, zero on guards
    clamped: np.ndarray   # (U,) True where the power estimate hit the floor


def ue_scale(y_freq: np.ndarray, grid: OfdmGrid, noise_var: float) -> UeEstimates:
    y_occ = y_freq[:, grid.occupied]
    power = np.mean(np.abs(y_occ) ** 2, axis=1)
    radicand = power - noise_var
    clamped = radicand < RADICAND_FLOOR
    beta = 1.0 / np.sqrt(np.maximum(radicand, RADICAND_FLOOR))
    s_tilde = np.zeros_like(y_freq)
    s_tilde[:, grid.occupied] = beta[:, None] * y_occ
    return UeEstimates(beta=beta, s_tilde=s_tilde, clamped=clamped)


def detect_nearest(values: np.ndarray, constellation: Constellation) -> np.ndarray:
    """Hard symbol decisions (integer labels) for an array of estimates."""
    return constellation.nearest(values)


def _popcount_table(order: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(order)], dtype=np.int64)


def count_bit_errors(tx_labels: np.ndarray, rx_labels: np.ndarray,
                     constellation: Constellation) -> int:
    """Bit errors between transmitted and detected Gray labels."""
    table = _popcount_table(constellation.order)
    return int(table[np.bitwise_xor(tx_labels, rx_labels)].sum())
