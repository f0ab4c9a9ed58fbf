"""Proximal operator of weight * ||v||_inf^2 via sorted clipping.

For h(v) = weight * max_i |v_i|^2, prox_h(v) clips every magnitude at a
level t and keeps phases (signs, for real input). Writing the sorted
magnitudes m_1 >= m_2 >= ... >= m_K, the optimal level is
t = (m_1 + ... + m_k) / (2*weight + k) for the unique k with
m_{k+1} <= t <= m_k (m_{K+1} taken as 0); this is the stationary point of
the convex 1-D objective weight*t^2 + 0.5 * sum_i (m_i - t)_+^2.
"""

from __future__ import annotations

import numpy as np


def clip_level(mags: np.ndarray, weight: float) -> float:
    """Optimal clipping level for nonnegative magnitudes ``mags``."""
    m = np.asarray(mags, dtype=np.float64).ravel()
    if m.size == 0:
        return 0.0
    if np.any(m < 0):
        raise ValueError("magnitudes must be nonnegative")
    if weight < 0:
        raise ValueError("weight must be nonnegative")
    if weight == 0:
        return float(m.max())
    m_sorted = np.sort(m)[::-1]
    k = np.arange(1, m.size + 1)
    candidates = np.cumsum(m_sorted) / (2.0 * weight + k)
    lower = np.append(m_sorted[1:], 0.0)
    valid = (candidates >= lower) & (candidates <= m_sorted)
    if valid.any():
        return float(candidates[np.argmax(valid)])
    # Round-off can exclude every bracket in near-tie cases; fall back to the
    # candidate with the smallest objective value.
    obj = weight * candidates ** 2 + 0.5 * np.array(
        [np.sum(np.maximum(m - t, 0.0) ** 2) for t in candidates])
    return float(candidates[np.argmin(obj)])


def prox_sq_maxnorm(v: np.ndarray, weight: float) -> np.ndarray:
    """Prox of weight * ||.||_inf^2; phases (or signs) are never altered."""
    v = np.asarray(v)
    if weight == 0:
        return v.copy()
    m = np.abs(v)
    t = clip_level(m.ravel(), weight)
    scale = np.minimum(1.0, t / np.maximum(m, np.finfo(np.float64).tiny))
    return v * scale
