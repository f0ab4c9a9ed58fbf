"""Unitary DFT pair applied along the last (sample) axis.

The orientation is fixed so that a circularly convolved channel becomes a
per-subcarrier matrix product: ``to_freq`` is the forward unitary DFT with
kernel exp(-j 2 pi n k / N) / sqrt(N), under which the tap response
sum_l H_l exp(-j 2 pi k l / N) multiplies subcarrier k.
"""

import numpy as np


def to_freq(x: np.ndarray) -> np.ndarray:
    return np.fft.fft(x, axis=-1, norm="ortho")


def to_time(x: np.ndarray) -> np.ndarray:
    return np.fft.ifft(x, axis=-1, norm="ortho")
