"""Phase-only quantization onto a constant-envelope transmit alphabet.

With p phase bits the alphabet is the 2**p points of modulus sqrt(power)
at angles (pi + 2 pi m) / 2**p; quantization keeps the phase bin of the
input and discards its magnitude entirely, so every output sample has the
same modulus and the per-antenna signal has 0 dB peak-to-average ratio.
p = inf keeps the exact phase (ideal-phase DAC).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def quantize_phase(z: np.ndarray, phase_bits: float, power: float) -> np.ndarray:
    """Map z onto the constant-envelope alphabet with 2**phase_bits phases.

    The angle is reduced to [0, 2 pi) and binned by floor, so an angle
    exactly on a bin edge belongs to the bin it opens; z = 0 (angle taken
    as 0) lands on the m = 0 point. Idempotent for any fixed (p, power).

    p = 1 and p = 2 are built from component signs (the pair-of-1-bit-DACs
    form) instead of evaluating exp() per bin. The two forms select the
    same alphabet point for every input; the sign form keeps |out|^2
    bitwise identical across samples, so the quantized PAR is exactly 0.
    """
    z = np.asarray(z)
    amp = math.sqrt(power)
    re, im = z.real, z.imag
    # sign of the imaginary part with bin-edge ties resolved like the floor
    # rule on the angle: im == 0 belongs to the upper half plane unless the
    # angle is exactly pi
    im_neg = (im < 0) | ((im == 0) & (re < 0))
    if phase_bits == 1:
        return 1j * np.where(im_neg, -amp, amp)
    if phase_bits == 2:
        re_neg = (re < 0) | ((re == 0) & (im > 0))
        half = amp / np.sqrt(2.0)
        return np.where(re_neg, -half, half) + 1j * np.where(im_neg, -half, half)
    theta = np.angle(z)
    if phase_bits == math.inf:
        return amp * np.exp(1j * theta)
    levels = 2.0 ** phase_bits
    m = np.floor(np.mod(theta, 2 * np.pi) * (levels / (2 * np.pi)))
    m = np.mod(m, levels)  # guard the wrap where mod rounds up to 2 pi
    return amp * np.exp(1j * ((2 * np.pi / levels) * (m + 0.5)))


@dataclass(frozen=True)
class PhaseQuantizer:
    """Quantizer bound to a phase resolution and output power."""

    phase_bits: float
    power: float

    def __post_init__(self) -> None:
        p = self.phase_bits
        if not (p == math.inf or (float(p).is_integer() and p >= 1)):
            raise ValueError(f"phase_bits must be an integer >= 1 or inf, got {p!r}")
        if self.power <= 0:
            raise ValueError("power must be positive")

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return quantize_phase(z, self.phase_bits, self.power)

    def alphabet(self) -> np.ndarray:
        """The 2**p output points (finite p only), in bin order."""
        if self.phase_bits == math.inf:
            raise ValueError("infinite-resolution alphabet is the whole circle")
        levels = int(2 ** self.phase_bits)
        m = np.arange(levels)
        return math.sqrt(self.power) * np.exp(1j * (np.pi + 2 * np.pi * m) / levels)
