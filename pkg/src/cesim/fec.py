"""Punctured convolutional coding chain with max-log soft decoding.

The mother code is the feedforward rate-1/2, constraint-length-7 code with
octal generators (133, 171). Frames are zero-tail terminated (6 flush bits)
and punctured to rate 5/6 with the period-5 keep pattern

    stream 1: 1 1 0 1 0
    stream 2: 1 0 1 0 1

so every 5 input bits yield 6 transmitted bits; a coded block of n bits
therefore carries 5n/6 - 6 information bits. Decoding is a max-log BCJR
(forward/backward with max instead of logsumexp) over bit LLRs where a
positive value favors bit 0; punctured positions enter as zero LLRs. With
hard decisions the max-log recursion picks the bits of the maximum-metric
terminated path, so it matches Viterbi decoding up to metric ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONSTRAINT_LENGTH = 7
_G1 = 0o133
_G2 = 0o171
N_STATES = 1 << (CONSTRAINT_LENGTH - 1)
N_TAIL = CONSTRAINT_LENGTH - 1

# Keep pattern over one puncture period, indexed [step, stream].
PUNCTURE_KEEP = np.array([[1, 1], [1, 0], [0, 1], [1, 0], [0, 1]], dtype=bool)
PUNCTURE_PERIOD = PUNCTURE_KEEP.shape[0]
_KEPT_PER_PERIOD = int(PUNCTURE_KEEP.sum())


def _parity(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> 4)
    x = x ^ (x >> 2)
    x = x ^ (x >> 1)
    return x & 1


def _build_tables():
    """Transition tables indexed by the 7-bit window (input << 6) | state."""
    window = np.arange(1 << CONSTRAINT_LENGTH)
    out1 = _parity(window & _G1)
    out2 = _parity(window & _G2)
    nxt = window >> 1
    return out1, out2, nxt


_OUT1, _OUT2, _NEXT = _build_tables()

# Gather-form tables for the trellis recursions. A successor state encodes
# the branch input bit in its MSB and has exactly two predecessors.
_STATES = np.arange(N_STATES)
_BIT_OF = _STATES >> (CONSTRAINT_LENGTH - 2)            # input bit on entry
_PREV = np.stack([( _STATES << 1) & (N_STATES - 1),
                  ((_STATES << 1) & (N_STATES - 1)) | 1], axis=1)
_WIN_IN = (_BIT_OF[:, None] << (CONSTRAINT_LENGTH - 1)) | _PREV
# Branch output signs (+1 for coded 0, -1 for coded 1), entering state s'.
_SGN1_IN = 1.0 - 2.0 * _OUT1[_WIN_IN]
_SGN2_IN = 1.0 - 2.0 * _OUT2[_WIN_IN]
# Leaving state s with input b.
_WIN_OUT = (np.array([0, 1])[:, None] << (CONSTRAINT_LENGTH - 1)) | _STATES
_NEXT_OUT = _NEXT[_WIN_OUT]
_SGN1_OUT = 1.0 - 2.0 * _OUT1[_WIN_OUT]
_SGN2_OUT = 1.0 - 2.0 * _OUT2[_WIN_OUT]


def conv_encode(info_bits: np.ndarray) -> np.ndarray:
    """Zero-tail encode, output streams interleaved per step: c1(0) c2(0) c1(1) ...

    Accepts a single frame (n,) or a batch (frames, n).
    """
    info_bits = np.asarray(info_bits, dtype=np.int64)
    single = info_bits.ndim == 1
    frames = info_bits[None, :] if single else info_bits
    n_in = frames.shape[1] + N_TAIL
    padded = np.concatenate(
        [frames, np.zeros((frames.shape[0], N_TAIL), dtype=np.int64)], axis=1)
    coded = np.empty((frames.shape[0], 2 * n_in), dtype=np.int64)
    state = np.zeros(frames.shape[0], dtype=np.int64)
    for j in range(n_in):
        window = (padded[:, j] << (CONSTRAINT_LENGTH - 1)) | state
        coded[:, 2 * j] = _OUT1[window]
        coded[:, 2 * j + 1] = _OUT2[window]
        state = _NEXT[window]
    return coded[0] if single else coded


def _keep_mask(n_mother: int) -> np.ndarray:
    if n_mother % (2 * PUNCTURE_PERIOD) != 0:
        raise ValueError(f"mother length {n_mother} is not a whole number of puncture periods")
    return np.tile(PUNCTURE_KEEP.ravel(), n_mother // (2 * PUNCTURE_PERIOD))


def puncture(coded: np.ndarray) -> np.ndarray:
    coded = np.asarray(coded)
    return coded[..., _keep_mask(coded.shape[-1])]


def depuncture(values: np.ndarray, n_mother: int, fill: float = 0.0) -> np.ndarray:
    """Re-expand kept positions to mother length, ``fill`` elsewhere."""
    values = np.asarray(values, dtype=np.float64)
    mask = _keep_mask(n_mother)
    if values.shape[-1] != int(mask.sum()):
        raise ValueError(f"expected {int(mask.sum())} kept values, got {values.shape[-1]}")
    out = np.full(values.shape[:-1] + (n_mother,), fill, dtype=np.float64)
    out[..., mask] = values
    return out


@dataclass(frozen=True)
class Interleaver:
    """Seed-derived random bit permutation; tx[i] = coded[perm[i]]."""

    perm: np.ndarray

    @classmethod
    def from_rng(cls, rng: np.random.Generator, n: int) -> "Interleaver":
        return cls(perm=rng.permutation(n))

    def scatter(self, bits: np.ndarray) -> np.ndarray:
        return np.asarray(bits)[..., self.perm]

    def gather(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values)
        out = np.empty_like(values)
        out[..., self.perm] = values
        return out


def max_log_llrs(estimates: np.ndarray, constellation, noise_var_eff) -> np.ndarray:
    """Bit LLRs, positive favoring bit 0: (min d^2 over bit=1) - (min over bit=0).

    ``estimates`` has symbols along its last axis; the result expands that
    axis by bits_per_symbol. ``noise_var_eff`` is the post-scaling noise
    variance (broadcast over leading axes).
    """
    estimates = np.asarray(estimates)
    d2 = np.abs(estimates[..., None] - constellation.points) ** 2
    bits = constellation.bits_of(np.arange(constellation.order))  # (M, bps)
    llrs = np.empty(estimates.shape + (constellation.bits_per_symbol,))
    big = np.inf
    for b in range(constellation.bits_per_symbol):
        one = np.where(bits[:, b] == 1, d2, big).min(axis=-1)
        zero = np.where(bits[:, b] == 0, d2, big).min(axis=-1)
        llrs[..., b] = one - zero
    llrs /= np.asarray(noise_var_eff)[..., None, None]
    return llrs.reshape(estimates.shape[:-1] + (-1,))


def bcjr_decode(mother_llrs: np.ndarray, n_info: int) -> np.ndarray:
    """Max-log BCJR hard decisions for zero-tail terminated frames.

    ``mother_llrs`` is (frames, 2*(n_info + 6)) in the interleaved stream
    order produced by :func:`conv_encode` (after depuncturing). Metric ties
    resolve to bit 0, so all-zero input decodes to the all-zero frame.
    """
    llrs = np.asarray(mother_llrs, dtype=np.float64)
    single = llrs.ndim == 1
    if single:
        llrs = llrs[None, :]
    n_steps = llrs.shape[1] // 2
    if llrs.shape[1] != 2 * n_steps or n_steps != n_info + N_TAIL:
        raise ValueError(f"LLR length {llrs.shape[1]} does not match n_info={n_info}")
    n_frames = llrs.shape[0]
    l1 = llrs[:, 0::2]
    l2 = llrs[:, 1::2]

    neg = -np.inf
    alphas = np.empty((n_steps + 1, n_frames, N_STATES))
    alphas[0] = neg
    alphas[0, :, 0] = 0.0
    for j in range(n_steps):
        # Two incoming branches per state, gathered from the predecessors.
        g0 = 0.5 * (_SGN1_IN[:, 0] * l1[:, j, None] + _SGN2_IN[:, 0] * l2[:, j, None])
        g1 = 0.5 * (_SGN1_IN[:, 1] * l1[:, j, None] + _SGN2_IN[:, 1] * l2[:, j, None])
        alphas[j + 1] = np.maximum(alphas[j][:, _PREV[:, 0]] + g0,
                                   alphas[j][:, _PREV[:, 1]] + g1)

    decisions = np.empty((n_frames, n_steps), dtype=np.int64)
    beta = np.full((n_frames, N_STATES), neg)
    beta[:, 0] = 0.0  # zero-tail termination
    for j in range(n_steps - 1, -1, -1):
        g0 = 0.5 * (_SGN1_OUT[0] * l1[:, j, None] + _SGN2_OUT[0] * l2[:, j, None])
        g1 = 0.5 * (_SGN1_OUT[1] * l1[:, j, None] + _SGN2_OUT[1] * l2[:, j, None])
        m0 = alphas[j] + g0 + beta[:, _NEXT_OUT[0]]
        m1 = alphas[j] + g1 + beta[:, _NEXT_OUT[1]]
        decisions[:, j] = (m1.max(axis=1) > m0.max(axis=1)).astype(np.int64)
        beta = np.maximum(beta[:, _NEXT_OUT[0]] + g0, beta[:, _NEXT_OUT[1]] + g1)

    info = decisions[:, :n_info]
    return info[0] if single else info


@dataclass(frozen=True)
class FrameSpec:
    """Bit accounting for one coded frame filling one (user, OFDM symbol)."""

    n_coded: int   # transmitted coded bits, = occupied carriers * bits/symbol
    n_input: int   # encoder input length including the zero tail
    n_info: int    # information payload

    @classmethod
    def for_block(cls, n_coded: int) -> "FrameSpec":
        # Puncturing keeps 6 of every 10 mother bits, so the encoder input
        # must be n_coded * 5/6 and a whole number of periods.
        if n_coded <= 0 or (5 * n_coded) % 6 != 0:
            raise ValueError(f"coded block of {n_coded} bits does not fit the puncture grid")
        n_input = 5 * n_coded // 6
        if n_input % PUNCTURE_PERIOD != 0:
            raise ValueError(f"encoder input {n_input} is not a whole number of puncture periods")
        if n_input <= N_TAIL:
            raise ValueError("coded block too short for a zero-tail frame")
        return cls(n_coded=n_coded, n_input=n_input, n_info=n_input - N_TAIL)

    def encode(self, info_bits: np.ndarray) -> np.ndarray:
        info_bits = np.asarray(info_bits)
        if info_bits.shape[-1] != self.n_info:
            raise ValueError(f"expected {self.n_info} info bits, got {info_bits.shape[-1]}")
        return puncture(conv_encode(info_bits))

    def decode(self, coded_llrs: np.ndarray) -> np.ndarray:
        mother = depuncture(coded_llrs, 2 * self.n_input)
        return bcjr_decode(mother, self.n_info)
