"""OFDM subcarrier layout and Gray-labeled square QAM constellations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class OfdmGrid:
    """Partition of the n_fft subcarriers into occupied and guard sets."""

    n_fft: int
    occupied: np.ndarray

    def __post_init__(self) -> None:
        occ = np.asarray(self.occupied, dtype=np.int64)
        occ = np.sort(occ)
        if occ.size == 0:
            raise ValueError("grid needs at least one occupied subcarrier")
        if occ[0] < 0 or occ[-1] >= self.n_fft:
            raise ValueError("occupied indices must lie in [0, n_fft)")
        if np.unique(occ).size != occ.size:
            raise ValueError("occupied indices must be unique")
        object.__setattr__(self, "occupied", occ)

    @property
    def n_used(self) -> int:
        return int(self.occupied.size)

    @property
    def guards(self) -> np.ndarray:
        mask = np.ones(self.n_fft, dtype=bool)
        mask[self.occupied] = False
        return np.nonzero(mask)[0]


def build_lte_grid(n_fft: int, n_used: int) -> OfdmGrid:
    """Symmetric layout around a guarded DC: {1..S/2} and {N-S/2..N-1}."""
    if n_used % 2 != 0:
        raise ValueError(f"n_used must be even, got {n_used}")
    if not 0 < n_used < n_fft:
        raise ValueError(f"need 0 < n_used < n_fft, got n_used={n_used}, n_fft={n_fft}")
    half = n_used // 2
    occ = np.concatenate([np.arange(1, half + 1), np.arange(n_fft - half, n_fft)])
    return OfdmGrid(n_fft=n_fft, occupied=occ)


def _gray(i: np.ndarray | int):
    return i ^ (i >> 1)


@dataclass(frozen=True)
class Constellation:
    """Unit-energy square QAM with per-axis Gray bit labels.

    ``points[label]`` is the complex symbol whose bit pattern is the binary
    expansion of ``label`` (MSB first); the first half of the bits selects the
    in-phase level, the second half the quadrature level.
    """

    name: str
    points: np.ndarray
    bits_per_symbol: int

    @property
    def order(self) -> int:
        return self.points.size

    def bits_of(self, labels: np.ndarray) -> np.ndarray:
        """Expand integer labels to bit arrays along a trailing axis."""
        labels = np.asarray(labels)
        shifts = np.arange(self.bits_per_symbol - 1, -1, -1)
        return (labels[..., None] >> shifts) & 1

    def labels_from_bits(self, bits: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`bits_of`; bits grouped along the trailing axis."""
        bits = np.asarray(bits)
        if bits.shape[-1] % self.bits_per_symbol:
            raise ValueError("bit count must be a multiple of bits_per_symbol")
        grouped = bits.reshape(*bits.shape[:-1], -1, self.bits_per_symbol)
        weights = 1 << np.arange(self.bits_per_symbol - 1, -1, -1)
        return (grouped * weights).sum(axis=-1)

    def nearest(self, z: np.ndarray) -> np.ndarray:
        """Minimum-distance labels; ties resolve to the lowest label."""
        z = np.asarray(z)
        d2 = np.abs(z[..., None] - self.points) ** 2
        return np.argmin(d2, axis=-1)


def square_qam(order: int) -> Constellation:
    """Gray-labeled square QAM (order 4, 16, 64, ...) with E|s|^2 = 1."""
    if order < 4:
        raise ValueError(f"order must be an even power of two >= 4, got {order}")
    m = int(round(np.log2(order)))
    if 2 ** m != order or m % 2 != 0:
        raise ValueError(f"order must be an even power of two >= 4, got {order}")
    side = 1 << (m // 2)
    levels = 2 * np.arange(side) - (side - 1)
    scale = 1.0 / np.sqrt(2 * (side * side - 1) / 3)
    points = np.empty(order, dtype=np.complex128)
    for i_lvl in range(side):
        for q_lvl in range(side):
            label = (_gray(i_lvl) << (m // 2)) | _gray(q_lvl)
            points[label] = scale * (levels[i_lvl] + 1j * levels[q_lvl])
    return Constellation(name=f"{order}qam", points=points, bits_per_symbol=m)


def draw_symbol_labels(rng: np.random.Generator, n_ue: int, n_used: int,
                       constellation: Constellation) -> np.ndarray:
    return rng.integers(0, constellation.order, size=(n_ue, n_used))


def place_symbols(grid: OfdmGrid, values: np.ndarray) -> np.ndarray:
    """Scatter per-user occupied-carrier values onto the full grid, guards zero."""
    values = np.asarray(values)
    if values.shape[-1] != grid.n_used:
        raise ValueError(f"expected {grid.n_used} occupied values, got {values.shape[-1]}")
    out = np.zeros(values.shape[:-1] + (grid.n_fft,), dtype=np.complex128)
    out[..., grid.occupied] = values
    return out


def draw_symbols(rng: np.random.Generator, grid: OfdmGrid,
                 constellation: Constellation, n_ue: int) -> np.ndarray:
    """Uniform constellation symbols on occupied carriers, zeros on guards."""
    labels = draw_symbol_labels(rng, n_ue, grid.n_used, constellation)
    return place_symbols(grid, constellation.points[labels])
