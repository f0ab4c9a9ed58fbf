"""System configuration and named profiles.

A single frozen dataclass carries every dimension of the downlink: antenna
and user counts, the OFDM grid size, channel length, DAC phase resolution,
noise level and the iteration budget of the iterative precoder. Derived
constants (per-antenna transmit power, penalty weight of the relaxed
precoding problem) are exposed as properties so they can never drift out of
sync with the primary fields.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and operating point of one downlink simulation.

    Attributes:
        n_tx: base-station antenna count.
        n_ue: number of single-antenna users served in parallel (<= n_tx).
        n_fft: DFT length / total subcarrier count.
        n_used: occupied (data-bearing) subcarriers.
        n_taps: channel impulse-response length.
        phase_bits: DAC phase resolution p; ``math.inf`` means ideal phase,
            otherwise an integer >= 1 (the transmit alphabet has 2**p points).
        noise_var: complex noise variance N0 per receive sample; the system
            SNR is 1/N0.
        n_iter: iteration budget of the iterative precoder.
        seed: root seed for all random streams of a run.
        subcarrier_spacing_hz: used only for rate/bandwidth bookkeeping.
    """

    n_tx: int
    n_ue: int
    n_fft: int
    n_used: int
    n_taps: int
    phase_bits: float = 2
    noise_var: float = 0.0
    n_iter: int = 20
    seed: int = 0
    subcarrier_spacing_hz: float = 15e3

    def __post_init__(self) -> None:
        if self.n_tx < 1 or self.n_ue < 1 or self.n_ue > self.n_tx:
            raise ValueError(f"need 1 <= n_ue <= n_tx, got n_ue={self.n_ue}, n_tx={self.n_tx}")
        if self.n_fft < 1 or not 1 <= self.n_used <= self.n_fft:
            raise ValueError(f"need 1 <= n_used <= n_fft, got n_used={self.n_used}, n_fft={self.n_fft}")
        if not 1 <= self.n_taps <= self.n_fft:
            raise ValueError(f"need 1 <= n_taps <= n_fft, got n_taps={self.n_taps}")
        p = self.phase_bits
        if not (p == math.inf or (float(p).is_integer() and p >= 1)):
            raise ValueError(f"phase_bits must be an integer >= 1 or inf, got {p!r}")
        if self.noise_var < 0:
            raise ValueError("noise_var must be >= 0")
        if self.n_iter < 0:
            raise ValueError("n_iter must be >= 0")

    @property
    def tx_power_per_antenna(self) -> float:
        """Per-sample transmit power; total symbol energy is fixed to n_used."""
        return self.n_used / (self.n_tx * self.n_fft)

    @property
    def penalty_weight(self) -> float:
        """Weight of the squared max-norm term in the relaxed precoding problem."""
        return self.n_tx * self.n_ue * self.n_fft * self.noise_var

    @property
    def sample_rate_hz(self) -> float:
        return self.n_fft * self.subcarrier_spacing_hz

    def replace(self, **updates) -> "SystemConfig":
        return dataclasses.replace(self, **updates)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["phase_bits"] == math.inf:
            d["phase_bits"] = "inf"
        return d


# Small profile for day-to-day runs, full-scale profile for the long ones.
PROFILES = {
    "desk": SystemConfig(n_tx=32, n_ue=4, n_fft=512, n_used=300, n_taps=4),
    "full": SystemConfig(n_tx=128, n_ue=16, n_fft=4096, n_used=1200, n_taps=4),
}


def _coerce_phase_bits(value):
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return value


def load_config_file(path: str) -> dict:
    """Read a JSON config file whose keys mirror SystemConfig fields."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - {f.name for f in dataclasses.fields(SystemConfig)}
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
    if "phase_bits" in raw:
        raw["phase_bits"] = _coerce_phase_bits(raw["phase_bits"])
    return raw


def make_config(profile: str = "desk", config_file: str | None = None, **overrides) -> SystemConfig:
    """Resolve a config: profile defaults, then file values, then overrides."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    cfg = PROFILES[profile]
    if config_file is not None:
        cfg = cfg.replace(**load_config_file(config_file))
    if "phase_bits" in overrides:
        overrides["phase_bits"] = _coerce_phase_bits(overrides["phase_bits"])
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return cfg.replace(**overrides)
