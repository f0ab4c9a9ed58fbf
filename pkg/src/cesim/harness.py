"""Monte Carlo experiment drivers with reproducible streams and CSV output.

Randomness layout: every (snr, trial) pair owns four independent generator
streams derived from the root seed - channel, symbols, noise, coding - via
``SeedSequence(seed, spawn_key=(snr_key, trial, stream))``. Draws never
depend on which precoder arm is being evaluated, so arms are compared on
identical channels, data and noise (paired comparisons). Aggregated CSV
files are byte-stable for a fixed seed and config.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channel import apply_downlink_freq, draw_channel, draw_noise
from .config import SystemConfig
from .fec import FrameSpec, Interleaver, max_log_llrs
from .grid import (Constellation, OfdmGrid, build_lte_grid, draw_symbol_labels,
                   place_symbols, square_qam)
from .metrics import evm as evm_metric
from .metrics import mult_count_dr, mult_count_wf
from .precode_dr import dr_precode
from .precode_wf import wf_precode
from .prox import clip_level
from .quantize import PhaseQuantizer
from .receiver import count_bit_errors, detect_nearest, ue_scale
from .transforms import to_freq

_STREAM_CHANNEL, _STREAM_SYMBOLS, _STREAM_NOISE, _STREAM_CODING = range(4)
_PERM_STREAM_KEY = 0x1EAF


@dataclass(frozen=True)
class Arm:
    """One precoder configuration under test.

    "dr-relaxed" transmits the unquantized splitting iterate (the relaxed
    solution before the constant-envelope projection); it exists for
    convergence studies and is not a constant-envelope precoder.
    """

    precoder: str             # "wf", "wf-inf", "dr" or "dr-relaxed"
    phase_bits: float = math.inf
    n_iter: int = 20          # used by the dr variants only

    def __post_init__(self) -> None:
        if self.precoder not in ("wf", "wf-inf", "dr", "dr-relaxed"):
            raise ValueError(f"unknown precoder {self.precoder!r}")

    @property
    def p_label(self) -> str:
        return "inf" if self.phase_bits == math.inf else str(int(self.phase_bits))


@dataclass(frozen=True)
class TrialStreams:
    channel: np.random.Generator
    symbols: np.random.Generator
    noise: np.random.Generator
    coding: np.random.Generator


def _snr_key(snr_db: float) -> int:
    return int(round(snr_db * 1000)) % (1 << 32)


def trial_streams(seed: int, snr_db: float, trial: int) -> TrialStreams:
    key = _snr_key(snr_db)
    return TrialStreams(*(
        np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(key, trial, s)))
        for s in range(4)))


def snr_db_to_noise_var(snr_db: float) -> float:
    return 10.0 ** (-snr_db / 10.0)


def precode_arm(arm: Arm, s_freq: np.ndarray, grid: OfdmGrid, ch, noise_var: float,
                power: float) -> np.ndarray:
    quantizer = PhaseQuantizer(arm.phase_bits, power)
    if arm.precoder in ("dr", "dr-relaxed"):
        out = dr_precode(s_freq, grid, ch, noise_var, arm.n_iter, quantizer)
        return out.x_unquant if arm.precoder == "dr-relaxed" else out.x_quant
    out = wf_precode(s_freq, grid, ch, noise_var, quantizer)
    return out.x_unquant if arm.precoder == "wf-inf" else out.x_quant


def run_uncoded_ber(cfg: SystemConfig, snr_db_list, arms, trials: int,
                    constellation: Constellation | None = None):
    """Uncoded BER sweep. Returns (rows, detail) where detail maps
    (snr_db, arm) to per-trial bit-error counts."""
    const = constellation or square_qam(4)
    grid = build_lte_grid(cfg.n_fft, cfg.n_used)
    power = cfg.tx_power_per_antenna
    bits_per_trial = cfg.n_ue * cfg.n_used * const.bits_per_symbol
    rows, detail = [], {}
    for snr_db in snr_db_list:
        noise_var = snr_db_to_noise_var(snr_db)
        errors = {arm: np.zeros(trials, dtype=np.int64) for arm in arms}
        clamped = {arm: np.zeros(trials, dtype=bool) for arm in arms}
        for trial in range(trials):
            streams = trial_streams(cfg.seed, snr_db, trial)
            ch = draw_channel(streams.channel, cfg.n_ue, cfg.n_tx, cfg.n_taps, cfg.n_fft)
            labels = draw_symbol_labels(streams.symbols, cfg.n_ue, cfg.n_used, const)
            s_freq = place_symbols(grid, const.points[labels])
            w_time = draw_noise(streams.noise, cfg.n_ue, cfg.n_fft, noise_var)
            for arm in arms:
                x = precode_arm(arm, s_freq, grid, ch, noise_var, power)
                y = apply_downlink_freq(ch, to_freq(x), w_time)
                est = ue_scale(y, grid, noise_var)
                rx = detect_nearest(est.s_tilde[:, grid.occupied], const)
                errors[arm][trial] = count_bit_errors(labels, rx, const)
                clamped[arm][trial] = bool(est.clamped.any())
        for arm in arms:
            total = int(errors[arm].sum())
            bits = trials * bits_per_trial
            rows.append({
                "snr_db": snr_db, "precoder": arm.precoder, "p": arm.p_label,
                "iters": arm.n_iter if arm.precoder.startswith("dr") else 0,
                "bits": bits, "bit_errors": total, "ber": total / bits,
                "trials": trials, "clamped_trials": int(clamped[arm].sum()),
            })
            detail[(snr_db, arm)] = errors[arm]
    return rows, detail


def run_coded_ber(cfg: SystemConfig, snr_db_list, arms, trials: int,
                  constellation: Constellation | None = None):
    """Coded BER sweep (zero-tail punctured frames, max-log BCJR)."""
    const = constellation or square_qam(16)
    grid = build_lte_grid(cfg.n_fft, cfg.n_used)
    power = cfg.tx_power_per_antenna
    frame = FrameSpec.for_block(cfg.n_used * const.bits_per_symbol)
    perm_rng = np.random.default_rng(
        np.random.SeedSequence(cfg.seed, spawn_key=(_PERM_STREAM_KEY,)))
    interleaver = Interleaver.from_rng(perm_rng, frame.n_coded)
    bits_per_trial = cfg.n_ue * frame.n_info
    rows, detail = [], {}
    for snr_db in snr_db_list:
        noise_var = snr_db_to_noise_var(snr_db)
        errors = {arm: np.zeros(trials, dtype=np.int64) for arm in arms}
        clamped = {arm: np.zeros(trials, dtype=bool) for arm in arms}
        for trial in range(trials):
            streams = trial_streams(cfg.seed, snr_db, trial)
            ch = draw_channel(streams.channel, cfg.n_ue, cfg.n_tx, cfg.n_taps, cfg.n_fft)
            info = streams.coding.integers(0, 2, size=(cfg.n_ue, frame.n_info))
            tx_bits = interleaver.scatter(frame.encode(info))
            labels = const.labels_from_bits(tx_bits)
            s_freq = place_symbols(grid, const.points[labels])
            w_time = draw_noise(streams.noise, cfg.n_ue, cfg.n_fft, noise_var)
            for arm in arms:
                x = precode_arm(arm, s_freq, grid, ch, noise_var, power)
                y = apply_downlink_freq(ch, to_freq(x), w_time)
                est = ue_scale(y, grid, noise_var)
                noise_eff = np.maximum(est.beta ** 2 * noise_var, 1e-30)
                llrs = max_log_llrs(est.s_tilde[:, grid.occupied], const, noise_eff)
                info_hat = frame.decode(interleaver.gather(llrs))
                errors[arm][trial] = int(np.sum(info_hat != info))
                clamped[arm][trial] = bool(est.clamped.any())
        for arm in arms:
            total = int(errors[arm].sum())
            bits = trials * bits_per_trial
            rows.append({
                "snr_db": snr_db, "precoder": arm.precoder, "p": arm.p_label,
                "iters": arm.n_iter if arm.precoder.startswith("dr") else 0,
                "bits": bits, "bit_errors": total, "ber": total / bits,
                "trials": trials, "clamped_trials": int(clamped[arm].sum()),
            })
            detail[(snr_db, arm)] = errors[arm]
    return rows, detail


def run_evm(cfg: SystemConfig, snr_db: float, arms, trials: int,
            constellation: Constellation | None = None):
    """Per-(trial, user) EVM at one SNR. Returns (rows, evms) with evms
    mapping each arm to a (trials, n_ue) array."""
    const = constellation or square_qam(16)
    grid = build_lte_grid(cfg.n_fft, cfg.n_used)
    power = cfg.tx_power_per_antenna
    noise_var = snr_db_to_noise_var(snr_db)
    evms = {arm: np.zeros((trials, cfg.n_ue)) for arm in arms}
    clamped = {arm: np.zeros((trials, cfg.n_ue), dtype=bool) for arm in arms}
    for trial in range(trials):
        streams = trial_streams(cfg.seed, snr_db, trial)
        ch = draw_channel(streams.channel, cfg.n_ue, cfg.n_tx, cfg.n_taps, cfg.n_fft)
        s_freq = place_symbols(
            grid, const.points[draw_symbol_labels(streams.symbols, cfg.n_ue,
                                                  cfg.n_used, const)])
        w_freq = to_freq(draw_noise(streams.noise, cfg.n_ue, cfg.n_fft, noise_var))
        for arm in arms:
            x = precode_arm(arm, s_freq, grid, ch, noise_var, power)
            y_clean = apply_downlink_freq(ch, to_freq(x))
            est = ue_scale(y_clean + w_freq, grid, noise_var)
            evms[arm][trial] = evm_metric(s_freq, y_clean, est.beta, grid)
            clamped[arm][trial] = est.clamped
    rows = []
    for arm in arms:
        for trial in range(trials):
            for ue in range(cfg.n_ue):
                rows.append({
                    "trial": trial, "ue": ue, "snr_db": snr_db,
                    "precoder": arm.precoder, "p": arm.p_label,
                    "iters": arm.n_iter if arm.precoder.startswith("dr") else 0,
                    "evm": evms[arm][trial, ue],
                    "clamped": int(clamped[arm][trial, ue]),
                })
    return rows, evms


def run_par(cfg: SystemConfig, arm: Arm, trials: int, snr_db: float = 10.0,
            constellation: Constellation | None = None):
    """Per-(trial, antenna) PAR plus the per-antenna PAR pooled over all
    trials. Returns (rows, pooled_par_db)."""
    const = constellation or square_qam(16)
    grid = build_lte_grid(cfg.n_fft, cfg.n_used)
    power = cfg.tx_power_per_antenna
    noise_var = snr_db_to_noise_var(snr_db)
    peak = np.zeros(cfg.n_tx)
    energy = np.zeros(cfg.n_tx)
    rows = []
    for trial in range(trials):
        streams = trial_streams(cfg.seed, snr_db, trial)
        ch = draw_channel(streams.channel, cfg.n_ue, cfg.n_tx, cfg.n_taps, cfg.n_fft)
        s_freq = place_symbols(
            grid, const.points[draw_symbol_labels(streams.symbols, cfg.n_ue,
                                                  cfg.n_used, const)])
        x = precode_arm(arm, s_freq, grid, ch, noise_var, power)
        sample_power = np.abs(x) ** 2
        peak = np.maximum(peak, sample_power.max(axis=1))
        energy += sample_power.sum(axis=1)
        par = 10.0 * np.log10(sample_power.max(axis=1) / sample_power.mean(axis=1))
        for antenna in range(cfg.n_tx):
            rows.append({
                "trial": trial, "antenna": antenna, "precoder": arm.precoder,
                "p": arm.p_label, "par_db": par[antenna],
            })
    pooled = 10.0 * np.log10(peak / (energy / (trials * cfg.n_fft)))
    return rows, pooled


def prox_grid_oracle(mags: np.ndarray, weight: float, coarse: float = 1e-3,
                     fine: float = 1e-6) -> tuple[float, float]:
    """Two-stage 1-D grid search for the clip level; independent of the
    sort-based solution. Returns (level, objective)."""
    m = np.asarray(mags, dtype=np.float64).ravel()

    def objective(ts: np.ndarray) -> np.ndarray:
        residual = np.maximum(m[None, :] - ts[:, None], 0.0)
        return weight * ts ** 2 + 0.5 * np.sum(residual ** 2, axis=1)

    hi = float(m.max(initial=0.0))
    if hi == 0.0:
        return 0.0, 0.0
    ts = np.arange(0.0, hi + coarse, coarse)
    best = ts[int(np.argmin(objective(ts)))]
    lo2, hi2 = max(0.0, best - coarse), min(hi, best + coarse)
    ts2 = np.arange(lo2, hi2 + fine, fine)
    obj2 = objective(ts2)
    idx = int(np.argmin(obj2))
    return float(ts2[idx]), float(obj2[idx])


def run_prox_validate(n_instances: int, seed: int):
    """Compare the analytic clip level against the grid oracle."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x9C0,)))
    rows = []
    for instance in range(n_instances):
        size = int(rng.integers(2, 65))
        v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        weight = float(10.0 ** rng.uniform(-1.5, 0.5))
        m = np.abs(v)
        level = clip_level(m, weight)
        obj = weight * level ** 2 + 0.5 * np.sum(np.maximum(m - level, 0.0) ** 2)
        level_ref, obj_ref = prox_grid_oracle(m, weight)
        rows.append({
            "instance": instance, "size": size, "weight": weight,
            "level": level, "level_ref": level_ref,
            "level_err": abs(level - level_ref), "obj_err": abs(obj - obj_ref),
        })
    return rows


def run_complexity(cfg: SystemConfig, iters_list) -> list[dict]:
    wf = mult_count_wf(cfg.n_tx, cfg.n_ue, cfg.n_used, cfg.n_fft)
    rows = [{"precoder": "wf", "iters": 0, "real_mults": wf, "ratio_vs_wf": 1.0}]
    for n_iter in iters_list:
        dr = mult_count_dr(cfg.n_tx, cfg.n_ue, cfg.n_used, cfg.n_fft, n_iter)
        rows.append({"precoder": "dr", "iters": n_iter, "real_mults": dr,
                     "ratio_vs_wf": dr / wf})
    return rows


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.10g" % float(value)
    return str(value)


def write_csv(path: str, fieldnames, rows) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_format_cell(row[name]) for name in fieldnames])


def write_manifest(out_dir: str, experiment: str, cfg: SystemConfig,
                   extra: dict) -> str:
    payload = {
        "experiment": experiment,
        "config": cfg.as_dict(),
        "package": {"name": "cesim", "version": __version__,
                    "numpy": np.__version__},
    }
    payload.update(extra)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
