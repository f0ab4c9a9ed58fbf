"""Link-level simulator for the massive multiuser MIMO-OFDM downlink with
phase-quantized constant-envelope transmit signals.

The package provides two precoders with matched interfaces: a quantized
Wiener-filter baseline (`wf_precode`) and an iterative splitting precoder
that optimizes the time-domain signal under a peak-modulus penalty before
quantization (`dr_precode`). Around them sit the OFDM grid and constellation
tools, a frequency-selective Rayleigh channel model, the user-side scaling
and detection chain, a punctured convolutional code with a max-log decoder,
and a Monte Carlo harness with a CSV-writing command line (`python -m cesim`).
"""

__version__ = "0.1.0"

from .channel import (ChannelRealization, apply_downlink_freq,
                      apply_downlink_time, draw_channel, draw_noise,
                      load_channel, save_channel)
from .config import PROFILES, SystemConfig, load_config_file, make_config
from .fec import FrameSpec, Interleaver, bcjr_decode, conv_encode, max_log_llrs
from .grid import (Constellation, OfdmGrid, build_lte_grid, draw_symbol_labels,
                   draw_symbols, place_symbols, square_qam)
from .harness import Arm, run_coded_ber, run_evm, run_par, run_uncoded_ber
from .metrics import ccdf, dac_rate_bits_per_s, evm, mult_count_dr, mult_count_wf, par_db
from .precode_dr import DrOutput, ProxGeometry, dr_precode, geometry_for_phase_bits
from .precode_wf import WfOutput, wf_precode
from .prox import clip_level, prox_sq_maxnorm
from .quantize import PhaseQuantizer, quantize_phase
from .receiver import UeEstimates, count_bit_errors, detect_nearest, ue_scale
from .transforms import to_freq, to_time

__all__ = [
    "Arm", "ChannelRealization", "Constellation", "DrOutput", "FrameSpec",
    "Interleaver", "OfdmGrid", "PROFILES", "PhaseQuantizer", "ProxGeometry",
    "SystemConfig", "UeEstimates", "WfOutput", "apply_downlink_freq",
    "apply_downlink_time", "bcjr_decode", "build_lte_grid", "ccdf",
    "clip_level", "conv_encode", "count_bit_errors", "dac_rate_bits_per_s",
    "detect_nearest", "dr_precode", "draw_channel", "draw_noise",
    "draw_symbol_labels", "draw_symbols", "evm", "geometry_for_phase_bits",
    "load_channel", "load_config_file", "make_config", "max_log_llrs",
    "mult_count_dr", "mult_count_wf", "par_db", "place_symbols",
    "prox_sq_maxnorm", "quantize_phase", "run_coded_ber", "run_evm", "run_par",
    "run_uncoded_ber", "save_channel", "square_qam", "to_freq", "to_time",
    "ue_scale", "wf_precode",
]
