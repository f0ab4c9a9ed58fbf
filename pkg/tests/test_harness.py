"""Tests for the Monte Carlo harness: streams, pairing, CSV output, CLI."""

import csv
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from cesim import harness
from cesim.config import make_config
from cesim.harness import (Arm, run_complexity, run_evm, run_par,
                           run_prox_validate, run_uncoded_ber, snr_db_to_noise_var,
                           trial_streams, write_csv, write_manifest)

TINY = make_config("desk").replace(n_tx=8, n_ue=2, n_fft=64, n_used=20)


def test_snr_to_noise_var():
    assert snr_db_to_noise_var(0.0) == 1.0
    assert snr_db_to_noise_var(10.0) == pytest.approx(0.1, rel=1e-12)
    assert snr_db_to_noise_var(-10.0) == pytest.approx(10.0, rel=1e-12)


def test_trial_streams_reproducible_and_distinct():
    a = trial_streams(0, 10.0, 3)
    b = trial_streams(0, 10.0, 3)
    np.testing.assert_array_equal(a.channel.standard_normal(8),
                                  b.channel.standard_normal(8))
    c = trial_streams(0, 10.0, 3)
    assert not np.allclose(c.channel.standard_normal(8),
                           c.symbols.standard_normal(8))
    d = trial_streams(0, 10.0, 4)
    e = trial_streams(0, 5.0, 3)
    base = trial_streams(0, 10.0, 3).channel.standard_normal(8)
    assert not np.allclose(base, d.channel.standard_normal(8))
    assert not np.allclose(base, e.channel.standard_normal(8))


def test_arm_validation_and_label():
    assert Arm("dr", 2, 20).p_label == "2"
    assert Arm("wf-inf").p_label == "inf"
    assert Arm("dr-relaxed", math.inf, 5).p_label == "inf"
    with pytest.raises(ValueError):
        Arm("zf", 2, 20)


def test_uncoded_ber_rows_and_detail():
    arms = [Arm("dr", 2, 3), Arm("wf", 2)]
    rows, detail = run_uncoded_ber(TINY, [0.0, 10.0], arms, trials=3)
    assert len(rows) == 4
    bits_per_trial = TINY.n_ue * TINY.n_used * 2  # 4-QAM default
    for row in rows:
        assert row["bits"] == 3 * bits_per_trial
        key = (row["snr_db"], arms[0] if row["precoder"] == "dr" else arms[1])
        assert detail[key].sum() == row["bit_errors"]
        assert 0.0 <= row["ber"] <= 1.0
    # The iters column disambiguates arms that differ only in T.
    assert {row["iters"] for row in rows} == {0, 3}


def test_uncoded_ber_monotone_for_ideal_precoder():
    """The unquantized baseline must improve from 0 dB to 30 dB."""
    rows, _ = run_uncoded_ber(TINY, [0.0, 30.0], [Arm("wf-inf")], trials=4)
    by_snr = {row["snr_db"]: row["ber"] for row in rows}
    assert by_snr[30.0] <= by_snr[0.0]


def test_arms_share_draws():
    """Common random numbers: per-trial draws do not depend on the arm list,
    so a run with extra arms reproduces the single-arm results exactly."""
    lone, _ = run_uncoded_ber(TINY, [5.0], [Arm("wf", 2)], trials=3)
    both, _ = run_uncoded_ber(TINY, [5.0], [Arm("dr", 2, 3), Arm("wf", 2)], trials=3)
    wf_row = next(r for r in both if r["precoder"] == "wf")
    assert wf_row["bit_errors"] == lone[0]["bit_errors"]


def test_relaxed_arm_transmits_unquantized_iterate():
    """The relaxed arm sends the raw splitting iterate: same solver state as
    the quantized arm, before the constant-envelope projection."""
    from cesim.channel import draw_channel
    from cesim.grid import build_lte_grid, square_qam
    from cesim.precode_dr import dr_precode
    from cesim.quantize import PhaseQuantizer

    grid = build_lte_grid(TINY.n_fft, TINY.n_used)
    streams = trial_streams(TINY.seed, 10.0, 0)
    ch = draw_channel(streams.channel, TINY.n_ue, TINY.n_tx, TINY.n_taps, TINY.n_fft)
    s = harness.place_symbols(
        grid, square_qam(4).points[harness.draw_symbol_labels(
            streams.symbols, TINY.n_ue, TINY.n_used, square_qam(4))])
    power = TINY.tx_power_per_antenna
    x_rel = harness.precode_arm(Arm("dr-relaxed", 2, 10), s, grid, ch, 0.1, power)
    x_hard = harness.precode_arm(Arm("dr", 2, 10), s, grid, ch, 0.1, power)
    ref = dr_precode(s, grid, ch, 0.1, 10, PhaseQuantizer(2, power))
    np.testing.assert_array_equal(x_rel, ref.x_unquant)
    np.testing.assert_array_equal(x_hard, ref.x_quant)
    assert not np.array_equal(x_rel, x_hard)


def test_evm_rows_shape():
    arms = [Arm("dr", 2, 2), Arm("wf", 2)]
    rows, evms = run_evm(TINY, 10.0, arms, trials=3)
    assert len(rows) == len(arms) * 3 * TINY.n_ue
    for arm in arms:
        assert evms[arm].shape == (3, TINY.n_ue)
        assert np.all(evms[arm] > 0)
    iters = {row["iters"] for row in rows}
    assert iters == {0, 2}


def test_par_pooled_matches_rows():
    rows, pooled = run_par(TINY, Arm("wf-inf"), trials=2)
    assert pooled.shape == (TINY.n_tx,)
    assert len(rows) == 2 * TINY.n_tx
    per_trial = np.array([row["par_db"] for row in rows]).reshape(2, TINY.n_tx)
    # Pooling cannot fall below any single-symbol PAR by more than the
    # energy-averaging effect; sanity: pooled peak >= per-trial average peak.
    assert np.all(pooled >= per_trial.min(axis=0) - 3.01)


def test_quantized_par_is_zero():
    rows, pooled = run_par(TINY, Arm("dr", 2, 3), trials=2)
    np.testing.assert_array_equal(pooled, 0.0)
    assert all(row["par_db"] == 0.0 for row in rows)


def test_prox_validate_rows():
    rows = run_prox_validate(50, seed=0)
    assert len(rows) == 50
    assert max(row["level_err"] for row in rows) < 1e-5
    assert max(row["obj_err"] for row in rows) < 1e-5


def test_complexity_rows():
    rows = run_complexity(make_config("full"), [1, 20])
    assert rows[0]["precoder"] == "wf" and rows[0]["ratio_vs_wf"] == 1.0
    by_iters = {row["iters"]: row for row in rows if row["precoder"] == "dr"}
    assert by_iters[1]["real_mults"] == 341_289_984
    assert by_iters[20]["real_mults"] == 1_471_994_880


def test_write_csv_is_byte_stable(tmp_path):
    rows = [{"a": 1, "b": 0.5, "c": "x", "d": True},
            {"a": 2, "b": 1 / 3, "c": "y", "d": False}]
    p1, p2 = str(tmp_path / "one.csv"), str(tmp_path / "two.csv")
    write_csv(p1, ["a", "b", "c", "d"], rows)
    write_csv(p2, ["a", "b", "c", "d"], rows)
    data = open(p1, "rb").read()
    assert data == open(p2, "rb").read()
    text = data.decode()
    assert text.splitlines()[0] == "a,b,c,d"
    assert text.splitlines()[1] == "1,0.5,x,1"
    assert "0.3333333333" in text.splitlines()[2]


def test_write_manifest(tmp_path):
    cfg = make_config("desk")
    path = write_manifest(str(tmp_path), "demo", cfg, {"trials": 5})
    payload = json.load(open(path))
    assert payload["experiment"] == "demo"
    assert payload["trials"] == 5
    assert payload["config"]["n_tx"] == 32
    assert payload["package"]["name"] == "cesim"


def _run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "cesim", *args],
                          cwd=cwd, capture_output=True, text=True, timeout=300)


def test_cli_complexity(tmp_path):
    proc = _run_cli(["complexity", "--profile", "full", "--iters", "1,20",
                     "--out", "cx"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    with open(tmp_path / "cx" / "complexity.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0]["precoder"] == "wf"
    assert any(row["real_mults"] == "341289984" for row in rows)
    assert os.path.exists(tmp_path / "cx" / "manifest.json")


def test_cli_ber_uncoded_deterministic(tmp_path):
    args = ["ber-uncoded", "--trials", "2", "--snr-list", "0", "--precoder",
            "dr", "--phase-bits", "2", "--iters", "2"]
    p1 = _run_cli([*args, "--out", "r1"], cwd=tmp_path)
    p2 = _run_cli([*args, "--out", "r2"], cwd=tmp_path)
    assert p1.returncode == 0, p1.stderr
    assert p2.returncode == 0, p2.stderr
    b1 = open(tmp_path / "r1" / "ber.csv", "rb").read()
    assert b1 == open(tmp_path / "r2" / "ber.csv", "rb").read()
    header = b1.decode().splitlines()[0]
    assert header == "snr_db,precoder,p,iters,bits,bit_errors,ber,trials,clamped_trials"


def test_cli_evm_and_par_and_prox(tmp_path):
    proc = _run_cli(["evm-ccdf", "--trials", "2", "--snr-list", "10",
                     "--precoder", "dr", "--phase-bits", "2", "--iters", "1,2",
                     "--out", "evm"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    with open(tmp_path / "evm" / "evm.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert {row["iters"] for row in rows} == {"1", "2"}

    proc = _run_cli(["par", "--trials", "1", "--precoder", "dr,wf-inf",
                     "--phase-bits", "1", "--out", "par"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    with open(tmp_path / "par" / "par.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert {row["precoder"] for row in rows} == {"dr", "wf-inf"}

    proc = _run_cli(["prox-validate", "--trials", "5", "--out", "px"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert os.path.exists(tmp_path / "px" / "prox.csv")


def test_cli_config_override(tmp_path):
    cfg = {"n_tx": 8, "n_ue": 2, "n_fft": 64, "n_used": 20}
    (tmp_path / "small.json").write_text(json.dumps(cfg))
    proc = _run_cli(["ber-uncoded", "--config", "small.json", "--trials", "1",
                     "--snr-list", "10", "--precoder", "wf", "--phase-bits", "2",
                     "--out", "o"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    manifest = json.load(open(tmp_path / "o" / "manifest.json"))
    assert manifest["config"]["n_tx"] == 8


def test_cli_rejects_unknown_precoder(tmp_path):
    proc = _run_cli(["ber-uncoded", "--precoder", "zf", "--trials", "1",
                     "--out", "o"], cwd=tmp_path)
    assert proc.returncode != 0


def test_package_exports():
    assert harness.Arm is Arm
    import cesim
    assert cesim.__version__ == "0.1.0"
    assert hasattr(cesim, "dr_precode") and hasattr(cesim, "wf_precode")
