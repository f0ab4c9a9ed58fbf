"""CSV loading, schema validation, and series grouping."""

import pytest

from ceplot.schema import (SchemaError, filter_rows, group_series, load_rows,
                           series_label)

BER_HEADER = ("snr_db,precoder,p,iters,bits,bit_errors,ber,trials,"
              "clamped_trials\n")


def _ber_csv(tmp_path, name="ber.csv"):
    path = tmp_path / name
    path.write_text(
        BER_HEADER
        + "0,dr,2,20,4800,12,0.0025,2,0\n"
        + "5,dr,2,20,4800,3,0.000625,2,0\n"
        + "0,wf,2,0,4800,24,0.005,2,0\n"
        + "5,wf,2,0,4800,9,0.001875,2,0\n")
    return str(path)


def test_load_ber_rows(tmp_path):
    rows = load_rows([_ber_csv(tmp_path)], "ber")
    assert len(rows) == 4
    assert rows[0]["snr_db"] == 0.0
    assert rows[0]["ber"] == 0.0025
    assert rows[0]["bits"] == 4800.0
    assert rows[0]["precoder"] == "dr"
    assert rows[0]["p"] == "2"
    assert rows[0]["iters"] == "20"


def test_extra_columns_are_ignored(tmp_path):
    rows = load_rows([_ber_csv(tmp_path)], "ber")
    assert "bit_errors" not in rows[0]
    assert "trials" not in rows[0]


def test_missing_columns_named_in_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("snr_db,precoder,p\n0,dr,2\n")
    with pytest.raises(SchemaError) as err:
        load_rows([str(path)], "ber")
    message = str(err.value)
    assert "iters" in message and "bits" in message and "ber" in message
    assert "bad.csv" in message


def test_non_numeric_value_named_in_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(BER_HEADER + "0,dr,2,20,4800,12,oops,2,0\n")
    with pytest.raises(SchemaError) as err:
        load_rows([str(path)], "ber")
    assert "ber" in str(err.value) and "oops" in str(err.value)


def test_header_only_file_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(BER_HEADER)
    with pytest.raises(SchemaError, match="no data rows"):
        load_rows([str(path)], "ber")


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure kind"):
        load_rows([_ber_csv(tmp_path)], "scatter")


def test_multiple_files_concatenate(tmp_path):
    paths = [_ber_csv(tmp_path, "a.csv"), _ber_csv(tmp_path, "b.csv")]
    assert len(load_rows(paths, "ber")) == 8


def test_filter_rows_by_precoder_and_p(tmp_path):
    rows = load_rows([_ber_csv(tmp_path)], "ber")
    assert len(filter_rows(rows, precoders=("dr",))) == 2
    assert len(filter_rows(rows, precoders=("dr", "wf"))) == 4
    assert len(filter_rows(rows, p_labels=("3",))) == 0
    assert filter_rows(rows) == rows


def test_group_series_two_precoders_three_p(tmp_path):
    path = tmp_path / "ber.csv"
    lines = [BER_HEADER]
    for precoder, iters in (("dr", "20"), ("wf", "0")):
        for p in ("1", "2", "3"):
            lines.append(f"0,{precoder},{p},{iters},4800,10,0.002,2,0\n")
    path.write_text("".join(lines))
    series = group_series(load_rows([str(path)], "ber"), "ber")
    assert [label for label, _ in series] == [
        "dr p=1 T=20", "dr p=2 T=20", "dr p=3 T=20",
        "wf p=1", "wf p=2", "wf p=3"]
    assert all(len(rows) == 1 for _, rows in series)


def test_group_series_orders_inf_last_and_iters_numerically(tmp_path):
    path = tmp_path / "evm.csv"
    lines = ["trial,ue,snr_db,precoder,p,iters,evm,clamped\n"]
    for iters in ("100", "20", "1"):
        lines.append(f"0,0,10,dr,2,{iters},0.1,0\n")
    lines.append("0,0,10,dr,inf,20,0.1,0\n")
    path.write_text("".join(lines))
    series = group_series(load_rows([str(path)], "ccdf"), "ccdf")
    assert [label for label, _ in series] == [
        "dr p=2 T=1", "dr p=2 T=20", "dr p=2 T=100", "dr p=inf T=20"]


def test_series_label_forms():
    assert series_label(("wf", "2", "0")) == "wf p=2"
    assert series_label(("dr", "inf", "20")) == "dr p=inf T=20"
    assert series_label(("wf-inf", "inf")) == "wf-inf"
    assert series_label(("wf", "2")) == "wf p=2"
