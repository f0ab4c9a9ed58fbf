"""CSV schema contract: required columns per figure kind, loading, grouping.

The simulator writes comma-separated files with a header row; this module is
the only place that knows which columns each figure needs. Anything missing
or malformed raises SchemaError naming the offending column, never a bare
KeyError deep inside matplotlib.
"""

from __future__ import annotations

import csv


class SchemaError(ValueError):
    """A CSV input does not match the documented schema."""


# Columns each figure kind reads, and which of those must parse as numbers.
REQUIRED_COLUMNS = {
    "ber": ("snr_db", "precoder", "p", "iters", "bits", "ber"),
    "ccdf": ("precoder", "p", "iters", "evm"),
    "par": ("precoder", "p", "par_db"),
}
NUMERIC_COLUMNS = {
    "ber": ("snr_db", "bits", "ber"),
    "ccdf": ("evm",),
    "par": ("par_db",),
}
# Series identity: one plotted line/histogram per distinct key tuple.
GROUP_KEYS = {
    "ber": ("precoder", "p", "iters"),
    "ccdf": ("precoder", "p", "iters"),
    "par": ("precoder", "p"),
}


def load_rows(paths, kind: str) -> list[dict]:
    """Read one or more CSVs, keeping only the columns `kind` needs.

    Group-key values stay strings; numeric columns are coerced to float.
    Raises SchemaError for a missing column (named), a non-numeric value
    (column and value named), or no data rows at all.
    """
    if kind not in REQUIRED_COLUMNS:
        raise ValueError(f"unknown figure kind {kind!r}; "
                         f"choose from {sorted(REQUIRED_COLUMNS)}")
    required = REQUIRED_COLUMNS[kind]
    numeric = NUMERIC_COLUMNS[kind]
    rows = []
    for path in paths:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            missing = [col for col in required if col not in fields]
            if missing:
                raise SchemaError(
                    f"{path}: missing column(s) {', '.join(missing)} "
                    f"required for {kind} figures (found: {', '.join(fields)})")
            for raw in reader:
                row = {col: raw[col] for col in required}
                for col in numeric:
                    try:
                        row[col] = float(row[col])
                    except ValueError:
                        raise SchemaError(
                            f"{path}: column {col} has non-numeric value "
                            f"{raw[col]!r}") from None
                rows.append(row)
    if not rows:
        raise SchemaError(f"no data rows in {', '.join(paths)}")
    return rows


def filter_rows(rows: list[dict], precoders=None, p_labels=None) -> list[dict]:
    """Keep rows whose precoder / phase-resolution label is in the given sets."""
    if precoders is not None:
        rows = [row for row in rows if row["precoder"] in precoders]
    if p_labels is not None:
        rows = [row for row in rows if row["p"] in p_labels]
    return rows


def _series_sort_key(key: tuple) -> tuple:
    # precoder alphabetically, then p numerically (inf last), then iterations.
    parts = [key[0], float(key[1])]
    if len(key) > 2:
        parts.append(int(key[2]))
    return tuple(parts)


def series_label(key: tuple) -> str:
    precoder, p = key[0], key[1]
    parts = [precoder]
    if precoder != "wf-inf":
        parts.append(f"p={p}")
    if len(key) > 2 and int(key[2]) > 0:
        parts.append(f"T={key[2]}")
    return " ".join(parts)


def group_series(rows: list[dict], kind: str) -> list[tuple[str, list[dict]]]:
    """Split rows into labeled series by the kind's grouping keys.

    Returns (label, rows) pairs in a deterministic order suitable for a
    figure legend.
    """
    keys = GROUP_KEYS[kind]
    buckets: dict[tuple, list[dict]] = {}
    for row in rows:
        buckets.setdefault(tuple(row[k] for k in keys), []).append(row)
    return [(series_label(key), buckets[key])
            for key in sorted(buckets, key=_series_sort_key)]
