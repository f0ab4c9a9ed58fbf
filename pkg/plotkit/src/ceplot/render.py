"""Render BER curves, EVM CCDFs, and PAR histograms from simulator CSVs.

Figure conventions:
  * BER-vs-SNR on a logarithmic y-axis clipped at the measurement
    resolution, 1 / (largest total-bit count in the data). A point whose
    measured BER is zero is drawn at that floor rather than dropped.
  * EVM CCDF shows the empirical P[EVM > x] against x on a logarithmic
    y-axis, clipped at 1/n per series.
  * PAR histograms share one set of bin edges across series so the shapes
    are directly comparable.

Rendering is read-only over its inputs; the output file is the only side
effect.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, filter_rows, group_series, load_rows


@dataclass(frozen=True)
class PlotJob:
    """One figure: input CSVs, figure kind, output path, optional filters.

    Attributes:
        kind: "ber", "ccdf", or "par".
        inputs: CSV paths; rows are concatenated after per-file schema checks.
        output: image path; the format follows the extension (png, svg, ...).
        precoders: keep only these precoder labels (None keeps all).
        p_labels: keep only these phase-resolution labels, e.g. ("2", "inf").
        title: optional figure title.
    """

    kind: str
    inputs: tuple[str, ...]
    output: str
    precoders: tuple[str, ...] | None = None
    p_labels: tuple[str, ...] | None = None
    title: str | None = None


def ccdf_points(samples) -> tuple[np.ndarray, np.ndarray]:
    """Empirical complementary CDF with strict inequality, P[X > x].

    Returns the sorted samples and, for each, the fraction of samples
    strictly above it; the last value is always 0. Tied samples produce
    stacked points at the same x, which a steps-post line renders as the
    single vertical drop of the step function (constant input gives one
    step from 1 to 0).
    """
    v = np.sort(np.asarray(samples, dtype=float).ravel())
    if v.size == 0:
        raise ValueError("need at least one sample")
    return v, 1.0 - np.arange(1, v.size + 1) / v.size


def _render_ber(ax, series) -> None:
    floor = 1.0 / max(row["bits"] for _, rows in series for row in rows)
    for label, rows in series:
        rows = sorted(rows, key=lambda row: row["snr_db"])
        snr = [row["snr_db"] for row in rows]
        ber = np.maximum([row["ber"] for row in rows], floor)
        ax.semilogy(snr, ber, marker="o", label=label)
    ax.set_ylim(floor, 1.0)
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("bit error rate")


def _render_ccdf(ax, series) -> None:
    bottom = 1.0
    for label, rows in series:
        xs, ys = ccdf_points([row["evm"] for row in rows])
        resolution = 1.0 / xs.size
        bottom = min(bottom, resolution)
        ax.plot(np.concatenate(([xs[0]], xs)),
                np.concatenate(([1.0], np.maximum(ys, resolution))),
                drawstyle="steps-post", label=label)
    ax.set_yscale("log")
    ax.set_ylim(bottom, 1.05)
    ax.set_xlabel("EVM")
    ax.set_ylabel("P[EVM > x]")


def _render_par(ax, series) -> None:
    pooled = [row["par_db"] for _, rows in series for row in rows]
    edges = np.histogram_bin_edges(pooled, bins=40)
    for label, rows in series:
        ax.hist([row["par_db"] for row in rows], bins=edges,
                histtype="step", label=label)
    ax.set_xlabel("per-antenna PAR [dB]")
    ax.set_ylabel("count")


_RENDERERS = {"ber": _render_ber, "ccdf": _render_ccdf, "par": _render_par}


def render(job: PlotJob) -> str:
    """Render one figure and return the output path."""
    rows = load_rows(job.inputs, job.kind)
    filtered = filter_rows(rows, job.precoders, job.p_labels)
    if not filtered:
        raise SchemaError(
            f"no rows left after filtering (precoder in {job.precoders}, "
            f"p in {job.p_labels}); refusing to draw an empty figure")
    series = group_series(filtered, job.kind)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        _RENDERERS[job.kind](ax, series)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
        if job.title:
            ax.set_title(job.title)
        fig.tight_layout()
        fig.savefig(job.output)
    finally:
        plt.close(fig)
    return job.output
