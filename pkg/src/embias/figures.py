"""Matplotlib renderings written next to the delimited report outputs."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .queries import AuditReport, IntersectionalMatch
from .scoring import DEFAULT_BINS, ScoreMatrix, histogram


def save_score_distributions(
    matrix: ScoreMatrix,
    mode: str,
    path: str | Path,
    bins: int = DEFAULT_BINS,
) -> Path:
    """Grid of per-axis score histograms plus the mean-absolute aggregate."""
    selectors = list(matrix.axis_names) + ["ALL"]
    ncols = min(3, len(selectors))
    nrows = -(-len(selectors) // ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4 * ncols, 3 * nrows), squeeze=False
    )
    for k, selector in enumerate(selectors):
        ax = axes[k // ncols][k % ncols]
        hist = histogram(matrix, selector=selector, mode=mode, bins=bins)
        widths = hist.bin_edges[1:] - hist.bin_edges[:-1]
        ax.bar(hist.bin_edges[:-1], hist.counts, width=widths, align="edge",
               color="#4878a8", edgecolor="white")
        ax.set_title("mean |score|" if selector == "ALL" else selector, fontsize=10)
        ax.set_ylabel("words")
    for k in range(len(selectors), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.suptitle(f"Score distributions ({mode})")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_audit_figure(report: AuditReport, path: str | Path) -> Path:
    """Flag counts per (axis, end) for one neutral-word set."""
    counts: dict[str, int] = {}
    for flag in report.flagged:
        key = f"{flag.axis} ({flag.end})"
        counts[key] = counts.get(key, 0) + 1
    fig, ax = plt.subplots(figsize=(6, max(2.5, 0.45 * max(len(counts), 1))))
    if counts:
        labels = sorted(counts)
        ax.barh(labels, [counts[k] for k in labels], color="#b05050")
        ax.invert_yaxis()
        ax.set_xlabel("flagged words")
    else:
        ax.text(0.5, 0.5, "no flags", ha="center", va="center")
        ax.axis("off")
    ax.set_title(
        f"{report.set_name}: |{report.mode}| >= {report.threshold:g} "
        f"({report.words_found}/{report.words_in_set} words found)"
    )
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_intersections_figure(
    label: str, matches: Sequence[IntersectionalMatch], path: str | Path
) -> Path:
    """Mean queried-axis percentile for each associated word."""
    fig, ax = plt.subplots(figsize=(6, max(2.5, 0.35 * max(len(matches), 1))))
    if matches:
        words = [m.word for m in matches]
        strengths = [
            sum(abs(v) for v in m.percentiles.values()) / len(m.percentiles)
            for m in matches
        ]
        ax.barh(words, strengths, color="#4878a8")
        ax.invert_yaxis()
        ax.set_xlim(0, 1)
        ax.set_xlabel("mean |percentile| over queried axes")
    else:
        ax.text(0.5, 0.5, "no words selected", ha="center", va="center")
        ax.axis("off")
    ax.set_title(label)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
