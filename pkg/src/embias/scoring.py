"""Signed association scores over all words and axes, with feature scalings.

The raw score of a word on an axis is the cosine distance to the negative
subgroup centroid minus the cosine distance to the positive one: positive
values associate the word with the positive subgroup, negative values with
the negative subgroup, and magnitude encodes strength.

Raw scores are hard to compare across axes (their spreads differ), so two
sign-preserving rescalings to [-1, 1] are derived eagerly for every column:

* ``minmax``     -- each positive entry divided by the column maximum, each
  negative entry by the magnitude of the column minimum; zeros stay zero.
* ``percentile`` -- piecewise rank transform: a positive entry's score is
  the fraction of positive entries less than or equal to it, and likewise
  (by magnitude) on the negative side, negated.  Ties share a rank.

A word with raw score exactly zero is associated with neither subgroup and
scales to zero in both modes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .axes import BiasAxis, UnknownAxisError
from .store import EmbeddingStore, cosine_distance

SCALING_MODES = ("raw", "minmax", "percentile")
ALL_AXES = "ALL"
DEFAULT_BINS = 20


def check_mode(mode: str) -> str:
    if mode not in SCALING_MODES:
        raise ValueError(f"unknown scaling mode {mode!r}, expected one of {SCALING_MODES}")
    return mode


def bias_score(w: np.ndarray, axis: BiasAxis) -> float:
    """Signed association of vector ``w`` along ``axis``."""
    return cosine_distance(w, axis.neg.centroid) - cosine_distance(w, axis.pos.centroid)


def _axis_column(units: np.ndarray, axis: BiasAxis) -> np.ndarray:
    """Raw scores of every (unit-normalized) row against one axis."""
    gn = axis.neg.centroid / np.linalg.norm(axis.neg.centroid)
    gp = axis.pos.centroid / np.linalg.norm(axis.pos.centroid)
    dn = np.clip(1.0 - units @ gn, 0.0, 2.0)
    dp = np.clip(1.0 - units @ gp, 0.0, 2.0)
    return dn - dp


def minmax_scale(column: np.ndarray) -> np.ndarray:
    """Stretch a raw column to [-1, 1] piecewise by sign."""
    column = np.asarray(column, dtype=np.float64)
    out = np.zeros_like(column)
    pos = column > 0
    neg = column < 0
    if pos.any():
        out[pos] = column[pos] / column[pos].max()
    if neg.any():
        out[neg] = column[neg] / abs(column[neg].min())
    return out


def percentile_scale(column: np.ndarray) -> np.ndarray:
    """Rank-transform a raw column to [-1, 1] piecewise by sign.

    A positive entry maps to (number of positive entries <= it) / (number
    of positive entries); a negative entry maps to the negated analogue
    over magnitudes.
    """
    column = np.asarray(column, dtype=np.float64)
    out = np.zeros_like(column)
    pos = column > 0
    neg = column < 0
    if pos.any():
        vals = np.sort(column[pos])
        out[pos] = np.searchsorted(vals, column[pos], side="right") / vals.size
    if neg.any():
        mags = np.sort(-column[neg])
        out[neg] = -(np.searchsorted(mags, -column[neg], side="right") / mags.size)
    return out


_SCALERS = {"minmax": minmax_scale, "percentile": percentile_scale}


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Histogram:
    """Equal-width binning of one score vector; the last bin is right-inclusive."""

    selector: str
    mode: str
    bin_edges: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-word, per-axis raw scores plus derived scalings (immutable).

    ``words`` mirrors the store order the matrix was built from.  All three
    score planes are words x axes; ``mean_abs`` maps each scaling mode to
    the per-word mean absolute score across axes.
    """

    words: tuple[str, ...]
    axis_names: tuple[str, ...]
    raw: np.ndarray
    minmax: np.ndarray
    percentile: np.ndarray
    mean_abs: Mapping[str, np.ndarray]
    word_index: Mapping[str, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.raw.shape

    def axis_index(self, name: str) -> int:
        try:
            return self.axis_names.index(name)
        except ValueError:
            raise UnknownAxisError(name) from None

    def scores(self, mode: str) -> np.ndarray:
        check_mode(mode)
        return getattr(self, mode)

    def column(self, axis_name: str, mode: str = "raw") -> np.ndarray:
        return self.scores(mode)[:, self.axis_index(axis_name)]

    def row(self, word: str, mode: str = "raw") -> np.ndarray:
        return self.scores(mode)[self.word_index[word]]

    def word_mean_abs(self, word: str, mode: str = "raw") -> float:
        """Mean absolute score of ``word`` across all axes under ``mode``."""
        check_mode(mode)
        return float(self.mean_abs[mode][self.word_index[word]])

    def with_axis(self, store: EmbeddingStore, axis: BiasAxis) -> ScoreMatrix:
        """New matrix with one extra column; existing columns are reused."""
        if tuple(store.words) != self.words:
            raise ValueError("store does not match matrix vocabulary")
        if axis.name in self.axis_names:
            raise ValueError(f"axis {axis.name!r} already present")
        col = _axis_column(store.units, axis)
        return _assemble(
            self.words,
            self.axis_names + (axis.name,),
            np.column_stack([self.raw, col]),
            np.column_stack([self.minmax, minmax_scale(col)]),
            np.column_stack([self.percentile, percentile_scale(col)]),
            self.word_index,
        )

    def without_axis(self, axis_name: str) -> ScoreMatrix:
        """New matrix with one column removed; the rest are unchanged."""
        idx = self.axis_index(axis_name)
        if len(self.axis_names) == 1:
            raise ValueError("cannot remove the last axis")
        keep = [i for i in range(len(self.axis_names)) if i != idx]
        return _assemble(
            self.words,
            tuple(n for n in self.axis_names if n != axis_name),
            self.raw[:, keep],
            self.minmax[:, keep],
            self.percentile[:, keep],
            self.word_index,
        )

    def to_csv(self, mode: str = "raw") -> str:
        """Delimited export: ``word,<axis...>,mean_abs`` with 6-significant-digit
        scores under ``mode``, LF line endings."""
        check_mode(mode)
        scores = self.scores(mode)
        mean_abs = self.mean_abs[mode]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["word", *self.axis_names, "mean_abs"])
        for i, word in enumerate(self.words):
            writer.writerow(
                [word, *(f"{v:.6g}" for v in scores[i]), f"{mean_abs[i]:.6g}"]
            )
        return buf.getvalue()


def _assemble(
    words: tuple[str, ...],
    axis_names: tuple[str, ...],
    raw: np.ndarray,
    minmax: np.ndarray,
    percentile: np.ndarray,
    word_index: Mapping[str, int] | None = None,
) -> ScoreMatrix:
    mean_abs = {
        mode: _frozen(np.abs(plane).mean(axis=1))
        for mode, plane in (("raw", raw), ("minmax", minmax), ("percentile", percentile))
    }
    if word_index is None:
        word_index = MappingProxyType({w: i for i, w in enumerate(words)})
    return ScoreMatrix(
        words=words,
        axis_names=axis_names,
        raw=_frozen(raw),
        minmax=_frozen(minmax),
        percentile=_frozen(percentile),
        mean_abs=MappingProxyType(mean_abs),
        word_index=word_index,
    )


def compute_matrix(store: EmbeddingStore, axes: Sequence[BiasAxis]) -> ScoreMatrix:
    """Score every store word against every axis.

    Columns are independent; scalings and mean absolute scores are derived
    eagerly so queries never recompute them.
    """
    axes = list(axes)
    if not axes:
        raise ValueError("axis list is empty")
    names = [ax.name for ax in axes]
    if len(set(names)) != len(names):
        raise ValueError("duplicate axis names")
    raw = np.column_stack([_axis_column(store.units, ax) for ax in axes])
    minmax = np.column_stack([minmax_scale(raw[:, j]) for j in range(raw.shape[1])])
    pct = np.column_stack([percentile_scale(raw[:, j]) for j in range(raw.shape[1])])
    return _assemble(tuple(store.words), tuple(names), raw, minmax, pct)


def histogram(
    matrix: ScoreMatrix,
    selector: str = ALL_AXES,
    mode: str = "raw",
    bins: int = DEFAULT_BINS,
) -> Histogram:
    """Equal-width histogram of one axis column, or of the per-word mean
    absolute score when ``selector`` is ``"ALL"``."""
    check_mode(mode)
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if selector == ALL_AXES:
        vec = matrix.mean_abs[mode]
    else:
        vec = matrix.column(selector, mode)
    lo, hi = float(vec.min()), float(vec.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(vec, bins=bins, range=(lo, hi))
    return Histogram(
        selector=selector, mode=mode, bin_edges=_frozen(edges), counts=_frozen(counts)
    )
