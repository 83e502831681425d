"""Interactive and batch queries over a score matrix.

Brush selections are conjunctions: a word passes only if its scaled score
lies inside every clause's range.  Histogram range filters are the
opposite, a disjunction of intervals on a single selector.  Intersectional
group extraction is a brush specialization in percentile mode: per queried
subgroup, the range is the top slice [threshold, 1] on the positive end or
[-1, -threshold] on the negative end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .axes import NeutralWordSet
from .scoring import ALL_AXES, ScoreMatrix, check_mode
from .store import EmbeddingStore, nearest_neighbors

ENDS = ("neg", "pos")


class SynonymProvider(Protocol):
    """Optional external synonym source for word profiles.

    Profiles always carry embedding-space nearest neighbors; a provider
    can contribute curated synonyms on top.  The default is no provider,
    which keeps lookups fully offline.
    """

    def synonyms(self, word: str) -> Sequence[str]: ...


class WordNotFoundError(KeyError):
    """Query word absent from the vocabulary; carries spelling suggestions."""

    def __init__(self, word: str, suggestions: Sequence[str] = ()) -> None:
        super().__init__(word)
        self.word = word
        self.suggestions = list(suggestions)

    def __str__(self) -> str:
        if self.suggestions:
            return f"{self.word!r} not in vocabulary; close matches: {', '.join(self.suggestions)}"
        return f"{self.word!r} not in vocabulary"


@dataclass(frozen=True)
class BrushClause:
    """One (axis, end, score-range) filter."""

    axis: str
    end: str
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.end not in ENDS:
            raise ValueError(f"end must be one of {ENDS}, got {self.end!r}")
        if not -1.0 <= self.lo <= self.hi <= 1.0:
            raise ValueError(
                f"range must satisfy -1 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]"
            )
        if self.end == "neg" and self.hi > 0:
            raise ValueError(f"neg-end range must lie in [-1, 0], got hi={self.hi}")
        if self.end == "pos" and self.lo < 0:
            raise ValueError(f"pos-end range must lie in [0, 1], got lo={self.lo}")


@dataclass(frozen=True)
class BrushSelection:
    """A conjunction of clauses on distinct axes, in one scaling mode."""

    clauses: tuple[BrushClause, ...]
    mode: str = "raw"

    def __post_init__(self) -> None:
        check_mode(self.mode)
        names = [c.axis for c in self.clauses]
        if len(set(names)) != len(names):
            raise ValueError(f"clause axes must be distinct, got {names}")


@dataclass(frozen=True)
class IntersectionalQuery:
    """Subgroups whose conjunction defines an intersectional group."""

    subgroups: tuple[tuple[str, str], ...]
    threshold: float = 0.75

    def __post_init__(self) -> None:
        if not self.subgroups:
            raise ValueError("at least one subgroup is required")
        names = [axis for axis, _ in self.subgroups]
        if len(set(names)) != len(names):
            raise ValueError(f"subgroup axes must be distinct, got {names}")
        for axis, end in self.subgroups:
            if end not in ENDS:
                raise ValueError(f"end must be one of {ENDS}, got {end!r}")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")


@dataclass(frozen=True)
class AxisScores:
    axis: str
    raw: float
    minmax: float
    percentile: float


@dataclass(frozen=True)
class WordProfile:
    """Every association of one word, plus its embedding-space neighbors."""

    word: str
    per_axis: tuple[AxisScores, ...]
    mean_abs: Mapping[str, float]
    neighbors: tuple[tuple[str, float], ...]
    synonyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class Flag:
    word: str
    axis: str
    end: str
    score: float


@dataclass(frozen=True)
class AuditReport:
    """Neutral words whose association strength clears a threshold."""

    set_name: str
    threshold: float
    mode: str
    flagged: tuple[Flag, ...]
    words_found: int
    words_in_set: int
    missing: tuple[str, ...] = field(default=())

    @property
    def coverage(self) -> float:
        return self.words_found / self.words_in_set if self.words_in_set else 0.0


@dataclass(frozen=True)
class IntersectionalMatch:
    word: str
    percentiles: Mapping[str, float]


def _rank_words(
    matrix: ScoreMatrix, rows: Iterable[int], axis_idx: Sequence[int], mode: str
) -> list[int]:
    """Order rows by descending mean |scaled score| over the queried axes,
    breaking ties alphabetically."""
    scores = matrix.scores(mode)
    if axis_idx:
        strength = {i: float(np.abs(scores[i, axis_idx]).mean()) for i in rows}
    else:
        strength = {i: 0.0 for i in rows}
    return sorted(strength, key=lambda i: (-strength[i], matrix.words[i]))


def _passing_rows(matrix: ScoreMatrix, sel: BrushSelection) -> np.ndarray:
    scores = matrix.scores(sel.mode)
    mask = np.ones(len(matrix.words), dtype=bool)
    for clause in sel.clauses:
        col = scores[:, matrix.axis_index(clause.axis)]
        mask &= (col >= clause.lo) & (col <= clause.hi)
    return np.flatnonzero(mask)


def brush(matrix: ScoreMatrix, sel: BrushSelection) -> list[str]:
    """Words whose scaled score falls inside every clause range.

    An empty clause list is a vacuous conjunction and returns all words.
    """
    rows = _passing_rows(matrix, sel)
    axis_idx = [matrix.axis_index(c.axis) for c in sel.clauses]
    return [matrix.words[i] for i in _rank_words(matrix, rows, axis_idx, sel.mode)]


def intersectional_group(
    matrix: ScoreMatrix, query: IntersectionalQuery
) -> list[IntersectionalMatch]:
    """Words in the top ``threshold`` percentile slice of every queried subgroup."""
    clauses = []
    for axis, end in query.subgroups:
        if end == "pos":
            clauses.append(BrushClause(axis=axis, end="pos", lo=query.threshold, hi=1.0))
        else:
            clauses.append(BrushClause(axis=axis, end="neg", lo=-1.0, hi=-query.threshold))
    sel = BrushSelection(clauses=tuple(clauses), mode="percentile")
    rows = _passing_rows(matrix, sel)
    axis_idx = [matrix.axis_index(axis) for axis, _ in query.subgroups]
    ordered = _rank_words(matrix, rows, axis_idx, "percentile")
    pct = matrix.percentile
    return [
        IntersectionalMatch(
            word=matrix.words[i],
            percentiles={
                axis: float(pct[i, j]) for (axis, _), j in zip(query.subgroups, axis_idx)
            },
        )
        for i in ordered
    ]


def spelling_suggestions(
    words: Sequence[str], query: str, max_distance: int = 2, limit: int = 5
) -> list[str]:
    """Vocabulary entries within ``max_distance`` edits of ``query``."""
    scored: list[tuple[int, str]] = []
    for w in words:
        if abs(len(w) - len(query)) > max_distance:
            continue
        d = _edit_distance_capped(query, w, max_distance)
        if d is not None:
            scored.append((d, w))
    scored.sort()
    return [w for _, w in scored[:limit]]


def _edit_distance_capped(a: str, b: str, cap: int) -> int | None:
    """Levenshtein distance if <= cap, else None (banded DP)."""
    if a == b:
        return 0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        best = i
        for j, cb in enumerate(b, start=1):
            cost = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
            cur.append(cost)
            best = min(best, cost)
        if best > cap:
            return None
        prev = cur
    return prev[-1] if prev[-1] <= cap else None


def word_profile(
    matrix: ScoreMatrix,
    store: EmbeddingStore,
    word: str,
    k: int = 10,
    synonym_provider: SynonymProvider | None = None,
) -> WordProfile:
    """All per-axis scores of ``word`` under every scaling, plus ``k`` neighbors.

    Unknown words raise :class:`WordNotFoundError` carrying up to five
    close spellings from the vocabulary.  A ``synonym_provider`` adds
    curated synonyms (restricted to in-vocabulary words) alongside the
    embedding-space neighbors.
    """
    row = store.resolve(word)
    if row is None:
        raise WordNotFoundError(word, spelling_suggestions(store.words, word))
    resolved = store.words[row]
    per_axis = tuple(
        AxisScores(
            axis=name,
            raw=float(matrix.raw[row, j]),
            minmax=float(matrix.minmax[row, j]),
            percentile=float(matrix.percentile[row, j]),
        )
        for j, name in enumerate(matrix.axis_names)
    )
    mean_abs = {mode: float(matrix.mean_abs[mode][row]) for mode in matrix.mean_abs}
    synonyms: tuple[str, ...] = ()
    if synonym_provider is not None:
        seen: set[int] = {row}
        kept = []
        for candidate in synonym_provider.synonyms(resolved):
            other = store.resolve(candidate)
            if other is not None and other not in seen:
                seen.add(other)
                kept.append(store.words[other])
        synonyms = tuple(kept)
    return WordProfile(
        word=resolved,
        per_axis=per_axis,
        mean_abs=mean_abs,
        neighbors=tuple(nearest_neighbors(store, resolved, k)),
        synonyms=synonyms,
    )


def audit_neutral_set(
    matrix: ScoreMatrix,
    store: EmbeddingStore,
    nset: NeutralWordSet,
    threshold: float = 0.75,
    mode: str = "percentile",
) -> AuditReport:
    """Flag every (axis, end) where a set word's |score| reaches ``threshold``."""
    check_mode(mode)
    if mode != "raw" and not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1] for scaled modes, got {threshold}")
    if mode == "raw" and threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    scores = matrix.scores(mode)
    flagged: list[Flag] = []
    missing: list[str] = []
    seen_rows: set[int] = set()
    found = 0
    for word in nset.words:
        row = store.resolve(word)
        if row is None:
            missing.append(word)
            continue
        if row in seen_rows:
            continue
        seen_rows.add(row)
        found += 1
        for j, axis in enumerate(matrix.axis_names):
            score = float(scores[row, j])
            if abs(score) >= threshold:
                flagged.append(
                    Flag(
                        word=store.words[row],
                        axis=axis,
                        end="pos" if score > 0 else "neg",
                        score=score,
                    )
                )
    return AuditReport(
        set_name=nset.name,
        threshold=threshold,
        mode=mode,
        flagged=tuple(flagged),
        words_found=found,
        words_in_set=len(nset.words),
        missing=tuple(missing),
    )


def range_filter(
    matrix: ScoreMatrix,
    selector: str,
    mode: str,
    ranges: Sequence[tuple[float, float]],
) -> list[str]:
    """Words whose selected score falls in the union of ``ranges``.

    ``selector`` is an axis name or ``"ALL"`` (per-word mean absolute
    score).  An empty range list selects nothing.  Results keep vocabulary
    order.
    """
    check_mode(mode)
    if selector == ALL_AXES:
        vec = matrix.mean_abs[mode]
    else:
        vec = matrix.column(selector, mode)
    mask = np.zeros(len(matrix.words), dtype=bool)
    for pair in ranges:
        if len(pair) != 2:
            raise ValueError(f"range must be a (lo, hi) pair, got {pair!r}")
        lo, hi = float(pair[0]), float(pair[1])
        if not np.isfinite(lo) or not np.isfinite(hi) or lo > hi:
            raise ValueError(f"malformed range [{lo}, {hi}]")
        mask |= (vec >= lo) & (vec <= hi)
    return [matrix.words[i] for i in np.flatnonzero(mask)]
