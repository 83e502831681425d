"""Serialized forms of query results: JSON dicts, CSV, and markdown tables.

The CSV schema matches the full score export (``word,<axis...>,mean_abs``)
restricted to the result words; JSON results follow
``{query, mode, threshold, results: [{word, scores: {axis: score}}]}``.
"""

from __future__ import annotations

import csv
import io
from typing import Mapping, Sequence

from .queries import AuditReport, IntersectionalMatch, IntersectionalQuery, WordProfile
from .scoring import ScoreMatrix


def subset_csv(matrix: ScoreMatrix, words: Sequence[str], mode: str) -> str:
    """Score-export CSV rows for ``words`` only, in the given order."""
    scores = matrix.scores(mode)
    mean_abs = matrix.mean_abs[mode]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", *matrix.axis_names, "mean_abs"])
    for word in words:
        i = matrix.word_index[word]
        writer.writerow([word, *(f"{v:.6g}" for v in scores[i]), f"{mean_abs[i]:.6g}"])
    return buf.getvalue()


def audit_json(report: AuditReport) -> dict:
    per_word: dict[str, dict[str, float]] = {}
    order: list[str] = []
    for flag in report.flagged:
        if flag.word not in per_word:
            per_word[flag.word] = {}
            order.append(flag.word)
        per_word[flag.word][flag.axis] = flag.score
    return {
        "query": {"set": report.set_name},
        "mode": report.mode,
        "threshold": report.threshold,
        "results": [{"word": w, "scores": per_word[w]} for w in order],
        "flags": [
            {"word": f.word, "axis": f.axis, "end": f.end, "score": f.score}
            for f in report.flagged
        ],
        "coverage": report.coverage,
        "words_found": report.words_found,
        "words_in_set": report.words_in_set,
        "missing": list(report.missing),
    }


def audit_csv(matrix: ScoreMatrix, report: AuditReport) -> str:
    words: list[str] = []
    for flag in report.flagged:
        if flag.word not in words:
            words.append(flag.word)
    return subset_csv(matrix, words, report.mode)


def intersectional_json(
    query: IntersectionalQuery, matches: Sequence[IntersectionalMatch]
) -> dict:
    return {
        "query": {
            "subgroups": [{"axis": axis, "end": end} for axis, end in query.subgroups]
        },
        "mode": "percentile",
        "threshold": query.threshold,
        "results": [
            {"word": m.word, "scores": dict(m.percentiles)} for m in matches
        ],
    }


def intersectional_csv(
    matrix: ScoreMatrix, matches: Sequence[IntersectionalMatch]
) -> str:
    return subset_csv(matrix, [m.word for m in matches], "percentile")


def group_label(subgroups: Sequence[tuple[str, str]], axes) -> str:
    """Human name of an intersectional group, e.g. ``"Male - Islam"``."""
    by_name = {ax.name: ax for ax in axes}
    parts = []
    for axis, end in subgroups:
        ax = by_name.get(axis)
        parts.append(getattr(getattr(ax, end, None), "name", f"{axis}:{end}"))
    return " - ".join(parts)


def intersections_markdown(
    rows: Sequence[tuple[str, Sequence[IntersectionalMatch]]],
) -> str:
    """Two-column table: intersectional group, associated words."""
    lines = [
        "| Intersectional Group | Associated Words |",
        "| --- | --- |",
    ]
    for label, matches in rows:
        lines.append(f"| {label} | {', '.join(m.word for m in matches)} |")
    return "\n".join(lines) + "\n"


def profile_json(profile: WordProfile) -> dict:
    return {
        "word": profile.word,
        "per_axis": [
            {
                "axis": s.axis,
                "raw": s.raw,
                "minmax": s.minmax,
                "percentile": s.percentile,
            }
            for s in profile.per_axis
        ],
        "mean_abs": dict(profile.mean_abs),
        "neighbors": [
            {"word": w, "distance": d} for w, d in profile.neighbors
        ],
        "synonyms": list(profile.synonyms),
    }
