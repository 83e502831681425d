"""Bias axes: named pairs of subgroups with centroid vectors.

An axis represents one social categorization (gender, race, ...).  Each of
its two subgroups is defined by a curated list of group words; the subgroup
vector is the arithmetic mean of the embeddings of the group words that
resolve in the store.  Sign convention: the first subgroup passed to
:func:`create_axis` becomes the negative end of the axis, the second the
positive end.

The package ships five default axes and four neutral-word sets as data
files; both can also be loaded from user-supplied config files of the same
shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .store import EmbeddingStore

NEUTRAL_SET_NAMES = (
    "Profession",
    "PhysicalAppearance",
    "Extremism",
    "PersonalityTraits",
)


class DuplicateAxisError(ValueError):
    """An axis with this name is already registered."""


class UnknownAxisError(KeyError):
    """No axis with this name is registered."""


class UnresolvableSubgroupError(ValueError):
    """None of a subgroup's words are present in the store."""


@dataclass(frozen=True)
class Subgroup:
    """One pole of a bias axis."""

    name: str
    group_words: tuple[str, ...]
    resolved_words: tuple[str, ...]
    centroid: np.ndarray

    def __post_init__(self) -> None:
        self.centroid.setflags(write=False)


@dataclass(frozen=True)
class BiasAxis:
    """A named bias type; scores < 0 associate with ``neg``, > 0 with ``pos``."""

    name: str
    neg: Subgroup
    pos: Subgroup


@dataclass(frozen=True)
class NeutralWordSet:
    """Words that should ideally carry no subgroup association."""

    name: str
    words: tuple[str, ...]


def _dedupe(words: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    out = []
    for w in words:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def build_subgroup(
    name: str, words: Sequence[str], store: EmbeddingStore, axis_name: str = ""
) -> Subgroup:
    """Resolve ``words`` in ``store`` and average the surviving vectors.

    Words absent from the store are silently dropped.  Duplicates (including
    distinct spellings resolving to the same store row) are averaged once.
    """
    where = f"axis {axis_name!r}, subgroup {name!r}" if axis_name else f"subgroup {name!r}"
    if not words:
        raise ValueError(f"{where}: group word list is empty")
    for w in words:
        if not w or any(ch.isspace() for ch in w):
            raise ValueError(f"{where}: invalid group word {w!r}")
    group_words = _dedupe(words)
    resolved: list[str] = []
    rows: list[int] = []
    seen_rows: set[int] = set()
    for w in group_words:
        row = store.resolve(w)
        if row is None or row in seen_rows:
            continue
        seen_rows.add(row)
        resolved.append(w)
        rows.append(row)
    if not resolved:
        raise UnresolvableSubgroupError(f"{where}: no group words found in store")
    centroid = store.vectors[rows].astype(np.float64).mean(axis=0)
    if not np.any(centroid):
        raise ValueError(f"{where}: group-word vectors average to zero")
    return Subgroup(
        name=name,
        group_words=tuple(group_words),
        resolved_words=tuple(resolved),
        centroid=centroid,
    )


def create_axis(
    name: str,
    sub_a: tuple[str, Sequence[str]],
    sub_b: tuple[str, Sequence[str]],
    store: EmbeddingStore,
) -> BiasAxis:
    """Build an axis; ``sub_a`` becomes the negative end, ``sub_b`` the positive."""
    if not name:
        raise ValueError("axis name must be nonempty")
    if sub_a[0] == sub_b[0]:
        raise ValueError(f"subgroup names must differ, both are {sub_a[0]!r}")
    return BiasAxis(
        name=name,
        neg=build_subgroup(sub_a[0], sub_a[1], store, axis_name=name),
        pos=build_subgroup(sub_b[0], sub_b[1], store, axis_name=name),
    )


class AxisRegistry:
    """Ordered collection of uniquely named axes.

    Mutations must be serialized by the caller (single-writer contract);
    reads between mutations are safe, and each BiasAxis value is immutable.
    """

    def __init__(self, axes: Iterable[BiasAxis] = ()) -> None:
        self._axes: dict[str, BiasAxis] = {}
        for axis in axes:
            self.add(axis)

    def __len__(self) -> int:
        return len(self._axes)

    def __contains__(self, name: str) -> bool:
        return name in self._axes

    def __iter__(self):
        return iter(self._axes.values())

    @property
    def axes(self) -> tuple[BiasAxis, ...]:
        return tuple(self._axes.values())

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._axes)

    def get(self, name: str) -> BiasAxis:
        try:
            return self._axes[name]
        except KeyError:
            raise UnknownAxisError(name) from None

    def add(self, axis: BiasAxis) -> BiasAxis:
        if axis.name in self._axes:
            raise DuplicateAxisError(f"axis {axis.name!r} already registered")
        self._axes[axis.name] = axis
        return axis

    def create(
        self,
        name: str,
        sub_a: tuple[str, Sequence[str]],
        sub_b: tuple[str, Sequence[str]],
        store: EmbeddingStore,
    ) -> BiasAxis:
        if name in self._axes:
            raise DuplicateAxisError(f"axis {name!r} already registered")
        return self.add(create_axis(name, sub_a, sub_b, store))

    def delete(self, name: str) -> None:
        if name not in self._axes:
            raise UnknownAxisError(name)
        del self._axes[name]

    def copy(self) -> AxisRegistry:
        reg = AxisRegistry()
        reg._axes = dict(self._axes)
        return reg


# ---------------------------------------------------------------------------
# Shipped defaults and config files


def _load_packaged(filename: str) -> dict:
    with resources.files("embias.data").joinpath(filename).open("rb") as fh:
        return json.load(fh)


def default_axis_config() -> list[dict]:
    """The five shipped axis definitions as plain config dicts."""
    return _load_packaged("default_axes.json")["axes"]


def load_axis_config(path: str | Path) -> list[dict]:
    with open(path, "rb") as fh:
        doc = json.load(fh)
    axes = doc.get("axes")
    if not isinstance(axes, list):
        raise ValueError(f"{path}: expected an object with an 'axes' list")
    return axes


def save_axis_config(axes: Iterable[BiasAxis], path: str | Path) -> None:
    doc = {
        "axes": [
            {
                "name": ax.name,
                "neg": {"name": ax.neg.name, "words": list(ax.neg.group_words)},
                "pos": {"name": ax.pos.name, "words": list(ax.pos.group_words)},
            }
            for ax in axes
        ]
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def axes_from_config(config: Iterable[dict], store: EmbeddingStore) -> list[BiasAxis]:
    out = []
    for entry in config:
        out.append(
            create_axis(
                entry["name"],
                (entry["neg"]["name"], entry["neg"]["words"]),
                (entry["pos"]["name"], entry["pos"]["words"]),
                store,
            )
        )
    return out


def default_axes(store: EmbeddingStore) -> list[BiasAxis]:
    """The five shipped axes (Gender, Age, Religion, Race, Economic).

    Name-cased group words (e.g. "Taylor") resolve through the store's
    lowercase fallback when the vocabulary is lowercase-only.
    """
    return axes_from_config(default_axis_config(), store)


def default_registry(store: EmbeddingStore) -> AxisRegistry:
    return AxisRegistry(default_axes(store))


def config_group_words(config: Iterable[dict]) -> list[str]:
    """Every group word of an axis config, in order, deduplicated."""
    words: list[str] = []
    for entry in config:
        words.extend(entry["neg"]["words"])
        words.extend(entry["pos"]["words"])
    return _dedupe(words)


def default_group_words() -> list[str]:
    """Every group word of the shipped axes, in config order, deduplicated."""
    return config_group_words(default_axis_config())


def neutral_sets() -> list[NeutralWordSet]:
    """The four shipped neutral-word sets, deduplicated preserving order."""
    doc = _load_packaged("neutral_words.json")
    return [
        NeutralWordSet(name=entry["name"], words=tuple(_dedupe(entry["words"])))
        for entry in doc["sets"]
    ]


def neutral_set(name: str) -> NeutralWordSet:
    for nset in neutral_sets():
        if nset.name == name:
            return nset
    raise KeyError(name)


def neutral_words() -> list[str]:
    """Every shipped neutral word, deduplicated across sets."""
    words: list[str] = []
    for nset in neutral_sets():
        words.extend(nset.words)
    return _dedupe(words)


def shipped_vocabulary() -> frozenset[str]:
    """All shipped group and neutral words plus their lowercase forms.

    Used as the preprocessing must_include so the default axes always
    resolve; the lowercase forms cover name-cased entries in vocabularies
    that were already lowercased.
    """
    words = set(default_group_words()) | set(neutral_words())
    words |= {w.lower() for w in words}
    return frozenset(words)
