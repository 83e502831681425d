"""Embedding file parsing, vocabulary filtering, and vector-space lookups.

Three on-disk formats are supported:

* ``word2vec-text``   -- header line ``"<vocab_count> <dim>"``, then one
  ``"<word> <f1> ... <fd>"`` line per entry.
* ``word2vec-binary`` -- the same ASCII header line, then per entry the word
  bytes terminated by a single space followed by ``dim`` little-endian
  float32 values, optionally followed by a newline (both variants occur in
  published files and both are tolerated).
* ``glove-text``      -- as word2vec-text but with no header; the dimension
  is inferred from the first row.

Word order is preserved from the source file.  Published embeddings are
sorted by descending corpus frequency, so row index doubles as frequency
rank.
"""

from __future__ import annotations

import io
import logging
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FORMATS = ("word2vec-text", "word2vec-binary", "glove-text")

# ASCII lowercase letters only; non-ASCII "lowercase" words are filtered out.
_LOWER_ALPHA = re.compile(r"[a-z]+")


class EmbeddingFormatError(ValueError):
    """An embedding stream violates its declared format."""


@dataclass(frozen=True)
class VocabFilter:
    """Vocabulary preprocessing rules.

    Keeps words that are all-lowercase alphabetic (when ``lowercase_only``)
    and at most ``max_len`` characters, caps the result at the ``max_words``
    most frequent entries, then re-appends any ``must_include`` words that
    the filter or the cap removed.
    """

    max_words: int = 50_000
    max_len: int = 20
    lowercase_only: bool = True
    must_include: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.max_words < 1:
            raise ValueError(f"max_words must be >= 1, got {self.max_words}")
        if self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")
        object.__setattr__(self, "must_include", frozenset(self.must_include))

    def admits(self, word: str) -> bool:
        if len(word) > self.max_len:
            return False
        if self.lowercase_only and _LOWER_ALPHA.fullmatch(word) is None:
            return False
        return True


class EmbeddingStore:
    """Immutable vocabulary plus dense vectors.

    Vectors are held as float32 (matching source-file precision); a float64
    unit-normalized copy is precomputed so that all distance arithmetic
    accumulates in 64-bit.  Instances are safe to share across threads.
    """

    __slots__ = ("words", "vectors", "dim", "index", "_units")

    def __init__(self, words: Sequence[str], vectors: np.ndarray) -> None:
        vectors = np.ascontiguousarray(vectors, dtype=np.float32)
        words = list(words)
        if vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d array")
        if len(words) != vectors.shape[0]:
            raise ValueError(
                f"{len(words)} words but {vectors.shape[0]} vector rows"
            )
        if not words:
            raise ValueError("store must contain at least one word")
        index = {w: i for i, w in enumerate(words)}
        if len(index) != len(words):
            raise ValueError("duplicate words in store")
        doubles = vectors.astype(np.float64)
        norms = np.linalg.norm(doubles, axis=1)
        if not np.all(norms > 0):
            bad = words[int(np.argmin(norms))]
            raise ValueError(f"zero-norm vector for word {bad!r}")
        vectors.setflags(write=False)
        units = doubles / norms[:, None]
        units.setflags(write=False)
        self.words = words
        self.vectors = vectors
        self.dim = int(vectors.shape[1])
        self.index = index
        self._units = units

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        return self.words == other.words and np.array_equal(
            self.vectors, other.vectors
        )

    @property
    def units(self) -> np.ndarray:
        """Float64 unit-normalized vectors, one row per word (read-only)."""
        return self._units

    def resolve(self, word: str) -> int | None:
        """Row index for ``word``, falling back to its lowercase form."""
        row = self.index.get(word)
        if row is None:
            row = self.index.get(word.lower())
        return row

    def vector(self, word: str) -> np.ndarray | None:
        """Vector for ``word`` (exact, then lowercased); None if absent."""
        row = self.resolve(word)
        return None if row is None else self.vectors[row]


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cos(a, b), clamped to [0, 2] against floating-point drift."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine distance is undefined for zero-norm vectors")
    sim = float(np.dot(a, b)) / (na * nb)
    return float(min(max(1.0 - sim, 0.0), 2.0))


def nearest_neighbors(
    store: EmbeddingStore, word: str, k: int
) -> list[tuple[str, float]]:
    """The ``k`` closest distinct words to ``word`` by cosine distance.

    The query word itself is excluded; results are sorted by ascending
    distance with ties broken by vocabulary order.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    row = store.resolve(word)
    if row is None:
        raise KeyError(word)
    if k == 0:
        return []
    dists = np.clip(1.0 - store.units @ store.units[row], 0.0, 2.0)
    order = np.argsort(dists, kind="stable")
    out: list[tuple[str, float]] = []
    for i in order:
        if i == row:
            continue
        out.append((store.words[i], float(dists[i])))
        if len(out) == k:
            break
    return out


def preprocess(store: EmbeddingStore, filt: VocabFilter) -> EmbeddingStore:
    """Apply ``filt`` to ``store``, preserving original word order.

    Words passing the filter are kept up to ``max_words``; ``must_include``
    words present in the original store but removed (by rule or cap) are
    appended afterwards, again in original order.
    """
    kept = [i for i, w in enumerate(store.words) if filt.admits(w)]
    kept = kept[: filt.max_words]
    kept_set = set(kept)
    if filt.must_include:
        for i, w in enumerate(store.words):
            if w in filt.must_include and i not in kept_set:
                kept.append(i)
    if not kept:
        raise ValueError("no words survive preprocessing")
    words = [store.words[i] for i in kept]
    return EmbeddingStore(words, store.vectors[kept])


# ---------------------------------------------------------------------------
# Parsing


def _as_stream(source: str | Path | bytes | BinaryIO) -> BinaryIO:
    if isinstance(source, (str, Path)):
        return open(source, "rb")
    if isinstance(source, bytes):
        return io.BytesIO(source)
    return source


def load_embedding(
    source: str | Path | bytes | BinaryIO, format: str = "word2vec-text"
) -> EmbeddingStore:
    """Parse an embedding stream in the declared ``format``.

    Duplicate words keep their first occurrence and zero-norm vectors are
    dropped, each with a logged warning; a dimension mismatch on any row or
    an empty result is an error.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}, expected one of {FORMATS}")
    stream = _as_stream(source)
    try:
        if format == "word2vec-binary":
            words, rows = _parse_word2vec_binary(stream)
        else:
            words, rows = _parse_text(stream, header=format == "word2vec-text")
    finally:
        if isinstance(source, (str, Path)):
            stream.close()
    if not words:
        raise EmbeddingFormatError("embedding stream contains no usable vectors")
    return EmbeddingStore(words, np.array(rows, dtype=np.float32))


class _RowCollector:
    """Shared duplicate/zero-norm handling for all parsers."""

    def __init__(self) -> None:
        self.words: list[str] = []
        self.rows: list[np.ndarray] = []
        self._seen: set[str] = set()

    def add(self, word: str, vec: np.ndarray) -> None:
        if word in self._seen:
            logger.warning("duplicate word %r: keeping first occurrence", word)
            return
        if not np.any(vec):
            logger.warning("zero-norm vector for word %r: dropping", word)
            return
        self._seen.add(word)
        self.words.append(word)
        self.rows.append(vec)


def _parse_header(line: bytes) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(f"malformed header line: {line!r}")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise EmbeddingFormatError(f"malformed header line: {line!r}") from None
    if count < 0 or dim < 1:
        raise EmbeddingFormatError(f"malformed header line: {line!r}")
    return count, dim


def _parse_text(stream: BinaryIO, header: bool) -> tuple[list[str], list[np.ndarray]]:
    text = stream.read().decode("utf-8", errors="replace")
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise EmbeddingFormatError("empty embedding stream")
    dim: int | None = None
    declared = None
    if header:
        declared, dim = _parse_header(lines[0].encode())
        lines = lines[1:]
    collected = _RowCollector()
    for n, line in enumerate(lines, start=2 if header else 1):
        parts = line.rstrip().split(" ")
        word, fields = parts[0], parts[1:]
        if dim is None:
            dim = len(fields)
            if dim == 0:
                raise EmbeddingFormatError(f"line {n}: no vector components")
        if len(fields) != dim:
            raise EmbeddingFormatError(
                f"line {n}: expected {dim} components, got {len(fields)}"
            )
        try:
            vec = np.array(fields, dtype=np.float32)
        except ValueError:
            raise EmbeddingFormatError(f"line {n}: non-numeric component") from None
        collected.add(word, vec)
    if declared is not None and declared != len(lines):
        logger.warning(
            "header declares %d entries but stream has %d", declared, len(lines)
        )
    return collected.words, collected.rows


def _parse_word2vec_binary(stream: BinaryIO) -> tuple[list[str], list[np.ndarray]]:
    header = stream.readline()
    if not header:
        raise EmbeddingFormatError("empty embedding stream")
    count, dim = _parse_header(header)
    vec_bytes = 4 * dim
    collected = _RowCollector()
    for _ in range(count):
        word_buf = bytearray()
        while True:
            ch = stream.read(1)
            if not ch:
                raise EmbeddingFormatError("truncated stream while reading word")
            if ch == b" ":
                break
            if ch in (b"\n", b"\r") and not word_buf:
                continue  # entries may be newline-separated
            word_buf.extend(ch)
        buf = stream.read(vec_bytes)
        if len(buf) != vec_bytes:
            raise EmbeddingFormatError("truncated stream while reading vector")
        vec = np.frombuffer(buf, dtype="<f4").copy()
        collected.add(word_buf.decode("utf-8", errors="replace"), vec)
    return collected.words, collected.rows


# ---------------------------------------------------------------------------
# Serialization (round-trip partner of the parsers)


def _format_component(value: np.floating) -> str:
    # 9 significant digits round-trip float32 exactly.
    return f"{float(value):.9g}"


def save_embedding(
    store: EmbeddingStore,
    dest: str | Path | BinaryIO,
    format: str = "word2vec-text",
) -> None:
    """Write ``store`` in the declared format; inverse of :func:`load_embedding`."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}, expected one of {FORMATS}")
    own = isinstance(dest, (str, Path))
    stream: BinaryIO = open(dest, "wb") if own else dest  # type: ignore[arg-type]
    try:
        if format == "word2vec-binary":
            stream.write(f"{len(store)} {store.dim}\n".encode())
            for word, row in zip(store.words, store.vectors):
                stream.write(word.encode("utf-8") + b" ")
                stream.write(struct.pack(f"<{store.dim}f", *row))
                stream.write(b"\n")
        else:
            if format == "word2vec-text":
                stream.write(f"{len(store)} {store.dim}\n".encode())
            for word, row in zip(store.words, store.vectors):
                comps = " ".join(_format_component(v) for v in row)
                stream.write(f"{word} {comps}\n".encode())
    finally:
        if own:
            stream.close()
