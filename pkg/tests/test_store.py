"""Embedding parsing, preprocessing, and vector-space lookups."""

from __future__ import annotations

import io
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embias import (
    EmbeddingFormatError,
    EmbeddingStore,
    VocabFilter,
    cosine_distance,
    load_embedding,
    nearest_neighbors,
    preprocess,
    save_embedding,
)

from oracles import dec_cosine_distance, naive_nearest

W2V_TEXT_MINIMAL = b"2 3\na 1 0 0\nb 0 1 0\n"


def make_store(entries: dict[str, list[float]]) -> EmbeddingStore:
    words = list(entries)
    return EmbeddingStore(words, np.array([entries[w] for w in words], dtype=np.float32))


class TestLoadEmbedding:
    def test_word2vec_text_minimal(self):
        store = load_embedding(W2V_TEXT_MINIMAL, "word2vec-text")
        assert store.words == ["a", "b"]
        assert store.dim == 3
        assert np.array_equal(store.vectors, [[1, 0, 0], [0, 1, 0]])

    def test_glove_text_no_header(self):
        store = load_embedding(b"a 1 0\nb 0 1\n", "glove-text")
        assert store.words == ["a", "b"]
        assert store.dim == 2

    def test_binary_matches_text(self):
        text_store = load_embedding(W2V_TEXT_MINIMAL, "word2vec-text")
        buf = io.BytesIO()
        save_embedding(text_store, buf, "word2vec-binary")
        bin_store = load_embedding(buf.getvalue(), "word2vec-binary")
        assert bin_store.words == text_store.words
        assert np.array_equal(
            bin_store.vectors.view(np.uint32), text_store.vectors.view(np.uint32)
        )

    def test_binary_without_trailing_newline(self):
        # some published files omit the newline between entries
        raw = b"2 2\na \x00\x00\x80?\x00\x00\x00\x00b \x00\x00\x00\x00\x00\x00\x80?"
        store = load_embedding(raw, "word2vec-binary")
        assert store.words == ["a", "b"]
        assert np.array_equal(store.vectors, [[1, 0], [0, 1]])

    def test_malformed_header(self):
        with pytest.raises(EmbeddingFormatError):
            load_embedding(b"not a header\na 1 0\n", "word2vec-text")

    def test_dimension_mismatch(self):
        with pytest.raises(EmbeddingFormatError, match="expected 3"):
            load_embedding(b"2 3\na 1 0 0\nb 0 1\n", "word2vec-text")

    def test_non_numeric_component(self):
        with pytest.raises(EmbeddingFormatError, match="non-numeric"):
            load_embedding(b"1 2\na 1 oops\n", "word2vec-text")

    def test_duplicate_word_keeps_first(self, caplog):
        with caplog.at_level(logging.WARNING, logger="embias.store"):
            store = load_embedding(b"a 1 0\na 0 1\nb 0 2\n", "glove-text")
        assert store.words == ["a", "b"]
        assert np.array_equal(store.vector("a"), [1, 0])
        assert "duplicate word 'a'" in caplog.text

    def test_zero_norm_vector_dropped(self, caplog):
        with caplog.at_level(logging.WARNING, logger="embias.store"):
            store = load_embedding(b"a 1 0\nz 0 0\nb 0 1\n", "glove-text")
        assert store.words == ["a", "b"]
        assert "zero-norm" in caplog.text

    def test_empty_file_errors(self):
        with pytest.raises(EmbeddingFormatError):
            load_embedding(b"", "glove-text")
        with pytest.raises(EmbeddingFormatError):
            load_embedding(b"", "word2vec-binary")

    def test_all_rows_invalid_errors(self):
        with pytest.raises(EmbeddingFormatError, match="no usable vectors"):
            load_embedding(b"1 2\na 0 0\n", "word2vec-text")

    def test_truncated_binary(self):
        good = io.BytesIO()
        save_embedding(load_embedding(W2V_TEXT_MINIMAL, "word2vec-text"), good, "word2vec-binary")
        with pytest.raises(EmbeddingFormatError, match="truncated"):
            load_embedding(good.getvalue()[:-5], "word2vec-binary")

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="unknown format"):
            load_embedding(W2V_TEXT_MINIMAL, "fasttext")


class TestRoundTrip:
    def test_text_round_trip_exact(self):
        rng = np.random.default_rng(7)
        vectors = rng.normal(size=(40, 6)).astype(np.float32)
        store = EmbeddingStore([f"w{i:02d}" for i in range(40)], vectors)
        buf = io.BytesIO()
        save_embedding(store, buf, "word2vec-text")
        again = load_embedding(buf.getvalue(), "word2vec-text")
        assert again.words == store.words
        assert np.array_equal(
            again.vectors.view(np.uint32), store.vectors.view(np.uint32)
        )

    def test_glove_round_trip(self):
        store = load_embedding(b"a 1.5 -2.25\nb 0.125 3\n", "glove-text")
        buf = io.BytesIO()
        save_embedding(store, buf, "glove-text")
        assert load_embedding(buf.getvalue(), "glove-text") == store

    def test_binary_round_trip_adversarial_floats(self):
        rng = np.random.default_rng(13)
        vectors = (rng.normal(size=(64, 4)) * 10.0 ** rng.integers(-20, 20, size=(64, 4))).astype(np.float32)
        vectors[np.all(vectors == 0, axis=1), 0] = 1.0
        store = EmbeddingStore([f"x{i:03d}" for i in range(64)], vectors)
        for fmt in ("word2vec-binary", "word2vec-text"):
            buf = io.BytesIO()
            save_embedding(store, buf, fmt)
            again = load_embedding(buf.getvalue(), fmt)
            assert np.array_equal(
                again.vectors.view(np.uint32), store.vectors.view(np.uint32)
            ), fmt


class TestPreprocess:
    def test_case_and_charset_rules(self):
        store = make_store(
            {"Apple": [1, 0], "apple": [0, 1], "apple_pie": [1, 1], "cat": [2, 1]}
        )
        out = preprocess(store, VocabFilter())
        assert out.words == ["apple", "cat"]

    def test_non_ascii_excluded(self):
        store = make_store({"café": [1, 0], "cafe": [0, 1]})
        assert preprocess(store, VocabFilter()).words == ["cafe"]

    def test_length_cap(self):
        word20 = "a" * 20
        word21 = "a" * 21
        store = make_store({word21: [1, 0], word20: [0, 1]})
        assert preprocess(store, VocabFilter()).words == [word20]

    def test_max_words_then_must_include(self):
        entries = {f"w{chr(97 + i)}": [float(i + 1), 1.0] for i in range(10)}
        store = make_store(entries)
        filt = VocabFilter(max_words=5, must_include={"wi"})
        out = preprocess(store, filt)
        assert out.words == ["wa", "wb", "wc", "wd", "we", "wi"]

    def test_must_include_restores_rule_cut_words(self):
        store = make_store({"Taylor": [1, 0], "cat": [0, 1]})
        out = preprocess(store, VocabFilter(must_include={"Taylor"}))
        assert out.words == ["cat", "Taylor"]

    def test_must_include_absent_from_store_ignored(self):
        store = make_store({"cat": [0, 1]})
        out = preprocess(store, VocabFilter(must_include={"missing"}))
        assert out.words == ["cat"]

    def test_idempotent(self):
        entries = {f"w{chr(97 + i)}": [float(i + 1), 1.0] for i in range(10)}
        entries["Taylor"] = [5.0, 5.0]
        store = make_store(entries)
        filt = VocabFilter(max_words=4, must_include={"Taylor", "wh"})
        once = preprocess(store, filt)
        twice = preprocess(once, filt)
        assert twice == once

    def test_lowercase_only_disabled(self):
        store = make_store({"Apple": [1, 0], "apple_pie": [0, 1]})
        out = preprocess(store, VocabFilter(lowercase_only=False))
        assert out.words == ["Apple", "apple_pie"]

    def test_empty_result_errors(self):
        store = make_store({"Apple": [1, 0]})
        with pytest.raises(ValueError, match="no words survive"):
            preprocess(store, VocabFilter())

    def test_filter_validation(self):
        with pytest.raises(ValueError):
            VocabFilter(max_words=0)
        with pytest.raises(ValueError):
            VocabFilter(max_len=0)


class TestVectorLookup:
    def test_exact_match(self):
        store = make_store({"apple": [1, 2]})
        assert np.array_equal(store.vector("apple"), [1, 2])

    def test_lowercase_fallback(self):
        store = make_store({"apple": [1, 2]})
        assert np.array_equal(store.vector("Apple"), [1, 2])

    def test_missing_returns_none(self):
        store = make_store({"apple": [1, 2]})
        assert store.vector("zzzz") is None

    def test_exact_beats_fallback(self):
        store = make_store({"Apple": [1, 0], "apple": [0, 1]})
        assert np.array_equal(store.vector("Apple"), [1, 0])


# keep magnitudes either zero or comfortably normal so norms cannot underflow
_component = st.floats(-10, 10).map(lambda x: 0.0 if abs(x) < 1e-3 else x)


class TestCosineDistance:
    def test_identical_vectors(self):
        v = np.array([0.3, -1.2, 4.0])
        assert cosine_distance(v, v) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self):
        assert cosine_distance([1, 0], [0, 1]) == 1.0

    def test_45_degrees(self):
        # frozen from the 50-digit Decimal oracle: 1 - 1/sqrt(2)
        expected = float(dec_cosine_distance([1, 1], [1, 0]))
        assert expected == pytest.approx(0.2928932188134524, abs=1e-15)
        assert cosine_distance([1, 1], [1, 0]) == pytest.approx(expected, abs=1e-12)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine_distance([0, 0], [1, 0])

    def test_positive_scaling_invariance(self):
        a = np.array([2.0, -1.0, 0.5])
        assert cosine_distance(a, 3.0 * a) == 0.0

    @given(
        st.lists(_component, min_size=3, max_size=3),
        st.lists(_component, min_size=3, max_size=3),
    )
    @settings(max_examples=200)
    def test_symmetry_and_range(self, a, b):
        if not any(a) or not any(b):
            return
        d1 = cosine_distance(a, b)
        d2 = cosine_distance(b, a)
        assert d1 == pytest.approx(d2, abs=1e-12)
        assert 0.0 <= d1 <= 2.0


class TestNearestNeighbors:
    def setup_method(self):
        self.store = make_store({"a": [1, 0], "b": [0.9, 0.1], "c": [0, 1]})

    def test_k_zero(self):
        assert nearest_neighbors(self.store, "a", 0) == []

    def test_matches_exhaustive_scan(self):
        got = nearest_neighbors(self.store, "a", 2)
        want = naive_nearest(self.store, "a", 2)
        assert [w for w, _ in got] == [w for w, _ in want] == ["b", "c"]
        for (_, d1), (_, d2) in zip(got, want):
            assert d1 == pytest.approx(d2, abs=1e-12)

    def test_k_at_least_vocab_returns_all_others(self):
        got = nearest_neighbors(self.store, "a", 99)
        assert [w for w, _ in got] == ["b", "c"]

    def test_excludes_query_and_sorted(self):
        rng = np.random.default_rng(11)
        store = EmbeddingStore(
            [f"w{i}" for i in range(30)], rng.normal(size=(30, 5)).astype(np.float32)
        )
        got = nearest_neighbors(store, "w7", 29)
        assert "w7" not in [w for w, _ in got]
        dists = [d for _, d in got]
        assert dists == sorted(dists)
        want = naive_nearest(store, "w7", 29)
        assert [w for w, _ in got] == [w for w, _ in want]
        for (_, d1), (_, d2) in zip(got, want):
            assert d1 == pytest.approx(d2, abs=1e-12)

    def test_tie_broken_by_vocab_order(self):
        store = make_store({"q": [1, 0], "far": [0, 1], "dup": [0, 1]})
        got = nearest_neighbors(store, "q", 2)
        assert [w for w, _ in got] == ["far", "dup"]

    def test_case_fallback_excludes_resolved_row(self):
        got = nearest_neighbors(self.store, "A", 2)
        assert [w for w, _ in got] == ["b", "c"]

    def test_unknown_word(self):
        with pytest.raises(KeyError):
            nearest_neighbors(self.store, "zzzz", 1)

    def test_negative_k(self):
        with pytest.raises(ValueError):
            nearest_neighbors(self.store, "a", -1)


class TestStoreInvariants:
    def test_duplicate_words_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            EmbeddingStore(["a", "a"], np.eye(2, dtype=np.float32))

    def test_zero_norm_rejected(self):
        with pytest.raises(ValueError, match="zero-norm"):
            EmbeddingStore(["a", "b"], np.array([[1, 0], [0, 0]], dtype=np.float32))

    def test_row_count_must_match(self):
        with pytest.raises(ValueError):
            EmbeddingStore(["a"], np.eye(2, dtype=np.float32))

    def test_vectors_immutable(self):
        store = make_store({"a": [1, 0]})
        with pytest.raises(ValueError):
            store.vectors[0, 0] = 5.0
