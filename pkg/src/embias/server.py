"""HTTP JSON API exposing the scoring and query engine to the web UI.

One embedding per process, chosen at startup.  The embedding is loaded,
preprocessed with every shipped group and neutral word forced into the
vocabulary, and scored against the five default axes before the service
reports ready; ``/healthz`` answers 503 until then.

Axis mutations are serialized and swap the whole immutable server state
atomically, so concurrent readers always observe a consistent
registry/matrix pair.
"""

from __future__ import annotations

import logging
import os
import socket
import threading
from dataclasses import dataclass, replace
from typing import Optional

import uvicorn
from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .axes import (
    AxisRegistry,
    BiasAxis,
    DuplicateAxisError,
    UnknownAxisError,
    UnresolvableSubgroupError,
    axes_from_config,
    config_group_words,
    default_registry,
    load_axis_config,
    neutral_set,
    neutral_sets,
    save_axis_config,
    shipped_vocabulary,
)
from .queries import (
    BrushClause,
    BrushSelection,
    IntersectionalQuery,
    WordNotFoundError,
    audit_neutral_set,
    brush,
    intersectional_group,
    word_profile,
)
from .reports import audit_json, intersectional_json, profile_json
from .scoring import (
    ALL_AXES,
    DEFAULT_BINS,
    ScoreMatrix,
    check_mode,
    compute_matrix,
    histogram,
)
from .store import EmbeddingStore, VocabFilter, load_embedding, preprocess

logger = logging.getLogger(__name__)

DEFAULT_PORT = 8080


@dataclass(frozen=True)
class ServerConfig:
    embedding_path: str
    format: str = "word2vec-text"
    host: str = "127.0.0.1"
    port: int = DEFAULT_PORT
    max_words: int = 50_000
    bins: int = DEFAULT_BINS
    default_mode: str = "raw"
    cors_origins: tuple[str, ...] = ("*",)
    # registry config file; loaded at startup when present, rewritten on
    # every axis mutation so sessions are reproducible
    axes_path: str | None = None


@dataclass(frozen=True)
class ServerState:
    store: EmbeddingStore
    registry: AxisRegistry
    matrix: ScoreMatrix
    config: ServerConfig


class StateHolder:
    """Atomic handle on the current server state.

    Readers take one snapshot per request; mutators build a replacement
    state under the mutation lock and swap it in whole.
    """

    def __init__(self, state: ServerState | None = None) -> None:
        self._state = state
        self.error: str | None = None
        self.mutation_lock = threading.Lock()

    @property
    def state(self) -> ServerState | None:
        return self._state

    def set_state(self, state: ServerState) -> None:
        self._state = state

    def set_error(self, message: str) -> None:
        self.error = message

    def require(self) -> ServerState:
        state = self._state
        if state is None:
            detail = self.error or "embedding still loading"
            raise HTTPException(status_code=503, detail=detail)
        return state


def build_state(config: ServerConfig) -> ServerState:
    """Load, preprocess, and score the configured embedding.

    With ``axes_path`` pointing at an existing registry config file, its
    axes replace the shipped defaults (and its group words join the
    preprocessing must_include set).
    """
    axis_config = None
    if config.axes_path and os.path.exists(config.axes_path):
        axis_config = load_axis_config(config.axes_path)
    must_include = set(shipped_vocabulary())
    if axis_config is not None:
        extra = config_group_words(axis_config)
        must_include |= set(extra) | {w.lower() for w in extra}
    store = load_embedding(config.embedding_path, config.format)
    store = preprocess(
        store,
        VocabFilter(max_words=config.max_words, must_include=frozenset(must_include)),
    )
    if axis_config is not None:
        registry = AxisRegistry(axes_from_config(axis_config, store))
    else:
        registry = default_registry(store)
    matrix = compute_matrix(store, registry.axes)
    return ServerState(store=store, registry=registry, matrix=matrix, config=config)


def _persist_registry(state: ServerState) -> None:
    if state.config.axes_path:
        save_axis_config(state.registry.axes, state.config.axes_path)


# ---------------------------------------------------------------------------
# Request bodies


class SubgroupBody(BaseModel):
    name: str
    words: list[str]


class AxisBody(BaseModel):
    name: str
    neg: SubgroupBody
    pos: SubgroupBody


class BrushClauseBody(BaseModel):
    axis: str
    end: str
    range: tuple[float, float]


class BrushBody(BaseModel):
    clauses: list[BrushClauseBody]
    mode: str = "raw"


class SubgroupRef(BaseModel):
    axis: str
    end: str


class IntersectionalBody(BaseModel):
    subgroups: list[SubgroupRef]
    threshold: float = 0.75


class AuditBody(BaseModel):
    set: str
    threshold: float = 0.75
    mode: str = "percentile"


def _axis_summary(axis: BiasAxis) -> dict:
    return {
        "name": axis.name,
        "neg": {"name": axis.neg.name, "resolved_words": len(axis.neg.resolved_words)},
        "pos": {"name": axis.pos.name, "resolved_words": len(axis.pos.resolved_words)},
    }


def create_app(holder: StateHolder, cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    app = FastAPI(title="embias")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _mode_or_default(mode: str | None, state: ServerState) -> str:
        value = mode or state.config.default_mode
        try:
            return check_mode(value)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

    @app.get("/healthz")
    def healthz():
        state = holder.state
        if state is None:
            detail = holder.error or "loading"
            raise HTTPException(status_code=503, detail=detail)
        return {
            "status": "ok",
            "words": len(state.store),
            "axes": list(state.registry.names),
        }

    @app.get("/axes")
    def list_axes():
        state = holder.require()
        return {"axes": [_axis_summary(ax) for ax in state.registry]}

    @app.post("/axes", status_code=201)
    def add_axis(body: AxisBody):
        with holder.mutation_lock:
            state = holder.require()
            registry = state.registry.copy()
            try:
                axis = registry.create(
                    body.name,
                    (body.neg.name, body.neg.words),
                    (body.pos.name, body.pos.words),
                    state.store,
                )
            except DuplicateAxisError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from None
            except (UnresolvableSubgroupError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            matrix = state.matrix.with_axis(state.store, axis)
            new_state = replace(state, registry=registry, matrix=matrix)
            holder.set_state(new_state)
            _persist_registry(new_state)
        return _axis_summary(axis)

    @app.delete("/axes/{name}", status_code=204)
    def delete_axis(name: str):
        with holder.mutation_lock:
            state = holder.require()
            if name not in state.registry:
                raise HTTPException(status_code=404, detail=f"unknown axis {name!r}")
            try:
                matrix = state.matrix.without_axis(name)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            registry = state.registry.copy()
            registry.delete(name)
            new_state = replace(state, registry=registry, matrix=matrix)
            holder.set_state(new_state)
            _persist_registry(new_state)
        return Response(status_code=204)

    @app.get("/words/{word}")
    def get_word(word: str, k: int = 10):
        state = holder.require()
        if k < 0:
            raise HTTPException(status_code=422, detail="k must be >= 0")
        try:
            profile = word_profile(state.matrix, state.store, word, k=k)
        except WordNotFoundError as exc:
            raise HTTPException(
                status_code=404,
                detail={"word": exc.word, "suggestions": exc.suggestions},
            ) from None
        return profile_json(profile)

    @app.get("/scores")
    def get_scores(mode: str | None = None, offset: int = 0, limit: int = 1000):
        state = holder.require()
        mode = _mode_or_default(mode, state)
        if offset < 0 or limit < 0:
            raise HTTPException(status_code=422, detail="offset/limit must be >= 0")
        matrix = state.matrix
        scores = matrix.scores(mode)
        mean_abs = matrix.mean_abs[mode]
        rows = []
        for i in range(offset, min(offset + limit, len(matrix.words))):
            rows.append(
                {
                    "word": matrix.words[i],
                    "scores": {
                        name: float(scores[i, j])
                        for j, name in enumerate(matrix.axis_names)
                    },
                    "mean_abs": float(mean_abs[i]),
                }
            )
        return {
            "mode": mode,
            "offset": offset,
            "limit": limit,
            "total": len(matrix.words),
            "axes": list(matrix.axis_names),
            "rows": rows,
        }

    @app.get("/histogram")
    def get_histogram(
        selector: str = ALL_AXES, mode: str | None = None, bins: int | None = None
    ):
        state = holder.require()
        mode = _mode_or_default(mode, state)
        bins = bins if bins is not None else state.config.bins
        try:
            hist = histogram(state.matrix, selector=selector, mode=mode, bins=bins)
        except UnknownAxisError:
            raise HTTPException(
                status_code=404, detail=f"unknown axis {selector!r}"
            ) from None
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {
            "selector": hist.selector,
            "mode": hist.mode,
            "bin_edges": [float(e) for e in hist.bin_edges],
            "counts": [int(c) for c in hist.counts],
        }

    @app.post("/query/brush")
    def post_brush(body: BrushBody):
        state = holder.require()
        try:
            sel = BrushSelection(
                clauses=tuple(
                    BrushClause(axis=c.axis, end=c.end, lo=c.range[0], hi=c.range[1])
                    for c in body.clauses
                ),
                mode=body.mode,
            )
            words = brush(state.matrix, sel)
        except (UnknownAxisError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        scores = state.matrix.scores(body.mode)
        clause_axes = [(c.axis, state.matrix.axis_index(c.axis)) for c in body.clauses]
        return {
            "mode": body.mode,
            "words": [
                {
                    "word": w,
                    "scores": {
                        axis: float(scores[state.matrix.word_index[w], j])
                        for axis, j in clause_axes
                    },
                }
                for w in words
            ],
        }

    @app.post("/query/intersectional")
    def post_intersectional(body: IntersectionalBody):
        state = holder.require()
        try:
            query = IntersectionalQuery(
                subgroups=tuple((s.axis, s.end) for s in body.subgroups),
                threshold=body.threshold,
            )
            matches = intersectional_group(state.matrix, query)
        except (UnknownAxisError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return intersectional_json(query, matches)

    @app.get("/neutral-sets")
    def get_neutral_sets():
        return {
            "sets": [{"name": s.name, "words": list(s.words)} for s in neutral_sets()]
        }

    @app.post("/audit")
    def post_audit(body: AuditBody):
        state = holder.require()
        try:
            nset = neutral_set(body.set)
        except KeyError:
            raise HTTPException(
                status_code=404, detail=f"unknown neutral set {body.set!r}"
            ) from None
        try:
            report = audit_neutral_set(
                state.matrix, state.store, nset, threshold=body.threshold, mode=body.mode
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return audit_json(report)

    @app.get("/export.csv")
    def export_csv(mode: str | None = None):
        state = holder.require()
        mode = _mode_or_default(mode, state)
        return Response(content=state.matrix.to_csv(mode), media_type="text/csv")

    return app


def serve(config: ServerConfig) -> None:
    """Run the service; blocks until shutdown.

    The embedding is loaded in the background so the service can answer
    ``/healthz`` with 503 while the matrix builds; a load failure shuts the
    server down and re-raises with a diagnostic.
    """
    holder = StateHolder()
    app = create_app(holder, cors_origins=config.cors_origins)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((config.host, config.port))
    actual_port = sock.getsockname()[1]
    print(f"embias serving on http://{config.host}:{actual_port}", flush=True)

    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))

    def _build() -> None:
        try:
            holder.set_state(build_state(config))
            logger.info("embedding ready: %d words", len(holder.require().store))
        except Exception as exc:  # startup must abort with a diagnostic
            holder.set_error(f"failed to load embedding: {exc}")
            server.should_exit = True

    thread = threading.Thread(target=_build, daemon=True, name="embias-build")
    thread.start()
    try:
        server.run(sockets=[sock])
    finally:
        sock.close()
    if holder.error:
        raise RuntimeError(holder.error)
