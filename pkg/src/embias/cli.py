"""Command-line entry points: serve the API, run offline audits, extract
intersectional-group reports, and export scores.

Report commands write delimited output (CSV/JSON/markdown) and, unless
disabled, render matplotlib figures next to it.

Exit codes: 0 ok, 1 bias found under --fail-on-bias, 2 usage error, 3 I/O
or parse failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .axes import (
    AxisRegistry,
    axes_from_config,
    config_group_words,
    default_registry,
    load_axis_config,
    neutral_set,
    neutral_sets,
    shipped_vocabulary,
)
from .figures import (
    save_audit_figure,
    save_intersections_figure,
    save_score_distributions,
)
from .queries import IntersectionalQuery, audit_neutral_set, intersectional_group
from .reports import (
    audit_csv,
    audit_json,
    group_label,
    intersectional_csv,
    intersectional_json,
    intersections_markdown,
)
from .scoring import DEFAULT_BINS, SCALING_MODES, compute_matrix
from .server import DEFAULT_PORT, ServerConfig, serve
from .store import FORMATS, EmbeddingFormatError, VocabFilter, load_embedding, preprocess

EXIT_BIAS_FOUND = 1
EXIT_IO = 3

_embedding_option = click.option(
    "--embedding",
    envvar="EMBIAS_EMBEDDING",
    required=True,
    help="Path to the embedding file.",
)
_format_option = click.option(
    "--format",
    "fmt",
    envvar="EMBIAS_FORMAT",
    type=click.Choice(FORMATS),
    default="word2vec-text",
    show_default=True,
    help="Embedding file format.",
)
_max_words_option = click.option(
    "--max-words",
    envvar="EMBIAS_MAX_WORDS",
    type=click.IntRange(min=1),
    default=50_000,
    show_default=True,
    help="Vocabulary cap applied during preprocessing.",
)
_mode_option = click.option(
    "--mode",
    type=click.Choice(SCALING_MODES),
    default="percentile",
    show_default=True,
    help="Scaling mode for reported scores.",
)
_axes_option = click.option(
    "--axes",
    "axes_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Registry config file declaring the axes; defaults to the shipped five.",
)
_figures_option = click.option(
    "--figures/--no-figures",
    default=True,
    show_default=True,
    help="Render figures next to the delimited output.",
)


def _validate_threshold(ctx, param, value: float) -> float:
    if not 0.0 < value <= 1.0:
        raise click.BadParameter(f"must be in (0, 1], got {value}")
    return value


def _load_scored(embedding: str, fmt: str, max_words: int, axes_path: str | None = None):
    """Load + preprocess an embedding and score it on the configured axes."""
    axis_config = None
    must_include = set(shipped_vocabulary())
    if axes_path is not None:
        try:
            axis_config = load_axis_config(axes_path)
        except (OSError, ValueError) as exc:
            click.echo(f"error: cannot load {axes_path}: {exc}", err=True)
            sys.exit(EXIT_IO)
        extra = config_group_words(axis_config)
        must_include |= set(extra) | {w.lower() for w in extra}
    try:
        store = load_embedding(embedding, fmt)
    except (OSError, EmbeddingFormatError) as exc:
        click.echo(f"error: cannot load {embedding}: {exc}", err=True)
        sys.exit(EXIT_IO)
    store = preprocess(
        store, VocabFilter(max_words=max_words, must_include=frozenset(must_include))
    )
    if axis_config is not None:
        registry = AxisRegistry(axes_from_config(axis_config, store))
    else:
        registry = default_registry(store)
    matrix = compute_matrix(store, registry.axes)
    return store, registry, matrix


@click.group()
@click.version_option(package_name="embias")
def main() -> None:
    """Audit static word embeddings for social-bias associations."""


@main.command("serve")
@_embedding_option
@_format_option
@_max_words_option
@click.option(
    "--port",
    envvar="EMBIAS_PORT",
    type=click.IntRange(min=0),
    default=DEFAULT_PORT,
    show_default=True,
    help="Listen port; 0 lets the OS assign one (printed on startup).",
)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--bins",
    envvar="EMBIAS_BINS",
    type=click.IntRange(min=1),
    default=DEFAULT_BINS,
    show_default=True,
    help="Default histogram bin count.",
)
@_axes_option
def serve_cmd(
    embedding: str,
    fmt: str,
    max_words: int,
    port: int,
    host: str,
    bins: int,
    axes_path: str | None,
) -> None:
    """Run the HTTP JSON API on the given embedding.

    With --axes, the registry is loaded from that file at startup (falling
    back to the shipped defaults when it does not exist yet) and rewritten
    on every axis mutation, making server sessions reproducible.
    """
    config = ServerConfig(
        embedding_path=embedding,
        format=fmt,
        host=host,
        port=port,
        max_words=max_words,
        bins=bins,
        axes_path=axes_path,
    )
    try:
        serve(config)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)


@main.command()
@_embedding_option
@_format_option
@_max_words_option
@_mode_option
@_figures_option
@click.option(
    "--set",
    "set_names",
    multiple=True,
    help="Neutral set to audit (repeatable); default: all shipped sets.",
)
@click.option(
    "--threshold",
    type=float,
    default=0.75,
    show_default=True,
    callback=_validate_threshold,
    help="|score| at or above this flags an association.",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    show_default=True,
    help="Directory for the report files.",
)
@click.option(
    "--fail-on-bias",
    is_flag=True,
    help="Exit 1 if any word is flagged.",
)
@_axes_option
def audit(
    embedding: str,
    fmt: str,
    max_words: int,
    mode: str,
    figures: bool,
    set_names: tuple[str, ...],
    threshold: float,
    out: Path,
    fail_on_bias: bool,
    axes_path: str | None,
) -> None:
    """Audit neutral-word sets for subgroup associations."""
    known = [s.name for s in neutral_sets()]
    names = list(set_names) or known
    for name in names:
        if name not in known:
            raise click.BadParameter(
                f"unknown set {name!r}; choose from {', '.join(known)}",
                param_hint="--set",
            )
    store, _, matrix = _load_scored(embedding, fmt, max_words, axes_path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        click.echo(f"error: cannot create {out}: {exc}", err=True)
        sys.exit(EXIT_IO)
    total_flags = 0
    for name in names:
        report = audit_neutral_set(
            matrix, store, neutral_set(name), threshold=threshold, mode=mode
        )
        total_flags += len(report.flagged)
        json_path = out / f"{name}.audit.json"
        csv_path = out / f"{name}.audit.csv"
        json_path.write_text(
            json.dumps(audit_json(report), indent=2) + "\n", encoding="utf-8"
        )
        csv_path.write_text(audit_csv(matrix, report), encoding="utf-8")
        if figures:
            save_audit_figure(report, out / f"{name}.audit.png")
        click.echo(
            f"{name}: {len(report.flagged)} flags over "
            f"{report.words_found}/{report.words_in_set} words -> {json_path}"
        )
    if fail_on_bias and total_flags > 0:
        sys.exit(EXIT_BIAS_FOUND)


def _parse_groups(spec: str) -> list[tuple[str, str]]:
    groups: list[tuple[str, str]] = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        axis, sep, end = token.partition(":")
        if not sep or end not in ("neg", "pos") or not axis:
            raise click.BadParameter(
                f"bad group token {token!r}; expected axis:neg or axis:pos",
                param_hint="--groups",
            )
        groups.append((axis, end))
    if not groups:
        raise click.BadParameter("no groups given", param_hint="--groups")
    return groups


@main.command()
@_embedding_option
@_format_option
@_max_words_option
@_figures_option
@click.option(
    "--groups",
    required=True,
    help="Comma-separated axis:neg|pos tokens, e.g. 'Gender:neg,Religion:neg'.",
)
@click.option(
    "--threshold",
    type=float,
    default=0.75,
    show_default=True,
    callback=_validate_threshold,
    help="Percentile cut defining 'strong association'.",
)
@click.option("--top", type=click.IntRange(min=0), default=20, show_default=True)
@click.option(
    "--format-out",
    type=click.Choice(("csv", "json", "markdown")),
    default="markdown",
    show_default=True,
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the table here instead of stdout.",
)
@_axes_option
def intersections(
    embedding: str,
    fmt: str,
    max_words: int,
    figures: bool,
    groups: str,
    threshold: float,
    top: int,
    format_out: str,
    out: Path | None,
    axes_path: str | None,
) -> None:
    """Words strongly associated with an intersectional group."""
    subgroups = _parse_groups(groups)
    store, registry, matrix = _load_scored(embedding, fmt, max_words, axes_path)
    try:
        query = IntersectionalQuery(subgroups=tuple(subgroups), threshold=threshold)
        matches = intersectional_group(matrix, query)[:top]
    except (KeyError, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--groups")
    label = group_label(subgroups, registry.axes)
    if format_out == "json":
        text = json.dumps(intersectional_json(query, matches), indent=2) + "\n"
    elif format_out == "csv":
        text = intersectional_csv(matrix, matches)
    else:
        text = intersections_markdown([(label, matches)])
    if out is not None:
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding="utf-8")
        except OSError as exc:
            click.echo(f"error: cannot write {out}: {exc}", err=True)
            sys.exit(EXIT_IO)
        if figures:
            save_intersections_figure(label, matches, out.with_suffix(".png"))
        click.echo(f"{label}: {len(matches)} words -> {out}")
    else:
        click.echo(text, nl=False)


@main.command()
@_embedding_option
@_format_option
@_max_words_option
@_figures_option
@click.option(
    "--mode",
    type=click.Choice(SCALING_MODES),
    default="raw",
    show_default=True,
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("scores.csv"),
    show_default=True,
)
@click.option("--bins", type=click.IntRange(min=1), default=DEFAULT_BINS, show_default=True)
@_axes_option
def export(
    embedding: str,
    fmt: str,
    max_words: int,
    figures: bool,
    mode: str,
    out: Path,
    bins: int,
    axes_path: str | None,
) -> None:
    """Export the full score matrix as CSV."""
    _, _, matrix = _load_scored(embedding, fmt, max_words, axes_path)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(matrix.to_csv(mode), encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write {out}: {exc}", err=True)
        sys.exit(EXIT_IO)
    if figures:
        save_score_distributions(matrix, mode, out.with_suffix(".png"), bins=bins)
    click.echo(f"{len(matrix.words)} words x {len(matrix.axis_names)} axes -> {out}")


if __name__ == "__main__":
    main()
