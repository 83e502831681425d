"""embias: audit static word embeddings for individual and intersectional
social-bias associations.

The engine scores every vocabulary word along named bias axes (signed
cosine-distance difference to two subgroup centroids), derives comparable
feature scalings, and answers brush/intersectional/profile/audit queries.
A FastAPI service and a click CLI expose the same engine.
"""

from .axes import (
    AxisRegistry,
    BiasAxis,
    DuplicateAxisError,
    NeutralWordSet,
    Subgroup,
    UnknownAxisError,
    UnresolvableSubgroupError,
    axes_from_config,
    create_axis,
    default_axes,
    default_group_words,
    default_registry,
    load_axis_config,
    neutral_set,
    neutral_sets,
    neutral_words,
    save_axis_config,
    shipped_vocabulary,
)
from .queries import (
    AuditReport,
    AxisScores,
    BrushClause,
    BrushSelection,
    Flag,
    IntersectionalMatch,
    IntersectionalQuery,
    SynonymProvider,
    WordNotFoundError,
    WordProfile,
    audit_neutral_set,
    brush,
    intersectional_group,
    range_filter,
    spelling_suggestions,
    word_profile,
)
from .scoring import (
    ALL_AXES,
    DEFAULT_BINS,
    SCALING_MODES,
    Histogram,
    ScoreMatrix,
    bias_score,
    compute_matrix,
    histogram,
    minmax_scale,
    percentile_scale,
)
from .store import (
    FORMATS,
    EmbeddingFormatError,
    EmbeddingStore,
    VocabFilter,
    cosine_distance,
    load_embedding,
    nearest_neighbors,
    preprocess,
    save_embedding,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_AXES",
    "AxisRegistry",
    "AuditReport",
    "AxisScores",
    "BiasAxis",
    "BrushClause",
    "BrushSelection",
    "DEFAULT_BINS",
    "DuplicateAxisError",
    "EmbeddingFormatError",
    "EmbeddingStore",
    "FORMATS",
    "Flag",
    "Histogram",
    "IntersectionalMatch",
    "IntersectionalQuery",
    "NeutralWordSet",
    "SCALING_MODES",
    "ScoreMatrix",
    "Subgroup",
    "SynonymProvider",
    "UnknownAxisError",
    "UnresolvableSubgroupError",
    "VocabFilter",
    "WordNotFoundError",
    "WordProfile",
    "audit_neutral_set",
    "axes_from_config",
    "bias_score",
    "brush",
    "compute_matrix",
    "cosine_distance",
    "create_axis",
    "default_axes",
    "default_group_words",
    "default_registry",
    "histogram",
    "intersectional_group",
    "load_axis_config",
    "load_embedding",
    "minmax_scale",
    "nearest_neighbors",
    "neutral_set",
    "neutral_sets",
    "neutral_words",
    "percentile_scale",
    "preprocess",
    "range_filter",
    "save_axis_config",
    "save_embedding",
    "shipped_vocabulary",
    "spelling_suggestions",
    "word_profile",
]
