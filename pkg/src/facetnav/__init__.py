"""Guided faceted navigation over a binary category/item association index.

The core loop: build an :class:`AssociationIndex`, evaluate a
:class:`Selection` against it, and offer the user only categories that are
guaranteed to keep at least one item on screen. Everything else in the
package measures, predicts, or serves that loop.
"""

from .alpha import (
    MODES,
    POSITION_DEPENDENT,
    POSITION_INDEPENDENT,
    AlphaIndex,
    TypeState,
    build_alpha_index,
    complete,
    type_key,
)
from .errors import (
    BuildError,
    FacetnavError,
    IngestError,
    KeystrokeRejected,
    SelectionError,
    ShardError,
    SizeGuardError,
    SnapshotError,
    StaleCacheError,
    UnknownCategoryError,
)
from .index import (
    ALL,
    ANY,
    COMBINATORS,
    DEFAULT_GROUP,
    AssociationIndex,
    IndexStats,
    build_index,
    from_arrays,
)
from .ingest import (
    RecordSchema,
    TextExtractionConfig,
    build_from_jsonl,
    categorize_records,
    extract_text_categories,
    load_jsonl,
)
from .models import (
    LINEAR,
    QUADRATIC,
    ModelParams,
    ModelPrediction,
    MonteCarloReport,
    linear_model,
    monte_carlo,
    narrowing_prediction,
    predict,
    quadratic_model,
    random_index,
    random_overlap,
)
from .quality import (
    CooccurrenceReport,
    FlagReport,
    InferenceReport,
    SynonymReport,
    cooccurrence_stats,
    flag_badly_categorized,
    granularity,
    inference_sets,
    order_matrix,
    synonym_sets,
)
from .query import (
    Entry,
    FirstClickCache,
    QueryResult,
    Selection,
    evaluate,
    first_click,
    matching_items,
    refine,
)
from .service import LocalBackend, ShardedBackend, create_app, scatter_gather
from .snapshot import (
    canonical_bytes,
    fingerprint,
    load,
    load_bytes,
    merge_shards,
    save,
)
from .tlc import (
    DominantIndex,
    TlcAudit,
    TlcConfig,
    dominant_submatrix,
    relevance_scores,
    select_tlc,
    verify_audit,
)

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "ANY",
    "COMBINATORS",
    "DEFAULT_GROUP",
    "LINEAR",
    "MODES",
    "POSITION_DEPENDENT",
    "POSITION_INDEPENDENT",
    "QUADRATIC",
    "AlphaIndex",
    "AssociationIndex",
    "BuildError",
    "CooccurrenceReport",
    "DominantIndex",
    "Entry",
    "FacetnavError",
    "FirstClickCache",
    "FlagReport",
    "IndexStats",
    "InferenceReport",
    "IngestError",
    "KeystrokeRejected",
    "ModelParams",
    "ModelPrediction",
    "MonteCarloReport",
    "QueryResult",
    "RecordSchema",
    "Selection",
    "SelectionError",
    "ShardError",
    "ShardedBackend",
    "SizeGuardError",
    "SnapshotError",
    "StaleCacheError",
    "SynonymReport",
    "TextExtractionConfig",
    "TlcAudit",
    "TlcConfig",
    "TypeState",
    "UnknownCategoryError",
    "build_alpha_index",
    "build_from_jsonl",
    "build_index",
    "canonical_bytes",
    "categorize_records",
    "complete",
    "cooccurrence_stats",
    "create_app",
    "dominant_submatrix",
    "evaluate",
    "extract_text_categories",
    "fingerprint",
    "first_click",
    "flag_badly_categorized",
    "from_arrays",
    "granularity",
    "inference_sets",
    "linear_model",
    "load",
    "load_bytes",
    "load_jsonl",
    "LocalBackend",
    "matching_items",
    "merge_shards",
    "monte_carlo",
    "narrowing_prediction",
    "order_matrix",
    "predict",
    "quadratic_model",
    "random_index",
    "random_overlap",
    "refine",
    "relevance_scores",
    "save",
    "scatter_gather",
    "select_tlc",
    "synonym_sets",
    "type_key",
    "verify_audit",
]
