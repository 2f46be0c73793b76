"""Set-based toolkit for event temporal graph generation.

Targets are edge sets serialized as DOT strings; this package provides
the codec, order-invariance augmentation, the set-property penalties
used as training regularizers, set-based evaluation, and the
weak-supervision corpus pipeline behind them.
"""

__version__ = "0.1.0"

from .augment import AugmentationConfig, make_augmented_set, permute_target
from .dot import LinearizedGraph, ParseOutcome, linearize, parse, parse_graph
from .embedding import (
    EMPTY_SET_PENALTY,
    SpanIndex,
    avg_hausdorff,
    cosine_distance,
    edge_embedding,
    load_hidden_fixture,
    pool_span,
)
from .evaluate import (
    GraphStats,
    PrfScore,
    edge_prf,
    evaluate_documents,
    graph_stats,
    node_prf,
    stats_from_counts,
)
from .graph import (
    Edge,
    EventText,
    RelationType,
    TemporalGraph,
    edge,
    edge_set_equal,
    merge_reciprocal,
    normalize_event,
)
from .setmetrics import dedup, r_card, r_dupl
from .spr import (
    SprConfig,
    SprReport,
    combine_loss,
    compute_spr,
    schedule_active,
    spr_schedule,
)

__all__ = [
    "__version__",
    "AugmentationConfig",
    "EMPTY_SET_PENALTY",
    "Edge",
    "EventText",
    "GraphStats",
    "LinearizedGraph",
    "ParseOutcome",
    "PrfScore",
    "RelationType",
    "SpanIndex",
    "SprConfig",
    "SprReport",
    "TemporalGraph",
    "avg_hausdorff",
    "combine_loss",
    "compute_spr",
    "cosine_distance",
    "dedup",
    "edge",
    "edge_embedding",
    "edge_prf",
    "edge_set_equal",
    "evaluate_documents",
    "graph_stats",
    "linearize",
    "load_hidden_fixture",
    "make_augmented_set",
    "merge_reciprocal",
    "node_prf",
    "normalize_event",
    "parse",
    "parse_graph",
    "permute_target",
    "pool_span",
    "r_card",
    "r_dupl",
    "schedule_active",
    "spr_schedule",
    "stats_from_counts",
]
