"""Aggregate the set-property penalties and gate them behind a warmup schedule.

``compute_spr`` turns one sampled target string into penalty values:
duplication over the raw parsed edge list, cardinality and embedding-set
matching over the deduplicated set.  ``combine_loss`` mixes the total
with an externally supplied token-level cross-entropy value; gradients
and the language model itself live with the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dot import parse
from .embedding import SpanIndex, avg_hausdorff, edge_embedding
from .errors import DimensionMismatchError
from .graph import TemporalGraph
from .setmetrics import dedup, r_card, r_dupl


@dataclass(frozen=True)
class SprConfig:
    """Penalty weights plus the mixing weight and warmup gate.

    ``lambda_`` is the share of the combined loss taken by the penalty
    total once past ``warmup_steps``.  The defaults (unit weights, 0.5)
    are plain configuration, not tuned values.
    """

    w_dupl: float = 1.0
    w_card: float = 1.0
    w_match: float = 1.0
    lambda_: float = 0.5
    warmup_steps: int = 0

    def __post_init__(self) -> None:
        for name in ("w_dupl", "w_card", "w_match"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative")
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError("lambda_ must lie in [0, 1]")
        if self.warmup_steps < 0:
            raise ValueError("warmup_steps must be non-negative")


@dataclass
class SprReport:
    """Penalty values for one sampled sequence, with parse bookkeeping."""

    r_dupl: float
    r_card: float
    d_hausdorff: float
    spr_total: float
    combined_loss: float | None = None
    active: bool | None = None
    parsed_edges: int = 0
    unique_edges: int = 0
    skipped_lines: int = 0
    missing_span_edges: int = 0
    used_fallback: bool = False

    def to_dict(self) -> dict:
        return {
            "r_dupl": self.r_dupl,
            "r_card": self.r_card,
            "d_hausdorff": self.d_hausdorff,
            "spr_total": self.spr_total,
            "combined_loss": self.combined_loss,
            "active": self.active,
            "parse": {
                "edges": self.parsed_edges,
                "unique_edges": self.unique_edges,
                "skipped_lines": self.skipped_lines,
                "missing_span_edges": self.missing_span_edges,
                "used_fallback": self.used_fallback,
            },
        }


def _gold_embedding_array(gold_embeddings, hidden_width: int | None) -> np.ndarray:
    if isinstance(gold_embeddings, np.ndarray) and gold_embeddings.ndim == 2:
        array = np.asarray(gold_embeddings, dtype=np.float64)
    else:
        rows = [np.asarray(v, dtype=np.float64).ravel() for v in gold_embeddings]
        array = np.stack(rows) if rows else np.zeros((0, 0))
    if array.shape[0] and hidden_width and array.shape[1] != 3 * hidden_width:
        raise DimensionMismatchError(
            f"gold embeddings have dim {array.shape[1]}, expected {3 * hidden_width}"
        )
    return array


def compute_spr(
    sampled: str,
    gold: TemporalGraph,
    hidden: np.ndarray,
    spans: Sequence[SpanIndex | None] | None,
    gold_embeddings,
    cfg: SprConfig = SprConfig(),
) -> SprReport:
    """Penalty values for one sampled string against its gold graph.

    ``spans[i]`` locates the i-th parsed edge's tokens inside ``hidden``;
    edges without a span are left out of the matching term and counted.
    An unparseable string degrades gracefully through the empty-set
    conventions (full cardinality gap, ceiling match distance).
    """
    hidden = np.asarray(hidden, dtype=np.float64)
    if hidden.ndim != 2:
        raise DimensionMismatchError(f"hidden states must be 2-D, got {hidden.shape}")
    gold_array = _gold_embedding_array(gold_embeddings, hidden.shape[1])

    outcome = parse(sampled)
    dupl = r_dupl(outcome.edges)
    unique = dedup(outcome.edges)
    card = r_card(gold.edges, unique)

    span_list = list(spans) if spans is not None else []
    span_for_key: dict[tuple[str, str, str], SpanIndex] = {}
    for i, edge in enumerate(outcome.edges):
        span = span_list[i] if i < len(span_list) else None
        if span is not None:
            span_for_key.setdefault(edge.key(), span)
    vectors = []
    missing = 0
    for edge in unique:
        span = span_for_key.get(edge.key())
        if span is None:
            missing += 1
        else:
            vectors.append(edge_embedding(hidden, span))
    gen_array = (
        np.stack(vectors) if vectors else np.zeros((0, gold_array.shape[1] if gold_array.size else 0))
    )
    match = avg_hausdorff(gold_array, gen_array)

    total = cfg.w_dupl * dupl + cfg.w_card * card + cfg.w_match * match
    return SprReport(
        r_dupl=dupl,
        r_card=card,
        d_hausdorff=match,
        spr_total=total,
        parsed_edges=len(outcome.edges),
        unique_edges=len(unique),
        skipped_lines=outcome.skipped_lines,
        missing_span_edges=missing,
        used_fallback=outcome.used_fallback,
    )


def combine_loss(ce: float, spr_total: float, step: int, cfg: SprConfig) -> float:
    """Warmup gate: plain cross-entropy below ``warmup_steps``, then the weighted average.

    Past the gate the result is (1 - lambda) * ce + lambda * spr_total,
    which is non-decreasing in the penalty total whenever lambda > 0.
    """
    if step < cfg.warmup_steps:
        return ce
    return (1.0 - cfg.lambda_) * ce + cfg.lambda_ * spr_total


def spr_schedule(
    warmup_epochs: int, spr_epochs: int, steps_per_epoch: int
) -> list[dict]:
    """Two-phase activation table as [{"step_start", "active"}, ...] segments.

    The first ``warmup_epochs * steps_per_epoch`` steps are inactive;
    every later step is active while the penalty phase lasts.  The
    segment form serializes compactly and any loader can expand it.
    """
    if steps_per_epoch < 1:
        raise ValueError("steps_per_epoch must be >= 1")
    if warmup_epochs < 0 or spr_epochs < 0:
        raise ValueError("epoch counts must be non-negative")
    boundary = warmup_epochs * steps_per_epoch
    segments: list[dict] = []
    if boundary > 0:
        segments.append({"step_start": 0, "active": False})
    if spr_epochs > 0:
        segments.append({"step_start": boundary, "active": True})
    return segments


def schedule_active(schedule: Sequence[dict], step: int) -> bool:
    """Whether the penalties are active at ``step`` under a schedule table."""
    active = False
    for segment in schedule:
        if step >= segment["step_start"]:
            active = bool(segment["active"])
    return active
