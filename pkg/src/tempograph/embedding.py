"""Edge semantic embeddings and the averaged Hausdorff set distance.

Hidden states enter as plain (T, d) float matrices; extracting them from
any particular model is the caller's concern, which keeps this kernel
model-agnostic.  An edge embedding is the concatenation of the
average-pooled head, relation, and tail token vectors, giving 3d
dimensions per edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    DegenerateVectorError,
    DimensionMismatchError,
    DuplicateIndexError,
    EmptySpanError,
    SpanOutOfRangeError,
)

#: Norms at or below this are degenerate for cosine distance.
NORM_EPSILON = 1e-12

#: Set distance when exactly one side is empty: the supremum of the
#: two-sided average under cosine distance (each directed term <= 2),
#: a finite ceiling so the loss stays bounded on fully failed parses.
EMPTY_SET_PENALTY = 4.0


@dataclass(frozen=True)
class SpanIndex:
    """Hidden-state row indices of an edge's head, relation, and tail tokens."""

    head: tuple[int, ...]
    rel: tuple[int, ...]
    tail: tuple[int, ...]

    @classmethod
    def from_dict(cls, data: dict) -> "SpanIndex":
        return cls(
            head=tuple(int(i) for i in data["head"]),
            rel=tuple(int(i) for i in data["rel"]),
            tail=tuple(int(i) for i in data["tail"]),
        )


def pool_span(
    hidden: np.ndarray, indices: Sequence[int], dedupe: bool = True
) -> np.ndarray:
    """Average-pool the selected rows of a (T, d) hidden-state matrix.

    Pooling is the unweighted arithmetic mean over the unique selected
    positions, independent of index order.  Repeated positions are
    collapsed by default; with ``dedupe=False`` they are rejected.
    """
    hidden = np.asarray(hidden, dtype=np.float64)
    if hidden.ndim != 2:
        raise DimensionMismatchError(f"hidden states must be 2-D, got shape {hidden.shape}")
    idx = [int(i) for i in indices]
    if not idx:
        raise EmptySpanError("span selects no positions")
    unique = sorted(set(idx))
    if not dedupe and len(unique) != len(idx):
        raise DuplicateIndexError(f"span repeats positions: {idx}")
    if unique[0] < 0 or unique[-1] >= hidden.shape[0]:
        raise SpanOutOfRangeError(
            f"span indices {idx} outside 0..{hidden.shape[0] - 1}"
        )
    return hidden[unique].mean(axis=0)


def edge_embedding(hidden: np.ndarray, span: SpanIndex, dedupe: bool = True) -> np.ndarray:
    """Concatenated pooled head, relation, and tail vectors (3d total)."""
    return np.concatenate(
        [
            pool_span(hidden, span.head, dedupe),
            pool_span(hidden, span.rel, dedupe),
            pool_span(hidden, span.tail, dedupe),
        ]
    )


def cosine_distance(a, b) -> float:
    """1 - cos(a, b), clamped into [0, 2]; identical vectors give exactly 0.0.

    Raises DegenerateVectorError when either norm is at most 1e-12.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector shapes differ: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a <= NORM_EPSILON or norm_b <= NORM_EPSILON:
        raise DegenerateVectorError("cosine distance undefined for near-zero vectors")
    if np.array_equal(a, b):
        return 0.0
    return min(2.0, max(0.0, 1.0 - float(a @ b) / (norm_a * norm_b)))


def _as_point_set(points) -> np.ndarray:
    if isinstance(points, np.ndarray) and points.ndim == 2:
        array = np.asarray(points, dtype=np.float64)
    else:
        rows = [np.asarray(p, dtype=np.float64).ravel() for p in points]
        if not rows:
            return np.zeros((0, 0), dtype=np.float64)
        array = np.stack(rows)
    if array.shape[0] == 0:
        return array.reshape(0, array.shape[1] if array.ndim == 2 else 0)
    if not np.isfinite(array).all():
        raise ValueError("embedding sets must be finite")
    return array


def avg_hausdorff(gold, gen) -> float:
    """Two-sided average nearest-neighbor cosine distance between embedding sets.

    Each side contributes the mean, over its points, of the distance to
    the nearest point on the other side.  Empty-set conventions: both
    empty -> 0.0; exactly one empty -> EMPTY_SET_PENALTY.

    Symmetric in its arguments bit-for-bit: the pairwise matrix is
    computed in one canonical orientation so a swapped call runs the
    identical floating-point arithmetic.
    """
    a = _as_point_set(gold)
    b = _as_point_set(gen)
    if a.shape[0] == 0 and b.shape[0] == 0:
        return 0.0
    if a.shape[0] == 0 or b.shape[0] == 0:
        return EMPTY_SET_PENALTY
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(
            f"embedding dimensions differ: {a.shape[1]} vs {b.shape[1]}"
        )
    norm_a = np.linalg.norm(a, axis=1)
    norm_b = np.linalg.norm(b, axis=1)
    if (norm_a <= NORM_EPSILON).any() or (norm_b <= NORM_EPSILON).any():
        raise DegenerateVectorError("embedding sets contain near-zero vectors")
    if (a.shape[0], a.tobytes()) > (b.shape[0], b.tobytes()):
        a, b, norm_a, norm_b = b, a, norm_b, norm_a
    dists = kernels.pairwise_cosine(a, b, norm_a, norm_b)
    return float(np.min(dists, axis=1).mean() + np.min(dists, axis=0).mean())


def load_hidden_fixture(source) -> tuple[np.ndarray, list[SpanIndex | None]]:
    """Read a hidden-state fixture: {"dim": d, "states": [[...]], "spans": [...]}.

    ``source`` may be a path or an already-decoded dict.  Span entries
    may be null for edges whose token positions are unknown.
    """
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    else:
        data = source
    dim = int(data["dim"])
    states = np.asarray(data["states"], dtype=np.float64)
    if states.size == 0:
        states = states.reshape(0, dim)
    if states.ndim != 2 or states.shape[1] != dim:
        raise DimensionMismatchError(
            f"states shape {states.shape} does not match dim={dim}"
        )
    spans: list[SpanIndex | None] = []
    for entry in data.get("spans", []):
        spans.append(None if entry is None else SpanIndex.from_dict(entry))
    return states, spans
