"""Domain types for events, temporal relations, edges, and graphs.

Events compare case-insensitively with whitespace runs collapsed, so
surface artifacts of generation (stray spaces, casing) do not break set
membership.  Exact raw-string comparison stays available through the
``strict`` flags on the comparison helpers, for sensitivity analysis.

All types are immutable values and all operations are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import EmptyEventError, SelfLoopError

_WS_RUN = re.compile(r"\s+")


class RelationType(Enum):
    """Temporal relation label between two events."""

    BEFORE = "before"
    AFTER = "after"
    INCLUDES = "includes"
    IS_INCLUDED = "is_included"
    SIMULTANEOUS = "simultaneous"

    def __str__(self) -> str:
        return self.value


#: Labels that survive reciprocal merging.
MERGED_LABELS = frozenset(
    {RelationType.BEFORE, RelationType.INCLUDES, RelationType.SIMULTANEOUS}
)

_RECIPROCAL = {
    RelationType.AFTER: RelationType.BEFORE,
    RelationType.IS_INCLUDED: RelationType.INCLUDES,
}


@dataclass(frozen=True, eq=False)
class EventText:
    """An event mention together with its normalized comparison form.

    Equality and hashing go through ``normalized`` only; ``raw`` is the
    text as it appeared and is carried along for serialization.
    """

    raw: str
    normalized: str

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventText):
            return NotImplemented
        return self.normalized == other.normalized

    def __hash__(self) -> int:
        return hash(self.normalized)


def normalize_event(raw: str) -> EventText:
    """Build an EventText whose normalized form is trimmed, whitespace-collapsed, casefolded.

    Idempotent: normalizing an already-normalized string changes nothing.
    Raises EmptyEventError when ``raw`` is empty or all whitespace.
    """
    normalized = _WS_RUN.sub(" ", raw.strip()).casefold()
    if not normalized:
        raise EmptyEventError(f"event text is empty or all whitespace: {raw!r}")
    return EventText(raw=raw, normalized=normalized)


@dataclass(frozen=True, eq=False)
class Edge:
    """Directed temporal relation between two distinct events."""

    head: EventText
    relation: RelationType
    tail: EventText

    def __post_init__(self) -> None:
        if self.head.normalized == self.tail.normalized:
            raise SelfLoopError(f"self-loop edge on {self.head.normalized!r}")

    def key(self) -> tuple[str, str, str]:
        """Normalized (head, relation, tail) identity used for set membership."""
        return (self.head.normalized, self.relation.value, self.tail.normalized)

    def raw_key(self) -> tuple[str, str, str]:
        """Exact-string identity for strict comparisons."""
        return (self.head.raw, self.relation.value, self.tail.raw)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Edge):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Edge({self.head.normalized!r} -{self.relation.value}-> {self.tail.normalized!r})"


def edge(head: str, relation: RelationType | str, tail: str) -> Edge:
    """Convenience constructor from plain strings."""
    rel = relation if isinstance(relation, RelationType) else RelationType(relation)
    return Edge(head=normalize_event(head), relation=rel, tail=normalize_event(tail))


def merge_reciprocal(e: Edge) -> Edge:
    """Rewrite a reciprocal label onto its canonical direction.

    ``after(a, b)`` becomes ``before(b, a)`` and ``is_included(a, b)``
    becomes ``includes(b, a)``; canonical labels pass through unchanged,
    so the operation is the identity on already-merged edges.
    """
    merged = _RECIPROCAL.get(e.relation)
    if merged is None:
        return e
    return Edge(head=e.tail, relation=merged, tail=e.head)


def dedup_edges(edges: Iterable[Edge]) -> list[Edge]:
    """Unique edges under normalized equality; the first occurrence's raw text wins."""
    seen: dict[tuple[str, str, str], Edge] = {}
    for e in edges:
        seen.setdefault(e.key(), e)
    return list(seen.values())


def edge_set_equal(a: Iterable[Edge], b: Iterable[Edge], strict: bool = False) -> bool:
    """True when the two edge collections contain the same triples.

    Comparison is order-insensitive and, by default, uses normalized
    event equality; ``strict=True`` compares raw strings instead.
    """
    keyf = Edge.raw_key if strict else Edge.key
    return {keyf(e) for e in a} == {keyf(e) for e in b}


@dataclass(frozen=True)
class TemporalGraph:
    """Deduplicated edge set; the node set is derived from edge endpoints.

    ``merged`` records whether reciprocal labels were rewritten.  It is a
    graph-level flag rather than a per-edge inference so that corpora
    mixing regimes stay detectable.
    """

    edges: tuple[Edge, ...] = ()
    merged: bool = False

    def __post_init__(self) -> None:
        keys = {e.key() for e in self.edges}
        if len(keys) != len(self.edges):
            raise ValueError("graph edges must be unique under normalized equality")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], merged: bool = False) -> "TemporalGraph":
        """Build a graph, silently dropping duplicate edges (first occurrence wins)."""
        return cls(edges=tuple(dedup_edges(edges)), merged=merged)

    @property
    def nodes(self) -> tuple[EventText, ...]:
        """Edge endpoints, unique under normalized equality, in first-appearance order."""
        seen: dict[str, EventText] = {}
        for e in self.edges:
            for ev in (e.head, e.tail):
                seen.setdefault(ev.normalized, ev)
        return tuple(seen.values())

    def merge(self) -> "TemporalGraph":
        """Apply reciprocal merging to every edge; the result is flagged merged.

        Merging can collapse pairs such as after(a, b) / before(b, a)
        into one edge, so the result may be smaller.
        """
        return TemporalGraph.from_edges(
            (merge_reciprocal(e) for e in self.edges), merged=True
        )

    def label_counts(self) -> dict[RelationType, int]:
        counts: dict[RelationType, int] = {}
        for e in self.edges:
            counts[e.relation] = counts.get(e.relation, 0) + 1
        return counts

    def edge_keys(self) -> frozenset[tuple[str, str, str]]:
        return frozenset(e.key() for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

