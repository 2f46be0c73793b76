"""Weak-supervision dataset pipeline.

Ingests one JSON document per line:

    {"doc_id": str, "text": str, "descriptors": [str],
     "events": [{"span": [start, end], "surface": str}, ...],
     "relations": [{"head": idx, "tail": idx, "label": str}, ...]}

and turns it into salience tables, descriptor-capped selections, and
train/test JSONL rows ``{"doc_id", "input", "target"}`` whose targets
are DOT strings.  Annotation tools are noisy, so malformed rows are
skipped and counted, and individually bad relations (self-loops, bad
indices, unknown labels, empty surfaces) are dropped per relation.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .augment import AugmentationConfig, make_augmented_set
from .dot import linearize
from .errors import (
    EmptyEventError,
    InvalidCountsError,
    SelfLoopError,
    UnparseableAnnotationError,
)
from .graph import Edge, EventText, RelationType, TemporalGraph, merge_reciprocal, normalize_event


@dataclass(frozen=True)
class EventMention:
    """One annotated event occurrence; ``event`` is None when the surface is blank."""

    start: int
    end: int
    surface: str
    event: EventText | None


@dataclass(frozen=True)
class DocumentEdge:
    """An edge with the character offsets of the mentions that produced it."""

    edge: Edge
    head_start: int
    tail_start: int


@dataclass
class CorpusDocument:
    doc_id: str
    text: str
    descriptors: list[str]
    mentions: list[EventMention]
    edges: list[DocumentEdge]
    dropped_relations: int = 0


@dataclass
class IngestStats:
    documents: int = 0
    skipped_rows: int = 0
    dropped_relations: int = 0


def document_from_row(row: dict) -> CorpusDocument:
    """Validate and convert one decoded annotation row.

    Raises UnparseableAnnotationError for structural problems (missing
    fields, spans outside the text, empty descriptor list); merely bad
    relations are dropped and counted on the document instead.
    """
    try:
        doc_id = str(row["doc_id"])
        text = row["text"]
        descriptors = list(row["descriptors"])
        events = list(row["events"])
        relations = list(row["relations"])
        if not isinstance(text, str) or not descriptors:
            raise ValueError("text must be a string and descriptors non-empty")
        mentions: list[EventMention] = []
        for entry in events:
            start, end = (int(v) for v in entry["span"])
            surface = str(entry["surface"])
            if not (0 <= start < end <= len(text)):
                raise ValueError(f"span [{start}, {end}] outside text")
            try:
                event = normalize_event(surface)
            except EmptyEventError:
                event = None
            mentions.append(EventMention(start=start, end=end, surface=surface, event=event))
    except UnparseableAnnotationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise UnparseableAnnotationError(f"bad annotation row: {exc}") from exc

    edges: list[DocumentEdge] = []
    dropped = 0
    for rel in relations:
        try:
            head_idx, tail_idx = int(rel["head"]), int(rel["tail"])
            if head_idx < 0 or tail_idx < 0:
                raise ValueError("negative event index")
            head = mentions[head_idx]
            tail = mentions[tail_idx]
            label = RelationType(str(rel["label"]))
            if head.event is None or tail.event is None:
                raise ValueError("relation endpoint has a blank surface")
            edge = Edge(head=head.event, relation=label, tail=tail.event)
        except (KeyError, TypeError, ValueError, IndexError, SelfLoopError):
            dropped += 1
            continue
        edges.append(DocumentEdge(edge=edge, head_start=head.start, tail_start=tail.start))
    return CorpusDocument(
        doc_id=doc_id,
        text=text,
        descriptors=descriptors,
        mentions=mentions,
        edges=edges,
        dropped_relations=dropped,
    )


def load_annotations(path: str | Path) -> tuple[list[CorpusDocument], IngestStats]:
    """Read annotation JSONL, skipping (and counting) undecodable rows."""
    docs: list[CorpusDocument] = []
    stats = IngestStats()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            try:
                docs.append(document_from_row(json.loads(line)))
            except (json.JSONDecodeError, UnparseableAnnotationError):
                stats.skipped_rows += 1
                continue
    stats.documents = len(docs)
    stats.dropped_relations = sum(d.dropped_relations for d in docs)
    return docs, stats


def ef_idf(
    event_freq_in_descriptor: int,
    total_event_occurrences_in_descriptor: int,
    descriptor_count: int,
    descriptors_containing_event: int,
) -> float:
    """Event salience inside a descriptor.

    Occurrence share of the event within the descriptor, times the
    natural log of how rarely the event spreads across descriptors:
    (f / total) * ln(D / containing).  Zero when the event occurs in
    every descriptor or not at all.
    """
    if total_event_occurrences_in_descriptor <= 0:
        raise InvalidCountsError("total occurrences must be positive")
    if not 1 <= descriptors_containing_event <= descriptor_count:
        raise InvalidCountsError(
            "need descriptor_count >= descriptors_containing_event >= 1"
        )
    if not 0 <= event_freq_in_descriptor <= total_event_occurrences_in_descriptor:
        raise InvalidCountsError("event frequency must lie in [0, total]")
    if event_freq_in_descriptor == 0:
        return 0.0
    share = event_freq_in_descriptor / total_event_occurrences_in_descriptor
    return share * math.log(descriptor_count / descriptors_containing_event)


@dataclass
class SalienceTable:
    """ef-idf scores keyed by (normalized event, descriptor)."""

    entries: dict[tuple[str, str], float]
    descriptor_count: int

    def rows(self, threshold: float | None = None) -> list[tuple[str, str, float]]:
        """(event, descriptor, score) rows: descriptor asc, score desc, event asc."""
        rows = [
            (event, descriptor, score)
            for (event, descriptor), score in self.entries.items()
            if threshold is None or score >= threshold
        ]
        rows.sort(key=lambda r: (r[1], -r[2], r[0]))
        return rows


def build_salience(docs: Sequence[CorpusDocument]) -> SalienceTable:
    """Count event mentions per descriptor and score every (event, descriptor) pair.

    Accumulation is a sum of per-document counts, so any grouping of the
    documents produces the same table.
    """
    freq: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    containing: dict[str, set[str]] = {}
    for doc in docs:
        doc_events = [m.event.normalized for m in doc.mentions if m.event is not None]
        for descriptor in set(doc.descriptors):
            per = freq.setdefault(descriptor, {})
            for event in doc_events:
                per[event] = per.get(event, 0) + 1
                containing.setdefault(event, set()).add(descriptor)
            totals[descriptor] = totals.get(descriptor, 0) + len(doc_events)
    descriptor_count = len(freq)
    entries: dict[tuple[str, str], float] = {}
    for descriptor, per in freq.items():
        total = totals[descriptor]
        if total == 0:
            continue
        for event, count in per.items():
            entries[(event, descriptor)] = ef_idf(
                count, total, descriptor_count, len(containing[event])
            )
    return SalienceTable(entries=entries, descriptor_count=descriptor_count)


def write_salience_tsv(
    table: SalienceTable, path: str | Path, threshold: float | None = None
) -> int:
    """Write ``event <tab> descriptor <tab> score`` rows; returns the row count."""
    rows = table.rows(threshold)
    with open(path, "w", encoding="utf-8") as handle:
        for event, descriptor, score in rows:
            handle.write(f"{event}\t{descriptor}\t{score:.9f}\n")
    return len(rows)


@dataclass
class SelectionStats:
    considered: int = 0
    dropped_empty: int = 0
    selected: int = 0


def select_documents(
    docs: Sequence[CorpusDocument],
    descriptor_allowlist: Iterable[str],
    per_descriptor_cap: int,
) -> tuple[list[CorpusDocument], SelectionStats]:
    """Documents whose descriptors intersect the allowlist, capped per descriptor.

    Each allowlisted descriptor contributes its first ``cap`` documents
    in doc_id order; the result is the union, sorted by doc_id.
    Documents with no valid edges are dropped first and counted.
    """
    if per_descriptor_cap < 1:
        raise ValueError("per_descriptor_cap must be >= 1")
    allow = set(descriptor_allowlist)
    stats = SelectionStats()
    hits = [d for d in docs if allow & set(d.descriptors)]
    stats.considered = len(hits)
    eligible = [d for d in hits if d.edges]
    stats.dropped_empty = len(hits) - len(eligible)
    chosen: dict[str, CorpusDocument] = {}
    for descriptor in sorted(allow):
        candidates = sorted(
            (d for d in eligible if descriptor in d.descriptors),
            key=lambda d: d.doc_id,
        )
        for doc in candidates[:per_descriptor_cap]:
            chosen.setdefault(doc.doc_id, doc)
    selected = [chosen[doc_id] for doc_id in sorted(chosen)]
    stats.selected = len(selected)
    return selected, stats


def _appearance_order(edges: list[DocumentEdge]) -> list[Edge]:
    def sort_key(de: DocumentEdge):
        first = min(de.head_start, de.tail_start)
        last = max(de.head_start, de.tail_start)
        return (first, last, de.edge.relation.value, *de.edge.key())

    return [de.edge for de in sorted(edges, key=sort_key)]


def stable_doc_seed(seed: int, doc_id: str) -> int:
    digest = hashlib.blake2b(doc_id.encode("utf-8"), digest_size=8).digest()
    return seed ^ int.from_bytes(digest, "big")


def document_target(
    doc: CorpusDocument,
    merge: bool,
    order: str = "appearance",
    seed: int = 0,
) -> TemporalGraph:
    """The document's target graph with its edges in emission order.

    ``appearance`` orders edges by the earlier of their two mention
    offsets (ties by the later offset, then label and events); ``random``
    shuffles deterministically from the document seed.
    """
    doc_edges = doc.edges
    if merge:
        doc_edges = []
        for de in doc.edges:
            rewritten = merge_reciprocal(de.edge)
            if rewritten is de.edge:
                doc_edges.append(de)
            else:
                doc_edges.append(
                    DocumentEdge(
                        edge=rewritten,
                        head_start=de.tail_start,
                        tail_start=de.head_start,
                    )
                )
    ordered = _appearance_order(doc_edges)
    graph = TemporalGraph.from_edges(ordered, merged=merge)
    if order == "random":
        rng = np.random.Generator(np.random.PCG64(stable_doc_seed(seed, doc.doc_id)))
        perm = rng.permutation(len(graph.edges))
        graph = TemporalGraph(
            edges=tuple(graph.edges[i] for i in perm), merged=graph.merged
        )
    elif order != "appearance":
        raise ValueError(f"unknown edge order {order!r}")
    return graph


@dataclass
class EmitStats:
    documents: int = 0
    rows: int = 0
    skipped_empty_docs: int = 0


def emit_dataset(
    docs: Sequence[CorpusDocument],
    path: str | Path,
    merge: bool,
    augment_cfg: AugmentationConfig | None = None,
    order: str = "appearance",
) -> EmitStats:
    """Write dataset JSONL rows, one original target per document plus augmentations.

    Augmentation seeds mix the configured seed with a stable hash of the
    doc_id, so row content is independent of corpus ordering.  Documents
    with no edges are skipped and counted.
    """
    stats = EmitStats()
    seed = augment_cfg.seed if augment_cfg is not None else 0
    with open(path, "w", encoding="utf-8") as handle:
        for doc in docs:
            graph = document_target(doc, merge=merge, order=order, seed=seed)
            if not graph.edges:
                stats.skipped_empty_docs += 1
                continue
            target = linearize(graph)
            if augment_cfg is not None:
                doc_cfg = AugmentationConfig(
                    k=augment_cfg.k,
                    seed=stable_doc_seed(augment_cfg.seed, doc.doc_id),
                    include_original=augment_cfg.include_original,
                )
                targets = [t.text for t in make_augmented_set(target, doc_cfg)]
            else:
                targets = [target.text]
            for text in targets:
                row = {"doc_id": doc.doc_id, "input": doc.text, "target": text}
                handle.write(json.dumps(row, ensure_ascii=False) + "\n")
                stats.rows += 1
            stats.documents += 1
    return stats


def split_train_test(
    docs: Sequence[CorpusDocument], test_fraction: float, seed: int
) -> tuple[list[CorpusDocument], list[CorpusDocument]]:
    """Deterministic split keyed on (seed, doc_id); insensitive to corpus order."""
    if not 0.0 <= test_fraction <= 1.0:
        raise ValueError("test_fraction must be within [0, 1]")
    train: list[CorpusDocument] = []
    test: list[CorpusDocument] = []
    for doc in docs:
        digest = hashlib.blake2b(
            f"{seed}:{doc.doc_id}".encode("utf-8"), digest_size=8
        ).digest()
        u = int.from_bytes(digest, "big") / 2**64
        (test if u < test_fraction else train).append(doc)
    return train, test
