"""Set-based precision/recall/F1 over node and edge sets, plus graph statistics.

Scoring conventions (also stamped into report JSON):
  - graphs are deduplicated before scoring, so repeated correct edges
    earn no extra credit;
  - 0/0 precision or recall is 0, except that two empty sets compare as
    a perfect match (P = R = F1 = 1);
  - edge matching needs normalized head, relation label, and tail to all
    agree, with direction significant.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import EmptyGraphError, MergeRegimeMismatchError
from .graph import Edge, TemporalGraph

CONVENTIONS = (
    "dedup before scoring; 0/0 ratio scores 0; two empty sets score 1.0; "
    "normalized match unless strict"
)


@dataclass(frozen=True)
class PrfScore:
    precision: float
    recall: float
    f1: float
    matched: int
    predicted: int
    gold: int

    @classmethod
    def from_counts(cls, matched: int, predicted: int, gold: int) -> "PrfScore":
        if predicted == 0 and gold == 0:
            return cls(1.0, 1.0, 1.0, 0, 0, 0)
        p = matched / predicted if predicted else 0.0
        r = matched / gold if gold else 0.0
        f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return cls(p, r, f1, matched, predicted, gold)

    def to_dict(self) -> dict:
        return asdict(self)


def node_prf(pred: TemporalGraph, gold: TemporalGraph, strict: bool = False) -> PrfScore:
    """Score the predicted node set against the gold node set."""
    def keyf(ev):
        return ev.raw if strict else ev.normalized

    pred_nodes = {keyf(n) for n in pred.nodes}
    gold_nodes = {keyf(n) for n in gold.nodes}
    return PrfScore.from_counts(
        len(pred_nodes & gold_nodes), len(pred_nodes), len(gold_nodes)
    )


def edge_prf(pred: TemporalGraph, gold: TemporalGraph, strict: bool = False) -> PrfScore:
    """Score predicted edges against gold edges.

    Both graphs must be in the same reciprocal-merge regime; comparing a
    merged graph with an unmerged one raises MergeRegimeMismatchError
    rather than silently deflating scores.
    """
    if pred.merged != gold.merged:
        raise MergeRegimeMismatchError(
            f"merge regimes differ: pred merged={pred.merged}, gold merged={gold.merged}"
        )
    keyf = Edge.raw_key if strict else Edge.key
    pred_keys = {keyf(e) for e in pred.edges}
    gold_keys = {keyf(e) for e in gold.edges}
    return PrfScore.from_counts(
        len(pred_keys & gold_keys), len(pred_keys), len(gold_keys)
    )


@dataclass(frozen=True)
class GraphStats:
    """Node/edge counts, average node degree, and percentage label distribution."""

    node_count: int
    edge_count: int
    avg_node_degree: float
    label_distribution: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "avg_node_degree": self.avg_node_degree,
            "label_distribution": dict(self.label_distribution),
        }


def stats_from_counts(
    node_count: int, edge_count: int, label_counts: dict[str, int] | None = None
) -> GraphStats:
    """Average degree (2E/N) and label percentages from raw counts.

    Raises EmptyGraphError when ``node_count`` is zero: degree is
    undefined without nodes.
    """
    if node_count <= 0:
        raise EmptyGraphError("average node degree is undefined on zero nodes")
    distribution: dict[str, float] = {}
    if label_counts:
        total = sum(label_counts.values())
        if total > 0:
            distribution = {
                label: 100.0 * count / total
                for label, count in sorted(label_counts.items())
            }
    return GraphStats(
        node_count=node_count,
        edge_count=edge_count,
        avg_node_degree=2.0 * edge_count / node_count,
        label_distribution=distribution,
    )


def graph_stats(graph: TemporalGraph) -> GraphStats:
    """Statistics of a single graph."""
    label_counts = {rel.value: n for rel, n in graph.label_counts().items()}
    return stats_from_counts(len(graph.nodes), len(graph.edges), label_counts)


def _pooled_stats(graphs: list[TemporalGraph]) -> dict:
    nodes = sum(len(g.nodes) for g in graphs)
    edges = sum(len(g.edges) for g in graphs)
    labels: dict[str, int] = {}
    for g in graphs:
        for rel, n in g.label_counts().items():
            labels[rel.value] = labels.get(rel.value, 0) + n
    if nodes == 0:
        return {
            "node_count": 0,
            "edge_count": edges,
            "avg_node_degree": None,
            "label_distribution": {},
        }
    return stats_from_counts(nodes, edges, labels).to_dict()


def _macro(scores: list[PrfScore]) -> dict:
    if not scores:
        return {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    n = len(scores)
    return {
        "precision": sum(s.precision for s in scores) / n,
        "recall": sum(s.recall for s in scores) / n,
        "f1": sum(s.f1 for s in scores) / n,
    }


def _micro(scores: list[PrfScore]) -> dict:
    pooled = PrfScore.from_counts(
        sum(s.matched for s in scores),
        sum(s.predicted for s in scores),
        sum(s.gold for s in scores),
    )
    return pooled.to_dict()


def evaluate_documents(
    pairs: list[tuple[str, TemporalGraph, TemporalGraph]], strict: bool = False
) -> dict:
    """Per-document, macro-, and micro-averaged scores for (doc_id, pred, gold) pairs.

    Macro averages the per-document scores; micro pools the raw counts.
    Both are reported because they answer different questions and
    neither subsumes the other.
    """
    per_doc = []
    node_scores: list[PrfScore] = []
    edge_scores: list[PrfScore] = []
    for doc_id, pred, gold in pairs:
        node = node_prf(pred, gold, strict=strict)
        edge = edge_prf(pred, gold, strict=strict)
        node_scores.append(node)
        edge_scores.append(edge)
        per_doc.append({"doc_id": doc_id, "node": node.to_dict(), "edge": edge.to_dict()})
    return {
        "per_doc": per_doc,
        "macro": {
            "doc_count": len(per_doc),
            "node": _macro(node_scores),
            "edge": _macro(edge_scores),
        },
        "micro": {"node": _micro(node_scores), "edge": _micro(edge_scores)},
        "stats": {
            "pred": _pooled_stats([p for _, p, _ in pairs]),
            "gold": _pooled_stats([g for _, _, g in pairs]),
        },
        "conventions": CONVENTIONS,
    }
