import random

import pytest

from tempograph import (
    TemporalGraph,
    edge,
    edge_prf,
    evaluate_documents,
    graph_stats,
    node_prf,
    stats_from_counts,
)
from tempograph.errors import EmptyGraphError, MergeRegimeMismatchError

from conftest import random_graph


def oracle_prf(pred_keys, gold_keys):
    """Brute-force double-loop matching."""
    matched = sum(1 for p in pred_keys for g in gold_keys if p == g)
    predicted, gold = len(pred_keys), len(gold_keys)
    if predicted == 0 and gold == 0:
        return 1.0, 1.0, 1.0
    p = matched / predicted if predicted else 0.0
    r = matched / gold if gold else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def graph_of(*triples, merged=False):
    return TemporalGraph.from_edges(
        (edge(h, rel, t) for h, rel, t in triples), merged=merged
    )


class TestNodePrf:
    def test_identity(self):
        g = graph_of(("a", "before", "b"))
        s = node_prf(g, g)
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)

    def test_half_overlap(self):
        pred = graph_of(("a", "before", "b"))
        gold = graph_of(("b", "before", "c"))
        s = node_prf(pred, gold)
        assert (s.precision, s.recall, s.f1) == (0.5, 0.5, 0.5)

    def test_empty_pred_vs_nonempty_gold(self):
        s = node_prf(TemporalGraph(), graph_of(("a", "before", "b")))
        assert (s.precision, s.recall, s.f1) == (0.0, 0.0, 0.0)

    def test_both_empty_scores_perfect(self):
        s = node_prf(TemporalGraph(), TemporalGraph())
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)

    def test_symmetry_precision_recall(self, rng):
        for _ in range(50):
            a, b = random_graph(rng, 12), random_graph(rng, 12)
            assert node_prf(a, b).precision == node_prf(b, a).recall
            assert node_prf(a, b).recall == node_prf(b, a).precision


class TestEdgePrf:
    def test_identity(self):
        g = graph_of(("a", "before", "b"), ("b", "includes", "c"))
        s = edge_prf(g, g)
        assert (s.precision, s.recall, s.f1) == (1.0, 1.0, 1.0)

    def test_extra_prediction_halves_precision(self):
        pred = graph_of(("a", "before", "b"), ("a", "before", "c"))
        gold = graph_of(("a", "before", "b"))
        s = edge_prf(pred, gold)
        assert s.precision == 0.5
        assert s.recall == 1.0
        assert s.f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_direction_matters(self):
        s = edge_prf(graph_of(("a", "before", "b")), graph_of(("b", "before", "a")))
        assert s.matched == 0

    def test_merge_regime_mismatch(self):
        with pytest.raises(MergeRegimeMismatchError):
            edge_prf(graph_of(("a", "before", "b")), graph_of(("a", "before", "b"), merged=True))

    def test_strict_mode_is_stricter(self):
        pred = graph_of(("An Event", "before", "other"))
        gold = graph_of(("an event", "before", "OTHER"))
        assert edge_prf(pred, gold).matched == 1
        assert edge_prf(pred, gold, strict=True).matched == 0

    def test_matches_oracle(self, rng):
        for _ in range(100):
            pred, gold = random_graph(rng, 15), random_graph(rng, 15)
            s = edge_prf(pred, gold)
            p, r, f1 = oracle_prf(pred.edge_keys(), gold.edge_keys())
            assert (s.precision, s.recall, s.f1) == (p, r, f1)

    def test_permutation_invariance(self, rng):
        for _ in range(20):
            pred, gold = random_graph(rng, 10, min_edges=2), random_graph(rng, 10)
            base = edge_prf(pred, gold)
            shuffled = list(pred.edges)
            rng.shuffle(shuffled)
            pred2 = TemporalGraph(edges=tuple(shuffled), merged=pred.merged)
            assert edge_prf(pred2, gold) == base


class TestGraphStats:
    def test_degree_from_single_edge(self):
        stats = graph_stats(graph_of(("a", "before", "b")))
        assert stats.node_count == 2
        assert stats.edge_count == 1
        assert stats.avg_node_degree == 1.0

    def test_degree_from_reference_counts(self):
        stats = stats_from_counts(node_count=846_022, edge_count=1_066_264)
        assert stats.avg_node_degree == pytest.approx(2.52, abs=0.005)

    def test_label_distribution_percentages(self):
        stats = stats_from_counts(
            node_count=10,
            edge_count=10_000,
            label_counts={"before": 9313, "includes": 463, "simultaneous": 224},
        )
        dist = stats.label_distribution
        assert dist["before"] == pytest.approx(93.13, abs=0.01)
        assert dist["includes"] == pytest.approx(4.63, abs=0.01)
        assert dist["simultaneous"] == pytest.approx(2.24, abs=0.01)
        assert sum(dist.values()) == pytest.approx(100.0, abs=0.01)

    def test_zero_nodes_rejected(self):
        with pytest.raises(EmptyGraphError):
            stats_from_counts(node_count=0, edge_count=0)

    def test_distribution_sums_to_100_on_random_graphs(self, rng):
        for _ in range(30):
            g = random_graph(rng, 20, min_edges=1)
            assert sum(graph_stats(g).label_distribution.values()) == pytest.approx(
                100.0, abs=0.01
            )


class TestEvaluateDocuments:
    def test_report_shape_and_micro_pooling(self):
        pairs = [
            ("d1", graph_of(("a", "before", "b")), graph_of(("a", "before", "b"))),
            ("d2", graph_of(("x", "before", "y")), graph_of(("x", "before", "z"))),
        ]
        report = evaluate_documents(pairs)
        assert {"per_doc", "macro", "micro", "stats", "conventions"} <= report.keys()
        assert [d["doc_id"] for d in report["per_doc"]] == ["d1", "d2"]
        # micro edge: matched 1 of 2 predicted, 2 gold
        micro = report["micro"]["edge"]
        assert micro["matched"] == 1
        assert micro["precision"] == 0.5
        assert micro["recall"] == 0.5
        # macro edge: mean of 1.0 and 0.0
        assert report["macro"]["edge"]["f1"] == 0.5

    def test_stats_pool_counts(self):
        pairs = [
            ("d1", graph_of(("a", "before", "b")), graph_of(("a", "before", "b"))),
            ("d2", graph_of(("x", "after", "y")), graph_of(("x", "before", "y"))),
        ]
        report = evaluate_documents(pairs)
        assert report["stats"]["pred"]["node_count"] == 4
        assert report["stats"]["pred"]["edge_count"] == 2
        assert report["stats"]["gold"]["avg_node_degree"] == 1.0

    def test_empty_report(self):
        report = evaluate_documents([])
        assert report["per_doc"] == []
        assert report["macro"]["doc_count"] == 0
        assert report["stats"]["pred"]["avg_node_degree"] is None
