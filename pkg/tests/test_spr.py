import json

import numpy as np
import pytest

from tempograph import (
    SpanIndex,
    SprConfig,
    TemporalGraph,
    combine_loss,
    compute_spr,
    edge,
    edge_embedding,
    linearize,
    load_hidden_fixture,
    parse_graph,
    schedule_active,
    spr_schedule,
)
from tempograph.errors import DimensionMismatchError

from conftest import FIXTURES

from test_embedding import oracle_avg_hausdorff


def perfect_case():
    """Sampled string identical to the gold linearization, embeddings shared."""
    gold = TemporalGraph.from_edges(
        [edge("alpha", "before", "beta"), edge("beta", "includes", "gamma")]
    )
    text = linearize(gold).text
    hidden = np.array(
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0], [1.0, 3.0], [0.5, 0.5]]
    )
    spans = [
        SpanIndex(head=(0,), rel=(1,), tail=(2,)),
        SpanIndex(head=(2,), rel=(3,), tail=(4, 5)),
    ]
    gold_embeddings = np.stack([edge_embedding(hidden, s) for s in spans])
    return text, gold, hidden, spans, gold_embeddings


class TestComputeSpr:
    def test_perfect_generation_scores_zero(self):
        text, gold, hidden, spans, gold_embeddings = perfect_case()
        report = compute_spr(text, gold, hidden, spans, gold_embeddings)
        assert report.r_dupl == 0.0
        assert report.r_card == 0.0
        assert report.d_hausdorff == 0.0
        assert report.spr_total == 0.0
        assert report.parsed_edges == 2 and report.unique_edges == 2

    def test_fixture_case_component_values(self):
        fixture = json.loads((FIXTURES / "spr_case.json").read_text("utf-8"))
        hidden, spans = load_hidden_fixture(fixture["hidden"])
        gold = parse_graph(fixture["gold"])
        report = compute_spr(
            fixture["sampled"], gold, hidden, spans, fixture["gold_embeddings"]
        )
        # 3 parsed edges, 2 unique -> (3-2)/2; gold has 3 edges vs 2 unique
        assert report.r_dupl == 0.5
        assert report.r_card == 0.5
        gen = np.stack(
            [edge_embedding(hidden, spans[0]), edge_embedding(hidden, spans[1])]
        )
        expected_match = oracle_avg_hausdorff(
            np.asarray(fixture["gold_embeddings"], dtype=float), gen
        )
        assert report.d_hausdorff == pytest.approx(expected_match, abs=1e-9)
        assert report.spr_total == pytest.approx(
            report.r_dupl + report.r_card + report.d_hausdorff, abs=1e-12
        )

    def test_weighted_total(self):
        fixture = json.loads((FIXTURES / "spr_case.json").read_text("utf-8"))
        hidden, spans = load_hidden_fixture(fixture["hidden"])
        gold = parse_graph(fixture["gold"])
        cfg = SprConfig(w_dupl=2.0, w_card=4.0, w_match=3.0)
        report = compute_spr(
            fixture["sampled"], gold, hidden, spans, fixture["gold_embeddings"], cfg
        )
        assert report.spr_total == pytest.approx(
            2.0 * report.r_dupl + 4.0 * report.r_card + 3.0 * report.d_hausdorff,
            abs=1e-12,
        )

    def test_unparseable_sample_degrades_to_conventions(self):
        _, gold, hidden, _, gold_embeddings = perfect_case()
        report = compute_spr("no graph here", gold, hidden, None, gold_embeddings)
        assert report.r_dupl == 0.0
        assert report.r_card == len(gold.edges)
        assert report.d_hausdorff == 4.0
        assert report.spr_total == len(gold.edges) + 4.0
        assert report.parsed_edges == 0

    def test_missing_spans_dropped_and_counted(self):
        text, gold, hidden, spans, gold_embeddings = perfect_case()
        report = compute_spr(text, gold, hidden, [spans[0], None], gold_embeddings)
        assert report.missing_span_edges == 1
        # matching ran on the one embeddable edge only
        partial = compute_spr(text, gold, hidden, [spans[0]], gold_embeddings)
        assert report.d_hausdorff == partial.d_hausdorff > 0.0

    def test_duplicate_edge_reuses_first_span(self):
        gold = TemporalGraph.from_edges([edge("alpha", "before", "beta")])
        text = "\n".join(
            [
                "strict graph {",
                '"alpha" -- "beta" [rel=before];',
                '"alpha" -- "beta" [rel=before];',
                "}",
            ]
        )
        hidden = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        span = SpanIndex(head=(0,), rel=(1,), tail=(2,))
        gold_embeddings = [edge_embedding(hidden, span)]
        report = compute_spr(text, gold, hidden, [None, span], gold_embeddings)
        assert report.parsed_edges == 2 and report.unique_edges == 1
        assert report.missing_span_edges == 0
        assert report.d_hausdorff == 0.0
        assert report.r_dupl == 1.0

    def test_gold_embedding_dimension_checked(self):
        text, gold, hidden, spans, _ = perfect_case()
        with pytest.raises(DimensionMismatchError):
            compute_spr(text, gold, hidden, spans, np.ones((2, 5)))

    def test_report_dict_shape(self):
        text, gold, hidden, spans, gold_embeddings = perfect_case()
        payload = compute_spr(text, gold, hidden, spans, gold_embeddings).to_dict()
        assert set(payload) == {
            "r_dupl",
            "r_card",
            "d_hausdorff",
            "spr_total",
            "combined_loss",
            "active",
            "parse",
        }
        assert set(payload["parse"]) == {
            "edges",
            "unique_edges",
            "skipped_lines",
            "missing_span_edges",
            "used_fallback",
        }


class TestCombineLoss:
    def test_weighted_average_after_warmup(self):
        cfg = SprConfig(lambda_=0.5, warmup_steps=10)
        assert combine_loss(2.0, 1.0, step=10, cfg=cfg) == 1.5

    def test_zero_mix_returns_ce(self):
        cfg = SprConfig(lambda_=0.0)
        assert combine_loss(2.0, 99.0, step=5, cfg=cfg) == 2.0

    def test_warmup_gates_penalty_out(self):
        cfg = SprConfig(lambda_=0.9, warmup_steps=100)
        assert combine_loss(3.0, 1e9, step=99, cfg=cfg) == 3.0

    def test_monotone_in_penalty_after_warmup(self, rng):
        for _ in range(100):
            cfg = SprConfig(lambda_=rng.uniform(0.01, 1.0), warmup_steps=rng.randint(0, 50))
            step = cfg.warmup_steps + rng.randint(0, 10)
            ce = rng.uniform(0.0, 5.0)
            low, high = sorted((rng.uniform(0, 10), rng.uniform(0, 10)))
            assert combine_loss(ce, low, step, cfg) <= combine_loss(ce, high, step, cfg)


class TestSchedule:
    def test_two_phase_plan(self):
        schedule = spr_schedule(warmup_epochs=10, spr_epochs=3, steps_per_epoch=100)
        assert schedule == [
            {"step_start": 0, "active": False},
            {"step_start": 1000, "active": True},
        ]
        assert not schedule_active(schedule, 0)
        assert not schedule_active(schedule, 999)
        assert schedule_active(schedule, 1000)
        assert schedule_active(schedule, 5000)

    def test_no_penalty_epochs_means_never_active(self):
        schedule = spr_schedule(warmup_epochs=4, spr_epochs=0, steps_per_epoch=10)
        assert all(not schedule_active(schedule, s) for s in range(100))

    def test_single_step_phases_flip_at_boundary(self):
        schedule = spr_schedule(warmup_epochs=1, spr_epochs=1, steps_per_epoch=1)
        assert not schedule_active(schedule, 0)
        assert schedule_active(schedule, 1)

    def test_serializable(self):
        schedule = spr_schedule(2, 1, 5)
        assert json.loads(json.dumps(schedule)) == schedule

    def test_validation(self):
        with pytest.raises(ValueError):
            spr_schedule(1, 1, 0)
        with pytest.raises(ValueError):
            spr_schedule(-1, 1, 5)


class TestSprConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"w_dupl": -1.0},
            {"w_card": float("nan")},
            {"w_match": float("inf")},
            {"lambda_": 1.5},
            {"lambda_": -0.1},
            {"warmup_steps": -1},
        ],
    )
    def test_bad_values_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SprConfig(**kwargs)


def test_mechanism_completing_the_set_lowers_penalty():
    """Adding a missing correct edge (with its gold embedding) lowers the total;
    appending a duplicate raises the duplication value."""
    gold = TemporalGraph.from_edges(
        [
            edge("alpha", "before", "beta"),
            edge("beta", "before", "gamma"),
            edge("gamma", "includes", "delta"),
        ]
    )
    hidden = np.array(
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 0.0], [0.0, 2.0], [3.0, 1.0]]
    )
    spans = [
        SpanIndex(head=(0,), rel=(1,), tail=(2,)),
        SpanIndex(head=(2,), rel=(3,), tail=(4,)),
        SpanIndex(head=(4,), rel=(5,), tail=(0,)),
    ]
    gold_embeddings = np.stack([edge_embedding(hidden, s) for s in spans])
    lines = linearize(gold).text.split("\n")
    partial = "\n".join(lines[:3] + lines[-1:])  # drop the third edge line
    incomplete = compute_spr(partial, gold, hidden, spans[:2], gold_embeddings)
    complete = compute_spr(linearize(gold).text, gold, hidden, spans, gold_embeddings)
    assert complete.spr_total < incomplete.spr_total
    duplicated = "\n".join(lines[:3] + [lines[2]] + lines[-1:])
    duped = compute_spr(
        duplicated, gold, hidden, spans[:2] + [spans[1]], gold_embeddings
    )
    assert duped.r_dupl > incomplete.r_dupl
