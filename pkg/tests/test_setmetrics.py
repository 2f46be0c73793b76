from collections import Counter

import pytest

from tempograph import dedup, edge, r_card, r_dupl

from conftest import random_edge_list


def oracle_r_dupl(edges):
    """Independent recomputation straight from occurrence counts."""
    if not edges:
        return 0.0
    counts = Counter(e.key() for e in edges)
    total = sum(counts.values())
    return (total - len(counts)) / len(counts)


class TestDedup:
    def test_basic(self):
        x, y = edge("a", "before", "b"), edge("b", "before", "c")
        assert dedup([x, x, y]) == [x, y]

    def test_empty(self):
        assert dedup([]) == []

    def test_casing_variants_collapse_keeping_first_raw(self):
        x = edge("An Event", "before", "Other")
        x2 = edge("an  event", "before", "OTHER")
        result = dedup([x, x2])
        assert len(result) == 1
        assert result[0].head.raw == "An Event"

    def test_idempotent(self, rng):
        for _ in range(100):
            items = random_edge_list(rng)
            once = dedup(items)
            assert dedup(once) == once


class TestRDupl:
    def test_three_items_two_unique(self):
        x, y = edge("a", "before", "b"), edge("b", "before", "c")
        assert r_dupl([x, x, y]) == 0.5

    def test_no_duplicates(self):
        assert r_dupl([edge("a", "before", "b")]) == 0.0

    def test_empty_list(self):
        assert r_dupl([]) == 0.0

    def test_zero_iff_no_duplicates(self, rng):
        for _ in range(200):
            items = random_edge_list(rng)
            value = r_dupl(items)
            assert value >= 0.0
            has_dupes = len({e.key() for e in items}) < len(items)
            assert (value > 0.0) == has_dupes

    def test_matches_oracle(self, rng):
        for _ in range(200):
            items = random_edge_list(rng)
            assert r_dupl(items) == oracle_r_dupl(items)


class TestRCard:
    def test_gap(self):
        assert r_card(range(10), range(8)) == 0.25

    def test_equal_sizes(self):
        assert r_card(range(7), range(7)) == 0.0

    def test_empty_generation_floors_denominator(self):
        assert r_card(range(4), range(0)) == 4.0

    def test_non_negative(self, rng):
        for _ in range(200):
            gold, gen = rng.randint(0, 50), rng.randint(0, 50)
            value = r_card(range(gold), range(gen))
            assert value >= 0.0
            assert (value == 0.0) == (gold == gen)

    def test_growing_gold_grows_penalty_when_undergenerating(self, rng):
        for _ in range(100):
            gen = rng.randint(1, 20)
            gold = rng.randint(gen, 40)
            assert r_card(range(2 * gold), range(gen)) > r_card(
                range(gold), range(gen)
            )

    def test_matches_direct_formula(self, rng):
        for _ in range(200):
            gold, gen = rng.randint(0, 60), rng.randint(0, 60)
            expected = abs(gold - gen) / max(gen, 1)
            assert r_card(range(gold), range(gen)) == expected
