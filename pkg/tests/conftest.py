"""Shared random generators for graphs, edges, and embedding sets."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np
import pytest

from tempograph import Edge, RelationType, TemporalGraph, normalize_event

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Deliberately hostile alphabet: quotes, backslashes, brackets, unicode,
# combining whitespace.
EVENT_CHARS = list('abcdefgh XYZ"\\[];-=.éλß中ж')
RELATIONS = list(RelationType)


def random_surface(rng: random.Random, max_len: int = 14) -> str:
    while True:
        s = "".join(rng.choice(EVENT_CHARS) for _ in range(rng.randint(1, max_len)))
        if s.strip():
            return s


def random_node_pool(rng: random.Random, size: int) -> list[str]:
    """Surfaces with pairwise-distinct normalized forms."""
    pool: dict[str, str] = {}
    while len(pool) < size:
        s = random_surface(rng)
        pool.setdefault(normalize_event(s).normalized, s)
    return list(pool.values())


def random_edge(rng: random.Random, nodes: list[str]) -> Edge:
    head, tail = rng.sample(nodes, 2)
    return Edge(
        head=normalize_event(head),
        relation=rng.choice(RELATIONS),
        tail=normalize_event(tail),
    )


def random_graph(
    rng: random.Random, max_edges: int = 60, min_edges: int = 0
) -> TemporalGraph:
    n_edges = rng.randint(min_edges, max_edges)
    nodes = random_node_pool(rng, max(2, min(n_edges + 1, 20)))
    return TemporalGraph.from_edges(random_edge(rng, nodes) for _ in range(n_edges))


def random_edge_list(rng: random.Random, max_len: int = 30) -> list[Edge]:
    """Edge list with duplicates likely (small node pool, repeated draws)."""
    n = rng.randint(0, max_len)
    if n == 0:
        return []
    nodes = random_node_pool(rng, rng.randint(2, 5))
    return [random_edge(rng, nodes) for _ in range(n)]


def random_point_set(
    np_rng: np.random.Generator, size: int, dim: int
) -> np.ndarray:
    """Random non-degenerate embedding rows."""
    points = np_rng.normal(size=(size, dim))
    norms = np.linalg.norm(points, axis=1)
    points[norms < 0.5] += 1.0
    return points


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240117)


@pytest.fixture
def np_rng() -> np.random.Generator:
    return np.random.default_rng(20240117)
