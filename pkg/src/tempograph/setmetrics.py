"""Edge-set arithmetic: deduplication and the exact count-based penalties."""

from __future__ import annotations

from typing import Sequence, Sized

from .graph import Edge, dedup_edges as dedup

__all__ = ["dedup", "r_dupl", "r_card"]


def r_dupl(edges: Sequence[Edge]) -> float:
    """Duplication penalty: excess occurrences relative to the unique count.

    (|list| - |unique|) / |unique|.  Defined as 0 for an empty list (no
    evidence of duplication), which also keeps the ratio finite.
    """
    if not edges:
        return 0.0
    unique = len({e.key() for e in edges})
    return (len(edges) - unique) / unique


def r_card(gold: Sized, gen: Sized) -> float:
    """Cardinality penalty: absolute size gap relative to the generated size.

    |len(gold) - len(gen)| / max(len(gen), 1).  The denominator floor
    keeps the penalty finite when nothing was generated, and leaves the
    ratio untouched whenever at least one edge was.
    """
    return abs(len(gold) - len(gen)) / max(len(gen), 1)
