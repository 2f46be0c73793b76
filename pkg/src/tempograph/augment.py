"""Order-invariance augmentation: shuffle a target's edge lines in place.

Only the edge statements move; the brace lines and every edge line's
bytes stay untouched, so an augmented target differs from its source
purely in edge order.  Shuffles run on numpy's PCG64 generator, whose
stream is stable across platforms, making augmented corpora
byte-reproducible from their seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dot
from .errors import UnparseableTargetError


@dataclass(frozen=True)
class AugmentationConfig:
    """How many shuffled copies to emit and how to seed them.

    Copies are sampled with replacement (tiny graphs may repeat an
    order); copy ``i`` uses seed ``seed XOR i``.
    """

    k: int = 4
    seed: int = 0
    include_original: bool = True

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _clean_parse(text: str) -> dot.ParseOutcome:
    outcome = dot.parse(text)
    if outcome.skipped_lines or outcome.used_fallback:
        raise UnparseableTargetError(
            f"target is not clean edge lines (skipped={outcome.skipped_lines}, "
            f"fallback={outcome.used_fallback})"
        )
    return outcome


def permute_target(target: dot.LinearizedGraph | str, seed: int) -> dot.LinearizedGraph:
    """Shuffle the edge lines of a clean target string (Fisher-Yates via PCG64).

    Raises UnparseableTargetError when the string has unrecognized lines
    or only parses through the single-line fallback.  The same seed
    always yields the same bytes.
    """
    text = target.text if isinstance(target, dot.LinearizedGraph) else target
    outcome = _clean_parse(text)
    lines = text.split("\n")
    edge_positions = [
        i for i, line in enumerate(lines) if dot.parse_edge_line(line) is not None
    ]
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(len(edge_positions))
    shuffled = [lines[edge_positions[j]] for j in order]
    for pos, line in zip(edge_positions, shuffled):
        lines[pos] = line
    return dot.LinearizedGraph(
        text="\n".join(lines),
        edge_order=tuple(outcome.edges[j] for j in order),
    )


def make_augmented_set(
    target: dot.LinearizedGraph | str, cfg: AugmentationConfig
) -> list[dot.LinearizedGraph]:
    """The original (when configured) plus k shuffled copies.

    Every returned target is edge-set-equal to the source; identical
    (target, cfg) inputs give byte-identical outputs.
    """
    text = target.text if isinstance(target, dot.LinearizedGraph) else target
    outcome = _clean_parse(text)
    out: list[dot.LinearizedGraph] = []
    if cfg.include_original:
        out.append(dot.LinearizedGraph(text=text, edge_order=tuple(outcome.edges)))
    out.extend(permute_target(text, cfg.seed ^ i) for i in range(cfg.k))
    return out
