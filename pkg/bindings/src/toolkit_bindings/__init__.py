"""Plain-data binding surface for training loops.

Every function takes and returns built-in types plus numpy arrays —
strings, dicts, lists, `(T, d)` float matrices — so host loops never
touch the core package's domain classes.  Results are value-identical
to the `toolkit` CLI on the shared fixtures: strings byte-equal, floats
within 1e-12.  All functions are pure; repeated calls with identical
arguments return identical results.
"""

from __future__ import annotations

REQUIRED_CORE_VERSION = "0.1.0"

try:
    import tempograph as _core
except ImportError as exc:  # pragma: no cover - import guard
    raise ImportError(
        "toolkit-bindings needs the tempograph core package "
        f">= {REQUIRED_CORE_VERSION}; install it before importing the bindings"
    ) from exc

import numpy as _np

from tempograph import augment as _augment
from tempograph import dot as _dot
from tempograph import evaluate as _evaluate
from tempograph import spr as _spr
from tempograph.corpus import stable_doc_seed as document_seed
from tempograph.embedding import SpanIndex as _SpanIndex
from tempograph.spr import schedule_active, spr_schedule

__all__ = [
    "REQUIRED_CORE_VERSION",
    "augment_targets",
    "combine_loss",
    "compute_spr",
    "core_version",
    "document_seed",
    "edge_prf",
    "node_prf",
    "parse",
    "schedule_active",
    "spr_schedule",
]


def core_version() -> str:
    """Version of the core package the bindings loaded against."""
    return _core.__version__


def parse(text: str) -> dict:
    """Lenient DOT parse; same payload as the CLI ``parse`` subcommand."""
    return _dot.parse(text).to_dict()


def augment_targets(
    target: str, k: int, seed: int, include_original: bool = True
) -> list[str]:
    """The target plus ``k`` deterministic edge-order shuffles, as strings.

    Use ``document_seed(seed, doc_id)`` to reproduce the per-document
    streams of the corpus pipeline and the ``augment`` subcommand.
    """
    cfg = _augment.AugmentationConfig(
        k=k, seed=seed, include_original=include_original
    )
    return [lg.text for lg in _augment.make_augmented_set(target, cfg)]


def _span_from(entry) -> _SpanIndex | None:
    if entry is None:
        return None
    if isinstance(entry, _SpanIndex):
        return entry
    return _SpanIndex.from_dict(entry)


def compute_spr(
    sampled: str,
    gold: str,
    hidden_states,
    spans,
    gold_embeddings,
    w_dupl: float = 1.0,
    w_card: float = 1.0,
    w_match: float = 1.0,
    mix: float = 0.5,
    warmup_steps: int = 0,
    ce: float | None = None,
    step: int | None = None,
) -> dict:
    """Set-property penalties for one sampled string against a gold DOT string.

    ``hidden_states`` is row-major ``(T, d)``; ``spans`` is a list aligned
    with the parsed edges, each entry ``{"head": [...], "rel": [...],
    "tail": [...]}`` or None.  When ``ce`` is given, the payload also
    carries the warmup-gated combined loss for ``step`` (default: the
    first post-warmup step).
    """
    cfg = _spr.SprConfig(
        w_dupl=w_dupl,
        w_card=w_card,
        w_match=w_match,
        lambda_=mix,
        warmup_steps=warmup_steps,
    )
    hidden = _np.ascontiguousarray(_np.asarray(hidden_states, dtype=_np.float64))
    report = _spr.compute_spr(
        sampled=sampled,
        gold=_dot.parse_graph(gold),
        hidden=hidden,
        spans=None if spans is None else [_span_from(s) for s in spans],
        gold_embeddings=gold_embeddings,
        cfg=cfg,
    )
    if ce is not None:
        at = cfg.warmup_steps if step is None else int(step)
        report.combined_loss = _spr.combine_loss(float(ce), report.spr_total, at, cfg)
        report.active = at >= cfg.warmup_steps
    return report.to_dict()


def combine_loss(
    ce: float, spr_total: float, step: int, mix: float = 0.5, warmup_steps: int = 0
) -> float:
    """Warmup-gated weighted average of cross-entropy and the penalty total."""
    cfg = _spr.SprConfig(lambda_=mix, warmup_steps=warmup_steps)
    return _spr.combine_loss(ce, spr_total, step, cfg)


def _graph(text: str, merge: bool) -> "_core.TemporalGraph":
    graph = _dot.parse_graph(text)
    return graph.merge() if merge else graph


def node_prf(pred: str, gold: str, merge: bool = False, strict: bool = False) -> dict:
    """Node-set precision/recall/F1 between two DOT strings."""
    return _evaluate.node_prf(
        _graph(pred, merge), _graph(gold, merge), strict=strict
    ).to_dict()


def edge_prf(pred: str, gold: str, merge: bool = False, strict: bool = False) -> dict:
    """Edge-set precision/recall/F1 between two DOT strings."""
    return _evaluate.edge_prf(
        _graph(pred, merge), _graph(gold, merge), strict=strict
    ).to_dict()
