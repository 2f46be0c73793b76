#!/usr/bin/env python3
"""Demonstration training loop wired through the bindings.

No real model: a mock sampler stands in for the decoder, pseudo
hidden-states are hashed from edge strings, and the cross-entropy value
is a token-mismatch surrogate.  What is real is the integration
contract: build a dataset through the CLI pipeline, expand the
activation schedule, and once past warmup fold the set-property
penalties into the per-step loss via ``compute_spr`` / ``combine_loss``.
"""

import argparse
import hashlib
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

import toolkit_bindings as tb

DIM = 4  # per-component width of the pseudo hidden states


def token_vector(token: str) -> np.ndarray:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8 * DIM).digest()
    raw = np.frombuffer(digest, dtype=np.uint64).astype(np.float64)
    return raw / 2**64 + 0.05  # keep norms comfortably away from zero


def edge_states(edges: list[dict]) -> tuple[np.ndarray, list[dict]]:
    """Three hidden rows (head/rel/tail) and one span per parsed edge."""
    rows, spans = [], []
    for i, e in enumerate(edges):
        rows += [
            token_vector(e["head_normalized"]),
            token_vector(e["relation"]),
            token_vector(e["tail_normalized"]),
        ]
        spans.append({"head": [3 * i], "rel": [3 * i + 1], "tail": [3 * i + 2]})
    hidden = np.stack(rows) if rows else np.zeros((0, DIM))
    return hidden, spans


def embeddings_of(target: str) -> np.ndarray:
    edges = tb.parse(target)["edges"]
    hidden, spans = edge_states(edges)
    return np.stack(
        [hidden[s["head"] + s["rel"] + s["tail"]].reshape(-1) for s in spans]
    ) if spans else np.zeros((0, 3 * DIM))


def mock_sample(target: str, step: int, improve_at: int) -> str:
    """A sloppy generation early on; a clean permutation once 'trained'."""
    lines = target.split("\n")
    if step < improve_at and len(lines) > 3:
        kept = lines[:1] + lines[1:-2] + [lines[1], lines[-1]]  # drop one, repeat one
        return "\n".join(kept)
    return tb.augment_targets(target, k=1, seed=step, include_original=False)[0]


def surrogate_ce(sampled: str, target: str) -> float:
    a, b = sampled.split(), target.split()
    mismatch = sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))
    return mismatch / max(len(b), 1)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    default_data = Path(__file__).resolve().parents[2] / "fixtures" / "toy_annotations.jsonl"
    parser.add_argument("--data", default=str(default_data), help="annotation JSONL")
    parser.add_argument("--warmup-epochs", type=int, default=2)
    parser.add_argument("--spr-epochs", type=int, default=2)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "tempograph", "pipeline",
             "--in", args.data, "--out", tmp, "--merge", "--k", "0",
             "--seed", "7", "--test-fraction", "0.0"],
            check=True, capture_output=True,
        )
        rows = [json.loads(l) for l in (Path(tmp) / "train.jsonl").read_text("utf-8").splitlines()]

    steps_per_epoch = len(rows)
    schedule = tb.spr_schedule(args.warmup_epochs, args.spr_epochs, steps_per_epoch)
    improve_at = (args.warmup_epochs + 1) * steps_per_epoch  # model "gets good" mid-penalty-phase
    print(f"{len(rows)} documents/epoch; schedule segments: {schedule}")

    step = 0
    for epoch in range(args.warmup_epochs + args.spr_epochs):
        losses, penalties = [], []
        for row in rows:
            target = row["target"]
            sampled = mock_sample(target, step, improve_at)
            ce = surrogate_ce(sampled, target)
            if tb.schedule_active(schedule, step):
                hidden, spans = edge_states(tb.parse(sampled)["edges"])
                report = tb.compute_spr(
                    sampled, target, hidden, spans, embeddings_of(target),
                    mix=0.5, ce=ce, step=step,
                )
                loss = report["combined_loss"]
                penalties.append(report["spr_total"])
            else:
                loss = ce
            losses.append(loss)
            step += 1
        label = "penalties on " if tb.schedule_active(schedule, step - 1) else "warmup      "
        spr_mean = f" mean_spr={np.mean(penalties):.4f}" if penalties else ""
        print(f"epoch {epoch}: {label} mean_loss={np.mean(losses):.4f}{spr_mean}")

    print("demo complete: schedule consumed, penalties computed per step")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
