"""Command-line surface: ``toolkit <subcommand>``.

Subcommands:
  parse      DOT text file -> edges JSON
  augment    dataset JSONL -> augmented JSONL (original + k shuffles per row)
  eval       prediction vs gold JSONL -> score report JSON
  spr        penalty fixture JSON -> penalty report JSON
  efidf      annotation JSONL -> event salience TSV
  pipeline   annotation JSONL -> train/test dataset JSONL

Every run is a pure function of (inputs, flags, seed).  Exit codes:
0 success, 1 bad input or usage, 2 internal error.  ``TOOLKIT_LOG``
sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .augment import AugmentationConfig, make_augmented_set
from .corpus import (
    build_salience,
    emit_dataset,
    load_annotations,
    select_documents,
    split_train_test,
    stable_doc_seed,
    write_salience_tsv,
)
from .dot import parse, parse_graph
from .embedding import load_hidden_fixture
from .errors import ToolkitError
from .evaluate import evaluate_documents
from .graph import TemporalGraph
from .spr import SprConfig, combine_loss, compute_spr

log = logging.getLogger("toolkit")


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors, printing the grammar."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _write_json(path: str, payload) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def _read_jsonl(path: str) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for i, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ToolkitError(f"{path}:{i}: bad JSON row: {exc}") from exc
    return rows


def _row_target(row: dict, path: str) -> str:
    for field in ("target", "prediction", "output"):
        if field in row:
            return str(row[field])
    raise ToolkitError(f"{path}: row {row.get('doc_id')!r} has no target field")


def _cmd_parse(args) -> int:
    text = Path(args.in_path).read_text(encoding="utf-8")
    _write_json(args.out, parse(text).to_dict())
    return 0


def _cmd_augment(args) -> int:
    cfg = AugmentationConfig(k=args.k, seed=args.seed, include_original=True)
    rows = _read_jsonl(args.in_path)
    written = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for row in rows:
            doc_id = row.get("doc_id", "")
            row_cfg = AugmentationConfig(
                k=cfg.k,
                seed=stable_doc_seed(cfg.seed, str(doc_id)),
                include_original=cfg.include_original,
            )
            for lg in make_augmented_set(_row_target(row, args.in_path), row_cfg):
                out_row = dict(row)
                out_row["target"] = lg.text
                handle.write(json.dumps(out_row, ensure_ascii=False) + "\n")
                written += 1
    log.info("augment: wrote %d rows", written)
    return 0


def _graphs_by_doc(rows: list[dict], path: str, merge: bool) -> dict[str, TemporalGraph]:
    graphs: dict[str, TemporalGraph] = {}
    for row in rows:
        doc_id = str(row.get("doc_id", len(graphs)))
        graph = parse_graph(_row_target(row, path))
        graphs[doc_id] = graph.merge() if merge else graph
    return graphs


def _cmd_eval(args) -> int:
    pred_rows = _read_jsonl(args.in_path)
    gold_rows = _read_jsonl(args.gold)
    pred = _graphs_by_doc(pred_rows, args.in_path, args.merge)
    gold = _graphs_by_doc(gold_rows, args.gold, args.merge)
    empty = TemporalGraph(edges=(), merged=args.merge)
    pairs = [
        (doc_id, pred.get(doc_id, empty), gold_graph)
        for doc_id, gold_graph in gold.items()
    ]
    report = evaluate_documents(pairs, strict=args.strict_match)
    report["unmatched_pred_docs"] = sorted(set(pred) - set(gold))
    _write_json(args.out, report)
    return 0


def _spr_config(args) -> SprConfig:
    weights = [float(w) for w in args.weights.split(",")]
    if len(weights) != 3:
        raise ToolkitError("--weights needs exactly three comma-separated values")
    return SprConfig(
        w_dupl=weights[0],
        w_card=weights[1],
        w_match=weights[2],
        lambda_=args.lambda_,
        warmup_steps=args.warmup,
    )


def _cmd_spr(args) -> int:
    fixture = json.loads(Path(args.in_path).read_text(encoding="utf-8"))
    cfg = _spr_config(args)
    hidden, spans = load_hidden_fixture(fixture["hidden"])
    gold = parse_graph(fixture["gold"])
    report = compute_spr(
        sampled=fixture["sampled"],
        gold=gold,
        hidden=hidden,
        spans=spans,
        gold_embeddings=fixture.get("gold_embeddings", []),
        cfg=cfg,
    )
    if "ce" in fixture:
        step = int(fixture.get("step", cfg.warmup_steps))
        report.combined_loss = combine_loss(
            float(fixture["ce"]), report.spr_total, step, cfg
        )
        report.active = step >= cfg.warmup_steps
    _write_json(args.out, report.to_dict())
    return 0


def _cmd_efidf(args) -> int:
    docs, stats = load_annotations(args.in_path)
    table = build_salience(docs)
    rows = write_salience_tsv(table, args.out, threshold=args.threshold)
    log.info(
        "efidf: %d docs (%d rows skipped), %d scored pairs",
        stats.documents,
        stats.skipped_rows,
        rows,
    )
    return 0


def _cmd_pipeline(args) -> int:
    docs, ingest = load_annotations(args.in_path)
    if args.allowlist:
        allow = [
            line.strip()
            for line in Path(args.allowlist).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        allow = sorted({d for doc in docs for d in doc.descriptors})
    cap = args.cap if args.cap is not None else max(len(docs), 1)
    selected, selection = select_documents(docs, allow, cap)
    train_docs, test_docs = split_train_test(selected, args.test_fraction, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_cfg = AugmentationConfig(k=args.k, seed=args.seed, include_original=True)
    train_stats = emit_dataset(
        train_docs, out_dir / "train.jsonl", merge=args.merge,
        augment_cfg=train_cfg, order=args.order,
    )
    test_stats = emit_dataset(
        test_docs, out_dir / "test.jsonl", merge=args.merge,
        augment_cfg=None, order=args.order,
    )
    summary = {
        "documents": ingest.documents,
        "skipped_rows": ingest.skipped_rows,
        "dropped_relations": ingest.dropped_relations,
        "considered": selection.considered,
        "dropped_empty": selection.dropped_empty,
        "selected": selection.selected,
        "train_docs": train_stats.documents,
        "train_rows": train_stats.rows,
        "test_docs": test_stats.documents,
        "test_rows": test_stats.rows,
    }
    print(json.dumps(summary, ensure_ascii=False))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="toolkit",
        description="Set-based event temporal graph toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, gold=False):
        p.add_argument("--seed", type=int, default=0, help="global random seed")
        p.add_argument("--in", dest="in_path", required=True, help="input path")
        p.add_argument("--out", required=True, help="output path")
        if gold:
            p.add_argument("--gold", required=True, help="gold dataset JSONL")

    p = sub.add_parser("parse", help="DOT text -> edges JSON")
    common(p)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("augment", help="dataset JSONL -> augmented JSONL")
    common(p)
    p.add_argument("--k", type=int, default=4, help="shuffled copies per row")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("eval", help="pred vs gold JSONL -> report JSON")
    common(p, gold=True)
    p.add_argument("--merge", action="store_true", help="merge reciprocal labels first")
    p.add_argument("--strict-match", action="store_true", help="match raw strings")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("spr", help="penalty fixture JSON -> penalty report JSON")
    common(p)
    p.add_argument("--lambda", dest="lambda_", type=float, default=0.5,
                   help="penalty share of the combined loss")
    p.add_argument("--weights", default="1,1,1",
                   help="w_dupl,w_card,w_match weights")
    p.add_argument("--warmup", type=int, default=0, help="warmup steps")
    p.set_defaults(func=_cmd_spr)

    p = sub.add_parser("efidf", help="annotation JSONL -> salience TSV")
    common(p)
    p.add_argument("--threshold", type=float, default=None,
                   help="emit only scores >= threshold")
    p.set_defaults(func=_cmd_efidf)

    p = sub.add_parser("pipeline", help="annotation JSONL -> train/test JSONL")
    common(p)
    p.add_argument("--merge", action="store_true", help="merge reciprocal labels")
    p.add_argument("--k", type=int, default=4, help="shuffled copies per train row")
    p.add_argument("--order", choices=("appearance", "random"), default="appearance",
                   help="target edge order")
    p.add_argument("--allowlist", default=None,
                   help="file of allowed descriptors, one per line (default: all)")
    p.add_argument("--cap", type=int, default=None,
                   help="max documents per descriptor (default: unlimited)")
    p.add_argument("--test-fraction", type=float, default=0.1,
                   help="share of documents held out for test")
    p.set_defaults(func=_cmd_pipeline)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("TOOLKIT_LOG", "WARNING").upper())
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ToolkitError, OSError, KeyError, json.JSONDecodeError) as exc:
        log.error("input error: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("internal error")
        sys.stderr.write(f"internal error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
