"""Codec between temporal graphs and their DOT-format target strings.

The emitted grammar is one edge statement per line:

    strict graph {
    "HEAD" -- "TAIL" [rel=LABEL];
    }

Direction is carried by the head/tail order of the undirected-looking
``--`` connector.  Inside the quoted event texts, backslashes and double
quotes are backslash-escaped and newlines become spaces.

The parser is deliberately lenient because its input is arbitrary model
output: unrecognized lines (bad syntax, unknown labels, self-loops,
empty events) are counted and skipped, never raised on.  Whitespace is
flexible on input even though emission is single-spaced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .errors import EmptyEventError, OrderMismatchError, SelfLoopError
from .graph import Edge, RelationType, TemporalGraph, normalize_event

HEADER = "strict graph {"
FOOTER = "}"

_HEADER_RE = re.compile(r"^\s*strict\s+graph\s*\{\s*$")
_FOOTER_RE = re.compile(r"^\s*\}\s*$")
_QUOTED = r'"((?:[^"\\]|\\.)*)"'
_EDGE_BODY = rf"{_QUOTED}\s*--\s*{_QUOTED}\s*\[\s*rel\s*=\s*([A-Za-z_]+)\s*\]\s*;"
_EDGE_LINE_RE = re.compile(rf"^\s*{_EDGE_BODY}\s*$")
_EDGE_SCAN_RE = re.compile(_EDGE_BODY)


def escape_event(text: str) -> str:
    """Escape an event string for embedding between double quotes."""
    text = re.sub(r"[\r\n]", " ", text)
    return text.replace("\\", "\\\\").replace('"', '\\"')


def unescape_event(text: str) -> str:
    """Undo escape_event (any backslash-escaped character)."""
    return re.sub(r"\\(.)", r"\1", text)


@dataclass(frozen=True)
class LinearizedGraph:
    """A DOT target string together with the edge order it encodes."""

    text: str
    edge_order: tuple[Edge, ...]


@dataclass(frozen=True)
class EdgeSpans:
    """Character offsets (start, end) of an edge's pieces in the parsed input.

    Offsets address the input string as-is (escaped form); mapping them
    onto model token indices is the caller's job.
    """

    head: tuple[int, int]
    rel: tuple[int, int]
    tail: tuple[int, int]


@dataclass
class ParseOutcome:
    """Every recoverable edge in textual order, plus leniency bookkeeping.

    ``edges`` keeps duplicates; ``spans[i]`` locates ``edges[i]``.
    ``used_fallback`` marks edges recovered by the whole-string scan used
    when the input has no per-line structure.
    """

    edges: list[Edge] = field(default_factory=list)
    spans: list[EdgeSpans] = field(default_factory=list)
    skipped_lines: int = 0
    used_fallback: bool = False

    def to_dict(self, include_spans: bool = True) -> dict:
        out: dict = {
            "edges": [
                {
                    "head": e.head.raw,
                    "relation": e.relation.value,
                    "tail": e.tail.raw,
                    "head_normalized": e.head.normalized,
                    "tail_normalized": e.tail.normalized,
                }
                for e in self.edges
            ],
            "skipped_lines": self.skipped_lines,
            "used_fallback": self.used_fallback,
        }
        if include_spans:
            for row, spans in zip(out["edges"], self.spans):
                row["spans"] = {
                    "head": list(spans.head),
                    "rel": list(spans.rel),
                    "tail": list(spans.tail),
                }
        return out


def edge_line(e: Edge) -> str:
    """Single edge statement in the emitted grammar."""
    head = escape_event(e.head.raw)
    tail = escape_event(e.tail.raw)
    return f'"{head}" -- "{tail}" [rel={e.relation.value}];'


def linearize(graph: TemporalGraph, order: Sequence[Edge] | None = None) -> LinearizedGraph:
    """Serialize ``graph`` with its edges in ``order`` (defaults to graph order).

    Raises OrderMismatchError unless ``order`` is a permutation of the
    graph's edge set.
    """
    if order is None:
        order = graph.edges
    if len(order) != len(graph.edges) or {e.key() for e in order} != graph.edge_keys():
        raise OrderMismatchError("order must be a permutation of the graph's edges")
    lines = [HEADER, *(edge_line(e) for e in order), FOOTER]
    return LinearizedGraph(text="\n".join(lines), edge_order=tuple(order))


def _edge_from_match(m: re.Match, offset: int) -> tuple[Edge, EdgeSpans] | None:
    try:
        rel = RelationType(m.group(3))
        head = normalize_event(unescape_event(m.group(1)))
        tail = normalize_event(unescape_event(m.group(2)))
        e = Edge(head=head, relation=rel, tail=tail)
    except (ValueError, EmptyEventError, SelfLoopError):
        return None
    spans = EdgeSpans(
        head=(offset + m.start(1), offset + m.end(1)),
        rel=(offset + m.start(3), offset + m.end(3)),
        tail=(offset + m.start(2), offset + m.end(2)),
    )
    return e, spans


def parse_edge_line(line: str, offset: int = 0) -> tuple[Edge, EdgeSpans] | None:
    """Parse one line as an edge statement, or None if it is not one."""
    m = _EDGE_LINE_RE.match(line)
    if m is None:
        return None
    return _edge_from_match(m, offset)


def parse(text: str) -> ParseOutcome:
    """Parse arbitrary model output into an edge list.  Never raises.

    A line that is blank or one of the opening/closing brace lines is
    ignored; any other line either yields exactly one edge or increments
    ``skipped_lines``.  When the line pass yields no edges at all, a
    whole-string scan recovers statements from single-line outputs and
    sets ``used_fallback``.
    """
    outcome = ParseOutcome()
    offset = 0
    for line in text.split("\n"):
        if line.strip() and not _HEADER_RE.match(line) and not _FOOTER_RE.match(line):
            parsed = parse_edge_line(line, offset)
            if parsed is None:
                outcome.skipped_lines += 1
            else:
                outcome.edges.append(parsed[0])
                outcome.spans.append(parsed[1])
        offset += len(line) + 1
    if not outcome.edges:
        for m in _EDGE_SCAN_RE.finditer(text):
            parsed = _edge_from_match(m, 0)
            if parsed is not None:
                outcome.edges.append(parsed[0])
                outcome.spans.append(parsed[1])
        if outcome.edges:
            outcome.used_fallback = True
    return outcome


def parse_graph(text: str, merged: bool = False) -> TemporalGraph:
    """Parse and collapse into a graph (duplicates dropped, leniency applied)."""
    return TemporalGraph.from_edges(parse(text).edges, merged=merged)
