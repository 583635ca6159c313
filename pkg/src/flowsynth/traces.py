"""Trace corpora: the example format the synthesizer consumes.

A corpus bundles positive and negative examples of flows between opaque
program nodes (variable sites, methods, operations).  Two frontends feed it:
a JSON document (the canonical on-disk form) and raw JVM-style stack traces.
Stack traces are converted to node paths innermost frame first, so that an
edge (u, v) uniformly reads "u's qualifier or effect must be allowed to flow
into v's" in both qualifier and effect mode.

Polarity of raw stack-trace files comes from the filename suffix
(``*.neg.txt`` / ``*.pos.txt``), never from file content: real exception
dumps carry no polarity.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ParseError, ValidationError

Edge = tuple[str, str]

POSITIVE = "positive"
NEGATIVE = "negative"
POLARITIES = (POSITIVE, NEGATIVE)

QUALIFIER = "qualifier"
EFFECT = "effect"
MODES = (QUALIFIER, EFFECT)


def is_valid_node_id(name: object) -> bool:
    """A node id is a non-empty token with no whitespace or newlines."""
    return isinstance(name, str) and bool(name) and not any(ch.isspace() for ch in name)


@dataclass(frozen=True)
class Trace:
    """One example: an id, a polarity, and an ordered node path (>= 2 nodes)."""

    id: str
    polarity: str
    nodes: tuple[str, ...]
    origin: str | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("trace id must be a non-empty string")
        if self.polarity not in POLARITIES:
            raise ValidationError(f"trace {self.id}: unknown polarity {self.polarity!r}")
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) < 2:
            raise ValidationError(
                f"trace {self.id}: a path needs at least 2 nodes, got {len(self.nodes)}"
            )
        for node in self.nodes:
            if not is_valid_node_id(node):
                raise ValidationError(f"trace {self.id}: invalid node id {node!r}")

    @property
    def is_negative(self) -> bool:
        return self.polarity == NEGATIVE

    @property
    def is_positive(self) -> bool:
        return self.polarity == POSITIVE

    @property
    def endpoints(self) -> Edge:
        return (self.nodes[0], self.nodes[-1])


@dataclass(frozen=True)
class Corpus:
    """A set of traces plus side constraints, in one of two modes."""

    mode: str = QUALIFIER
    traces: tuple[Trace, ...] = ()
    required_edges: frozenset[Edge] = frozenset()
    min_positive_support: int = 1
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "traces", tuple(self.traces))
        seen: set[str] = set()
        for trace in self.traces:
            if trace.id in seen:
                raise ValidationError(f"duplicate trace id {trace.id}")
            seen.add(trace.id)
        edges = set()
        for pair in self.required_edges:
            src, dst = pair
            if not is_valid_node_id(src) or not is_valid_node_id(dst):
                raise ValidationError(f"required edge has invalid node id: {pair!r}")
            edges.add((src, dst))
        object.__setattr__(self, "required_edges", frozenset(edges))
        if not isinstance(self.min_positive_support, int) or isinstance(self.min_positive_support, bool):
            raise ValidationError("min_positive_support must be an integer")
        if self.min_positive_support < 1:
            raise ValidationError("min_positive_support must be >= 1")

    @property
    def negatives(self) -> tuple[Trace, ...]:
        return tuple(t for t in self.traces if t.is_negative)

    @property
    def positives(self) -> tuple[Trace, ...]:
        return tuple(t for t in self.traces if t.is_positive)


def trace_edges(trace: Trace) -> tuple[Edge, ...]:
    """Consecutive node pairs of the path, in path order (length = nodes - 1)."""
    return tuple(zip(trace.nodes, trace.nodes[1:]))


# ---------------------------------------------------------------------------
# Corpus JSON document

_CORPUS_KEYS = {"mode", "traces", "required_edges", "options", "metadata"}
_TRACE_KEYS = {"id", "polarity", "nodes", "origin"}
_OPTION_KEYS = {"min_positive_support"}


def parse_corpus(text: str) -> Corpus:
    """Parse the corpus JSON document.

    Raises ParseError (with line/column) for malformed JSON and
    ValidationError for schema violations: duplicate ids, traces shorter
    than two nodes, unknown polarity or mode, unknown fields.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ValidationError("corpus document must be a JSON object")
    unknown = sorted(set(doc) - _CORPUS_KEYS)
    if unknown:
        raise ValidationError(f"unknown corpus field(s): {', '.join(unknown)}")
    if "traces" not in doc:
        raise ValidationError("corpus document is missing 'traces'")

    raw_traces = doc["traces"]
    if not isinstance(raw_traces, list):
        raise ValidationError("'traces' must be an array")
    traces = []
    for i, entry in enumerate(raw_traces):
        if not isinstance(entry, dict):
            raise ValidationError(f"trace entry {i} must be an object")
        bad = sorted(set(entry) - _TRACE_KEYS)
        if bad:
            raise ValidationError(f"trace entry {i}: unknown field(s): {', '.join(bad)}")
        missing = sorted({"id", "polarity", "nodes"} - set(entry))
        if missing:
            raise ValidationError(f"trace entry {i}: missing field(s): {', '.join(missing)}")
        nodes = entry["nodes"]
        if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
            raise ValidationError(f"trace entry {i}: 'nodes' must be an array of strings")
        origin = entry.get("origin")
        if origin is not None and not isinstance(origin, str):
            raise ValidationError(f"trace entry {i}: 'origin' must be a string")
        traces.append(Trace(entry["id"], entry["polarity"], tuple(nodes), origin))

    required = doc.get("required_edges", [])
    if not isinstance(required, list):
        raise ValidationError("'required_edges' must be an array")
    required_edges = []
    for i, pair in enumerate(required):
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(n, str) for n in pair):
            raise ValidationError(f"required edge {i} must be a pair of strings")
        required_edges.append((pair[0], pair[1]))

    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("'options' must be an object")
    bad = sorted(set(options) - _OPTION_KEYS)
    if bad:
        raise ValidationError(f"unknown option(s): {', '.join(bad)}")
    min_support = options.get("min_positive_support", 1)

    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ValidationError("'metadata' must be an object")

    return Corpus(
        mode=doc.get("mode", QUALIFIER),
        traces=tuple(traces),
        required_edges=frozenset(required_edges),
        min_positive_support=min_support,
        metadata=metadata,
    )


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical corpus serialization: key-sorted JSON, sorted edge list,
    defaults written out, trailing newline.  parse_corpus inverts it."""
    traces = []
    for trace in corpus.traces:
        entry: dict = {"id": trace.id, "polarity": trace.polarity, "nodes": list(trace.nodes)}
        if trace.origin is not None:
            entry["origin"] = trace.origin
        traces.append(entry)
    doc: dict = {
        "mode": corpus.mode,
        "traces": traces,
        "required_edges": [list(pair) for pair in sorted(corpus.required_edges)],
        "options": {"min_positive_support": corpus.min_positive_support},
    }
    if corpus.metadata:
        doc["metadata"] = corpus.metadata
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def corpus_digest(corpus: Corpus) -> str:
    """SHA-256 of the canonical corpus serialization."""
    return hashlib.sha256(serialize_corpus(corpus).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Stack-trace document

_FRAME_RE = re.compile(r"^\s*at (?P<fqn>[^(]+)\(.*\)\s*$")
_ELISION_RE = re.compile(r"^\s*\.\.\. (?P<count>\d+) more\s*$")
_CAUSED_BY = "Caused by:"


class _Section:
    def __init__(self) -> None:
        self.frames: list[str] = []
        self.elision: int | None = None
        self.saw_header = False


def parse_stack_trace(text: str, polarity: str, trace_id: str) -> Trace:
    """Parse a JVM-style stack trace into a Trace.

    Only the final ("Caused by:" root-cause) section contributes frames; a
    trailing "... N more" line is expanded by copying the last N frames of
    the immediately enclosing section.  Frames are kept innermost first, so
    the first node is the offending operation.
    """
    sections = [_Section()]
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith(_CAUSED_BY):
            sections.append(_Section())
            continue
        section = sections[-1]
        elision = _ELISION_RE.match(line)
        if elision:
            if not section.frames:
                raise ParseError("elision line before any stack frame", line=lineno)
            if section.elision is not None:
                raise ParseError("multiple elision lines in one section", line=lineno)
            section.elision = int(elision.group("count"))
            continue
        if line.lstrip().startswith("at "):
            frame = _FRAME_RE.match(line)
            if not frame:
                raise ParseError(f"malformed frame line: {line.strip()!r}", line=lineno)
            fqn = frame.group("fqn").strip()
            if not is_valid_node_id(fqn):
                raise ParseError(f"invalid frame name {fqn!r}", line=lineno)
            if section.elision is not None:
                raise ParseError("frame line after elision line", line=lineno)
            if len(sections) == 1 and not section.saw_header:
                raise ParseError("missing header line before first frame", line=lineno)
            section.frames.append(fqn)
            continue
        section.saw_header = True

    if not sections[-1].frames:
        raise ParseError("no stack frames found")

    expanded: list[list[str]] = []
    for i, section in enumerate(sections):
        if not section.frames:
            raise ParseError(f"section {i} has no stack frames")
        frames = list(section.frames)
        if section.elision is not None:
            enclosing = expanded[i - 1] if i > 0 else []
            n = section.elision
            if n > len(enclosing):
                raise ParseError(
                    f"'... {n} more' references more frames than the enclosing section supplies"
                )
            if n:
                frames.extend(enclosing[-n:])
        expanded.append(frames)

    return Trace(trace_id, polarity, tuple(expanded[-1]))


def stack_traces_from_dir(directory: str | Path) -> tuple[Trace, ...]:
    """Read every *.neg.txt / *.pos.txt file under `directory` (sorted by
    name); the trace id is the filename with the polarity suffix removed."""
    directory = Path(directory)
    suffixes = ((".neg.txt", NEGATIVE), (".pos.txt", POSITIVE))
    traces = []
    for path in sorted(directory.iterdir()):
        for suffix, polarity in suffixes:
            if path.name.endswith(suffix):
                trace_id = path.name[: -len(suffix)]
                text = path.read_text(encoding="utf-8")
                traces.append(parse_stack_trace(text, polarity, trace_id))
                break
    return tuple(traces)


# ---------------------------------------------------------------------------
# Corpus validation

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    trace_ids: tuple[str, ...] = ()


def validate_corpus(corpus: Corpus) -> tuple[Diagnostic, ...]:
    """All corpus-level diagnostics, in a fixed order.

    Errors: a negative trace with equal endpoints (reflexivity makes the
    flow impossible to prohibit), and a negative trace that duplicates a
    prefix of a positive trace (its every edge will be protected, a
    guaranteed conflict).  Warnings: self-loop edges (never cut candidates)
    and nodes that appear only in required_edges.
    """
    diagnostics: list[Diagnostic] = []
    positives = corpus.positives
    for trace in corpus.traces:
        if trace.is_negative and trace.nodes[0] == trace.nodes[-1]:
            diagnostics.append(
                Diagnostic(
                    ERROR,
                    "negative-endpoints-equal",
                    f"negative endpoints equal: {trace.nodes[0]}",
                    (trace.id,),
                )
            )
        warned: set[Edge] = set()
        for src, dst in trace_edges(trace):
            if src == dst and (src, dst) not in warned:
                warned.add((src, dst))
                diagnostics.append(
                    Diagnostic(
                        WARNING,
                        "self-loop",
                        f"self-loop edge ({src}, {dst}) imposes no constraint",
                        (trace.id,),
                    )
                )
        if trace.is_negative:
            for positive in positives:
                if positive.nodes[: len(trace.nodes)] == trace.nodes:
                    diagnostics.append(
                        Diagnostic(
                            ERROR,
                            "positive-negative-conflict",
                            f"negative trace {trace.id} duplicates a prefix of positive trace "
                            f"{positive.id}: the flow cannot be both kept and broken",
                            (trace.id, positive.id),
                        )
                    )
    for src, dst in sorted(corpus.required_edges):
        if src == dst:
            diagnostics.append(
                Diagnostic(
                    WARNING,
                    "self-loop",
                    f"self-loop edge ({src}, {dst}) imposes no constraint",
                )
            )
    trace_nodes = {node for trace in corpus.traces for node in trace.nodes}
    required_only = sorted(
        {node for pair in corpus.required_edges for node in pair} - trace_nodes
    )
    for node in required_only:
        diagnostics.append(
            Diagnostic(
                WARNING,
                "required-edge-only-node",
                f"node {node} appears only in required_edges",
            )
        )
    return tuple(diagnostics)


def corpus_errors(diagnostics: tuple[Diagnostic, ...]) -> tuple[Diagnostic, ...]:
    return tuple(d for d in diagnostics if d.severity == ERROR)


def iter_all_edges(corpus: Corpus) -> Iterator[Edge]:
    """Every edge of every trace plus the required edges, with repeats."""
    for trace in corpus.traces:
        yield from trace_edges(trace)
    yield from sorted(corpus.required_edges)
