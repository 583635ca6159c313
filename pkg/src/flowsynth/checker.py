"""Apply a synthesized analysis to traces: verdicts, reports, explanations.

The serialized analysis omits reflexive order pairs and implies the
transitive closure; the loader re-derives the closure and re-verifies the
order laws (and, in effect mode, bottom and least-upper-bound existence)
before any trace is checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from .errors import InvalidAnalysisError, NotRejected, ParseError
from .lattice import Element
from .traces import Corpus, Edge, Trace, trace_edges

QUALIFIER_DEFAULT = "Q_unknown"


@dataclass(frozen=True)
class AnalysisSpec:
    """The synthesized analysis as a self-contained, serializable value."""

    mode: str
    elements: tuple[Element, ...]
    relation: frozenset[tuple[str, str]]
    assignment: dict[str, str]
    cut: frozenset[Edge]
    default_element: str
    metadata: dict[str, Any] = field(default_factory=dict)

    @cached_property
    def by_name(self) -> dict[str, Element]:
        return {element.name: element for element in self.elements}

    def element_of(self, node: str) -> str:
        return self.assignment.get(node, self.default_element)

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.relation


@dataclass(frozen=True)
class Verdict:
    trace_id: str
    accepted: bool
    violation_index: int | None = None
    violating_edge: Edge | None = None
    source_element: str | None = None
    target_element: str | None = None


@dataclass(frozen=True)
class CheckReport:
    """Per-trace verdicts plus aggregate counts (misses are accepted
    negatives, false alarms are rejected positives)."""

    verdicts: tuple[Verdict, ...]
    negatives_rejected: int
    negatives_accepted: int
    positives_accepted: int
    positives_rejected: int

    @property
    def misses(self) -> int:
        return self.negatives_accepted

    @property
    def false_alarms(self) -> int:
        return self.positives_rejected

    @property
    def clean(self) -> bool:
        return self.misses == 0 and self.false_alarms == 0


def check_trace(spec: AnalysisSpec, trace: Trace) -> Verdict:
    """Accept iff every consecutive edge relates source element to target
    element; reject at the first violating edge in path order.  Unknown
    nodes map to the spec's default element."""
    for index, (src, dst) in enumerate(trace_edges(trace)):
        a = spec.element_of(src)
        b = spec.element_of(dst)
        if not spec.leq(a, b):
            return Verdict(trace.id, False, index, (src, dst), a, b)
    return Verdict(trace.id, True)


def check_corpus(spec: AnalysisSpec, corpus: Corpus) -> CheckReport:
    verdicts = tuple(check_trace(spec, trace) for trace in corpus.traces)
    neg_rej = neg_acc = pos_acc = pos_rej = 0
    for trace, verdict in zip(corpus.traces, verdicts):
        if trace.is_negative:
            if verdict.accepted:
                neg_acc += 1
            else:
                neg_rej += 1
        else:
            if verdict.accepted:
                pos_acc += 1
            else:
                pos_rej += 1
    return CheckReport(verdicts, neg_rej, neg_acc, pos_acc, pos_rej)


@dataclass(frozen=True)
class Explanation:
    """Why a trace was rejected: the violating edge, the unrelated
    elements, and the synthesis constraints that forced the separation
    (when the spec metadata recorded them)."""

    trace_id: str
    violation_index: int
    violating_edge: Edge
    source_element: str
    target_element: str
    non_relation: str
    separating_cut_edges: tuple[Edge, ...]
    origins: tuple[tuple[str, tuple[str, ...]], ...]


def explain_rejection(spec: AnalysisSpec, trace: Trace) -> Explanation:
    verdict = check_trace(spec, trace)
    if verdict.accepted:
        raise NotRejected(f"trace {trace.id} is accepted; nothing to explain")
    a = verdict.source_element
    b = verdict.target_element
    separating = tuple(
        edge
        for edge in sorted(spec.cut)
        if spec.element_of(edge[0]) == a and spec.element_of(edge[1]) == b
    )

    recorded_paths = {
        entry["id"]: tuple(entry["nodes"])
        for entry in spec.metadata.get("constraints", [])
        if isinstance(entry, dict) and "id" in entry and "nodes" in entry
    }
    origin_ids: list[str] = []
    for pair, ids in spec.metadata.get("cut_origins", []):
        if tuple(pair) in separating:
            origin_ids.extend(i for i in ids if i not in origin_ids)
    origins = tuple((oid, recorded_paths.get(oid, ())) for oid in origin_ids)

    return Explanation(
        trace_id=trace.id,
        violation_index=verdict.violation_index,
        violating_edge=verdict.violating_edge,
        source_element=a,
        target_element=b,
        non_relation=f"{a} not leq {b}",
        separating_cut_edges=separating,
        origins=origins,
    )


# ---------------------------------------------------------------------------
# Serialization

def dump_analysis(spec: AnalysisSpec) -> str:
    """Canonical analysis serialization: key-sorted JSON, reflexive order
    pairs omitted, every sequence deterministically ordered."""
    doc = {
        "mode": spec.mode,
        "elements": [
            {
                "name": element.name,
                "members": sorted(element.members),
                "synthetic": element.synthetic,
            }
            for element in sorted(spec.elements, key=lambda e: e.name)
        ],
        "leq": [list(pair) for pair in sorted(spec.relation) if pair[0] != pair[1]],
        "assignment": dict(sorted(spec.assignment.items())),
        "cut": [list(edge) for edge in sorted(spec.cut)],
        "default_element": spec.default_element,
        "metadata": spec.metadata,
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_analysis(text: str) -> AnalysisSpec:
    """Parse and law-check a serialized analysis.

    Raises ParseError for JSON syntax errors and InvalidAnalysisError for
    schema or order-law failures (the CLI maps the latter to exit 3).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise InvalidAnalysisError("analysis document must be a JSON object")
    required = {"mode", "elements", "leq", "assignment", "cut", "default_element", "metadata"}
    missing = sorted(required - set(doc))
    if missing:
        raise InvalidAnalysisError(f"analysis document missing field(s): {', '.join(missing)}")
    if doc["mode"] not in ("qualifier", "effect"):
        raise InvalidAnalysisError(f"unknown mode {doc['mode']!r}")

    elements = []
    names: set[str] = set()
    for raw in doc["elements"]:
        if not isinstance(raw, dict) or not {"name", "members", "synthetic"} <= set(raw):
            raise InvalidAnalysisError("element entries need name, members, synthetic")
        name = raw["name"]
        if name in names:
            raise InvalidAnalysisError(f"duplicate element name {name}")
        names.add(name)
        elements.append(Element(name, frozenset(raw["members"]), bool(raw["synthetic"])))

    claimed: set[str] = set()
    for element in elements:
        if not element.synthetic and not element.members:
            raise InvalidAnalysisError(f"non-synthetic element {element.name} has no members")
        overlap = element.members & claimed
        if overlap:
            raise InvalidAnalysisError(
                f"element {element.name} shares members with another element: {sorted(overlap)}"
            )
        claimed.update(element.members)

    pairs = set()
    for pair in doc["leq"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise InvalidAnalysisError("leq entries must be pairs")
        a, b = pair
        if a not in names or b not in names:
            raise InvalidAnalysisError(f"leq pair references unknown element: {pair}")
        pairs.add((a, b))
    relation = _reflexive_transitive_closure(names, pairs)
    for a, b in relation:
        if a != b and (b, a) in relation:
            raise InvalidAnalysisError(f"order is not antisymmetric: {a} and {b} are equivalent")

    assignment = doc["assignment"]
    if not isinstance(assignment, dict):
        raise InvalidAnalysisError("'assignment' must be an object")
    for node, target in assignment.items():
        if target not in names:
            raise InvalidAnalysisError(f"assignment of {node} targets unknown element {target}")
    if doc["default_element"] not in names:
        raise InvalidAnalysisError(f"default element {doc['default_element']!r} is not an element")

    cut = set()
    for pair in doc["cut"]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise InvalidAnalysisError("cut entries must be pairs")
        cut.add((pair[0], pair[1]))

    if doc["mode"] == "effect":
        _verify_semilattice(sorted(names), relation)

    if not isinstance(doc["metadata"], dict):
        raise InvalidAnalysisError("'metadata' must be an object")

    return AnalysisSpec(
        mode=doc["mode"],
        elements=tuple(sorted(elements, key=lambda e: e.name)),
        relation=relation,
        assignment=dict(assignment),
        cut=frozenset(cut),
        default_element=doc["default_element"],
        metadata=doc["metadata"],
    )


def _reflexive_transitive_closure(
    names: set[str], pairs: set[tuple[str, str]]
) -> frozenset[tuple[str, str]]:
    above: dict[str, set[str]] = {name: {name} for name in names}
    for a, b in pairs:
        above[a].add(b)
    changed = True
    while changed:
        changed = False
        for name in names:
            expanded = set(above[name])
            for upper in above[name]:
                expanded |= above[upper]
            if expanded != above[name]:
                above[name] = expanded
                changed = True
    return frozenset((a, b) for a, uppers in above.items() for b in uppers)


def _verify_semilattice(names: list[str], relation: frozenset[tuple[str, str]]) -> None:
    """Effect mode needs a bottom and a unique least upper bound for every
    pair of elements."""
    bottoms = [n for n in names if all((n, other) in relation for other in names)]
    if len(bottoms) != 1:
        raise InvalidAnalysisError(
            f"effect semilattice needs exactly one bottom element, found {len(bottoms)}"
        )
    for a in names:
        for b in names:
            uppers = [z for z in names if (a, z) in relation and (b, z) in relation]
            least = [z for z in uppers if all((z, w) in relation for w in uppers)]
            if len(least) != 1:
                raise InvalidAnalysisError(
                    f"elements {a} and {b} lack a unique least upper bound"
                )
