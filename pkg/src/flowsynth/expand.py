"""Candidate negative paths from a static callgraph.

When observed examples are scarce, developer-chosen endpoints are expanded
into all simple directed source-to-sink paths (bounded in length and
count) and emitted as negative traces marked origin="static-expansion",
so downstream reports can tell hypothesized flows from observed ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError, UnknownNode, ValidationError
from .traces import NEGATIVE, Edge, Trace, is_valid_node_id

STATIC_EXPANSION_ORIGIN = "static-expansion"


@dataclass(frozen=True)
class StaticGraph:
    nodes: frozenset[str]
    edges: frozenset[Edge]

    def __post_init__(self):
        for node in self.nodes:
            if not is_valid_node_id(node):
                raise ValidationError(f"invalid node id {node!r}")
        for src, dst in self.edges:
            if src not in self.nodes or dst not in self.nodes:
                raise ValidationError(f"edge ({src}, {dst}) references unknown node")


@dataclass(frozen=True)
class EndpointSpec:
    """A source/sink pair to expand; max_path_len bounds the number of
    nodes on a path."""

    source: str
    sink: str
    max_path_len: int = 12
    max_paths: int = 1000

    def __post_init__(self):
        if self.source == self.sink:
            raise ValidationError("source and sink must differ")
        if self.max_path_len < 2:
            raise ValidationError("max_path_len must be >= 2")
        if self.max_paths < 1:
            raise ValidationError("max_paths must be >= 1")


@dataclass(frozen=True)
class ExpansionResult:
    traces: tuple[Trace, ...]
    truncated: bool


def parse_static_graph(text: str) -> StaticGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict) or not {"nodes", "edges"} <= set(doc):
        raise ValidationError("static graph document needs 'nodes' and 'edges'")
    nodes = doc["nodes"]
    edges = doc["edges"]
    if not isinstance(nodes, list) or not all(isinstance(n, str) for n in nodes):
        raise ValidationError("'nodes' must be an array of strings")
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(n, str) for n in e) for e in edges
    ):
        raise ValidationError("'edges' must be an array of [src, dst] pairs")
    return StaticGraph(frozenset(nodes), frozenset((e[0], e[1]) for e in edges))


def enumerate_candidate_paths(graph: StaticGraph, spec: EndpointSpec) -> ExpansionResult:
    """All simple directed source-to-sink paths with at most max_path_len
    nodes, in depth-first lexicographic order, truncated at max_paths.
    The truncated flag is set iff more paths exist than were returned."""
    if spec.source not in graph.nodes:
        raise UnknownNode(spec.source)
    if spec.sink not in graph.nodes:
        raise UnknownNode(spec.sink)

    adjacency = {
        node: tuple(sorted(dst for src, dst in graph.edges if src == node))
        for node in graph.nodes
    }

    paths: list[tuple[str, ...]] = []
    truncated = False
    on_path = {spec.source}
    path = [spec.source]

    def descend(node: str) -> bool:
        """Returns False once the path budget (plus the truncation probe)
        is exhausted."""
        if node == spec.sink:
            if len(paths) >= spec.max_paths:
                return False
            paths.append(tuple(path))
            return True
        if len(path) >= spec.max_path_len:
            return True
        for succ in adjacency.get(node, ()):
            if succ in on_path:
                continue
            path.append(succ)
            on_path.add(succ)
            keep_going = descend(succ)
            path.pop()
            on_path.discard(succ)
            if not keep_going:
                return False
        return True

    truncated = not descend(spec.source)
    traces = tuple(
        Trace(
            f"cand-{spec.source}-{spec.sink}-{k}",
            NEGATIVE,
            nodes,
            origin=STATIC_EXPANSION_ORIGIN,
        )
        for k, nodes in enumerate(paths)
    )
    return ExpansionResult(traces, truncated)
