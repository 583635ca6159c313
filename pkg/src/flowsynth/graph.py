"""Union flow graph over a corpus, plus the reachability and order
primitives the solver and lattice builder are written against."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import ConstructionError, CycleError, UnknownNode
from .traces import Corpus, Edge, corpus_errors, trace_edges, validate_corpus


@dataclass(frozen=True)
class FlowEdge:
    """One directed flow edge with provenance and a protection flag.

    An edge is protected when enough distinct positive traces witness it
    (at least min_positive_support, and at least one) or when it is listed
    in required_edges; protected edges are never cut candidates.
    """

    src: str
    dst: str
    witnesses: frozenset[str]
    positive_support: int
    protected: bool

    @property
    def key(self) -> Edge:
        return (self.src, self.dst)

    @property
    def is_self_loop(self) -> bool:
        return self.src == self.dst

    @property
    def cuttable(self) -> bool:
        return not self.protected and not self.is_self_loop


@dataclass(frozen=True)
class FlowGraph:
    """The union of all trace edges and required edges.

    negative_pairs are the (source, sink) endpoints of the negative traces,
    deduplicated in corpus order; negative_paths keeps each negative
    trace's full node path for constraint generation and conflict witnesses.
    """

    nodes: frozenset[str]
    edges: dict[Edge, FlowEdge]
    negative_pairs: tuple[Edge, ...]
    negative_paths: tuple[tuple[str, tuple[str, ...]], ...]
    min_positive_support: int = 1

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {node: [] for node in self.nodes}
        for src, dst in self.edges:
            out[src].append(dst)
        return {node: tuple(sorted(dsts)) for node, dsts in out.items()}

    @cached_property
    def reverse_adjacency(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {node: [] for node in self.nodes}
        for src, dst in self.edges:
            inc[dst].append(src)
        return {node: tuple(sorted(srcs)) for node, srcs in inc.items()}

    def edge_keys(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def protected_edges(self) -> frozenset[Edge]:
        return frozenset(key for key, edge in self.edges.items() if edge.protected)

    def cuttable_edges(self) -> frozenset[Edge]:
        return frozenset(key for key, edge in self.edges.items() if edge.cuttable)


def build_graph(corpus: Corpus) -> FlowGraph:
    """Union the corpus into a FlowGraph; refuses corpora with error
    diagnostics (the caller is expected to have surfaced them)."""
    errors = corpus_errors(validate_corpus(corpus))
    if errors:
        raise ConstructionError(
            "corpus has error diagnostics: " + "; ".join(d.message for d in errors)
        )
    witnesses: dict[Edge, set[str]] = {}
    positive_ids: dict[Edge, set[str]] = {}
    nodes: set[str] = set()
    for trace in corpus.traces:
        nodes.update(trace.nodes)
        for edge in set(trace_edges(trace)):
            witnesses.setdefault(edge, set()).add(trace.id)
            if trace.is_positive:
                positive_ids.setdefault(edge, set()).add(trace.id)
    for edge in corpus.required_edges:
        nodes.update(edge)
        witnesses.setdefault(edge, set())

    edges: dict[Edge, FlowEdge] = {}
    for key in sorted(witnesses):
        support = len(positive_ids.get(key, ()))
        protected = (
            support >= corpus.min_positive_support and support >= 1
        ) or key in corpus.required_edges
        edges[key] = FlowEdge(key[0], key[1], frozenset(witnesses[key]), support, protected)

    pairs: list[Edge] = []
    for trace in corpus.negatives:
        if trace.endpoints not in pairs:
            pairs.append(trace.endpoints)
    paths = tuple((trace.id, trace.nodes) for trace in corpus.negatives)
    return FlowGraph(frozenset(nodes), edges, tuple(pairs), paths, corpus.min_positive_support)


def reachable(graph: FlowGraph, start: str, excluded: frozenset[Edge] = frozenset()) -> frozenset[str]:
    """Nodes reachable from start over edges not in `excluded`; always
    contains start."""
    if start not in graph.nodes:
        raise UnknownNode(start)
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for succ in graph.adjacency[node]:
            if succ not in seen and (node, succ) not in excluded:
                seen.add(succ)
                stack.append(succ)
    return frozenset(seen)


def shortest_path(
    graph: FlowGraph, start: str, goal: str, excluded: frozenset[Edge] = frozenset()
) -> tuple[str, ...] | None:
    """Lexicographically smallest breadth-first shortest path start..goal
    avoiding `excluded`, or None when goal is unreachable."""
    if start not in graph.nodes:
        raise UnknownNode(start)
    if goal not in graph.nodes:
        raise UnknownNode(goal)
    dist_from = _bfs_distances(graph.adjacency, start, excluded, forward=True)
    if goal not in dist_from:
        return None
    dist_to = _bfs_distances(graph.reverse_adjacency, goal, excluded, forward=False)
    path = [start]
    node = start
    while node != goal:
        for succ in graph.adjacency[node]:
            if (node, succ) in excluded:
                continue
            if dist_from.get(succ) == dist_from[node] + 1 and succ in dist_to and (
                dist_to[succ] == dist_to[node] - 1
            ):
                path.append(succ)
                node = succ
                break
        else:  # pragma: no cover - dist invariants guarantee a successor
            return None
    return tuple(path)


def _bfs_distances(
    adjacency: dict[str, tuple[str, ...]],
    start: str,
    excluded: frozenset[Edge],
    forward: bool,
) -> dict[str, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for other in adjacency[node]:
            edge = (node, other) if forward else (other, node)
            if other not in dist and edge not in excluded:
                dist[other] = dist[node] + 1
                queue.append(other)
    return dist


# ---------------------------------------------------------------------------
# Condensation and transitive reduction

@dataclass(frozen=True)
class Condensation:
    """Partition into strongly connected components plus the acyclic
    quotient edges; components are ordered by smallest member."""

    components: tuple[frozenset[str], ...]
    membership: dict[str, int]
    quotient_edges: frozenset[tuple[int, int]]


def scc_condense(nodes: Iterable[str], edges: Iterable[Edge]) -> Condensation:
    """Strongly connected components (iterative Tarjan, deterministic
    traversal order) and the quotient edge set between them."""
    edge_list = sorted(set(edges))
    node_list = sorted(set(nodes) | {n for edge in edge_list for n in edge})
    adjacency: dict[str, list[str]] = {node: [] for node in node_list}
    for src, dst in edge_list:
        adjacency[src].append(dst)

    index_of: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[frozenset[str]] = []
    counter = 0

    for root in node_list:
        if root in index_of:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            node, child_index = work[-1]
            if child_index == 0:
                index_of[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            descended = False
            children = adjacency[node]
            while child_index < len(children):
                child = children[child_index]
                child_index += 1
                if child not in index_of:
                    work[-1] = (node, child_index)
                    work.append((child, 0))
                    descended = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index_of[child])
            if descended:
                continue
            work.pop()
            if low[node] == index_of[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(frozenset(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    components.sort(key=min)
    membership = {node: i for i, comp in enumerate(components) for node in comp}
    quotient = frozenset(
        (membership[src], membership[dst])
        for src, dst in edge_list
        if membership[src] != membership[dst]
    )
    return Condensation(tuple(components), membership, quotient)


def hasse_reduce(edges: Iterable[tuple]) -> frozenset[tuple]:
    """Transitive reduction of an acyclic relation: the minimal edge set
    with the same reachability.  Raises CycleError on cyclic input."""
    edge_set = set(edges)
    nodes = sorted({n for edge in edge_set for n in edge})
    adjacency = {node: sorted({d for s, d in edge_set if s == node}) for node in nodes}

    indegree = {node: 0 for node in nodes}
    for _, dst in edge_set:
        indegree[dst] += 1
    queue = deque(node for node in nodes if indegree[node] == 0)
    topo: list = []
    while queue:
        node = queue.popleft()
        topo.append(node)
        for succ in adjacency[node]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                queue.append(succ)
    if len(topo) != len(nodes):
        raise CycleError("input relation contains a cycle")

    # strict reachability, built in reverse topological order
    reach: dict[object, set] = {}
    for node in reversed(topo):
        out: set = set()
        for succ in adjacency[node]:
            out.add(succ)
            out.update(reach[succ])
        reach[node] = out

    kept = set()
    for src, dst in edge_set:
        redundant = any(
            other != dst and dst in reach[other] for other in adjacency[src]
        )
        if not redundant:
            kept.add((src, dst))
    return frozenset(kept)
