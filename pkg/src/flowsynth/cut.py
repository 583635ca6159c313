"""Minimum-cut synthesis over negative flows.

Each negative path contributes a hitting-set constraint over its cuttable
edges (self-loops and protected edges excluded).  Under the default
separation semantics the returned cut must leave every negative trace's
sink unreachable from its source, not merely break the observed paths, so
constraints are generated lazily: solve the hitting set over the current
constraints, look for a still-connected negative pair, add its witness
path as a new constraint, and re-solve.  Ties between minimum cuts are
always broken toward the lexicographically smallest sorted edge list, so
identical inputs produce identical cuts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .errors import InfeasibleSet, RefinementLimitError
from .graph import FlowGraph, shortest_path
from .traces import Edge

log = logging.getLogger(__name__)

PATH = "path"
SEPARATION = "separation"
SEMANTICS = (PATH, SEPARATION)

EXACT = "exact"
GREEDY = "greedy"
AUTO = "auto"


@dataclass(frozen=True)
class SolverConfig:
    solver: str = AUTO
    max_exact_candidates: int = 24
    max_iterations: int = 10_000


@dataclass(frozen=True)
class PathConstraint:
    """One negative path to hit: its id, node path, and cuttable edges."""

    id: str
    nodes: tuple[str, ...]
    cuttable: frozenset[Edge]


@dataclass(frozen=True)
class CutProblem:
    graph: FlowGraph
    constraint_paths: tuple[PathConstraint, ...]
    forbidden: frozenset[Edge]
    semantics: str = SEPARATION

    def __post_init__(self):
        if self.semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {self.semantics!r}")


@dataclass(frozen=True)
class CutSet:
    """The synthesized prohibited edges plus the constraint system that
    justified them."""

    edges: frozenset[Edge]
    iterations: int
    optimal: bool
    constraints: tuple[PathConstraint, ...] = ()


@dataclass(frozen=True)
class Conflict:
    """A negative pair that cannot be separated: the witness path consists
    entirely of protected or self-loop edges."""

    pair: Edge
    witness: tuple[str, ...]
    negative_ids: tuple[str, ...] = ()


def path_cuttable_edges(graph: FlowGraph, nodes: Sequence[str]) -> frozenset[Edge]:
    """Cuttable edges along a node path that exists in the graph."""
    return frozenset(
        edge
        for edge in zip(nodes, nodes[1:])
        if edge in graph.edges and graph.edges[edge].cuttable
    )


def cut_problem_from_graph(graph: FlowGraph, semantics: str = SEPARATION) -> CutProblem:
    constraints = tuple(
        PathConstraint(trace_id, nodes, path_cuttable_edges(graph, nodes))
        for trace_id, nodes in graph.negative_paths
    )
    forbidden = frozenset(key for key, edge in graph.edges.items() if not edge.cuttable)
    return CutProblem(graph, constraints, forbidden, semantics)


# ---------------------------------------------------------------------------
# Hitting set

def min_hitting_set_exact(
    sets: Sequence[frozenset[Edge]], forbidden: frozenset[Edge] = frozenset()
) -> frozenset[Edge]:
    """Minimum-cardinality set hitting every input set, disjoint from
    `forbidden`; among minima, the lexicographically smallest sorted edge
    list.  Branch and bound: branch on the smallest uncovered set, prune
    with the incumbent and a disjoint-set packing lower bound."""
    reduced = _reduce_sets(sets, forbidden)
    best: list[tuple[Edge, ...] | None] = [None]

    def packing_bound(uncovered: list[frozenset[Edge]]) -> int:
        count = 0
        used: set[Edge] = set()
        for candidate in sorted(uncovered, key=lambda s: (len(s), sorted(s))):
            if not candidate & used:
                count += 1
                used.update(candidate)
        return count

    def search(chosen: set[Edge], banned: frozenset[Edge], remaining: list[frozenset[Edge]]):
        uncovered = [s for s in remaining if not s & chosen]
        if not uncovered:
            candidate = tuple(sorted(chosen))
            incumbent = best[0]
            if incumbent is None or (len(candidate), candidate) < (len(incumbent), incumbent):
                best[0] = candidate
            return
        effective = []
        for constraint in uncovered:
            allowed = constraint - banned
            if not allowed:
                return  # dead branch: this constraint can no longer be hit
            effective.append(allowed)
        incumbent = best[0]
        if incumbent is not None and len(chosen) + packing_bound(effective) > len(incumbent):
            return
        branch_set = min(effective, key=lambda s: (len(s), sorted(s)))
        tried: set[Edge] = set()
        for edge in sorted(branch_set):
            search(chosen | {edge}, banned | frozenset(tried), uncovered)
            tried.add(edge)

    search(set(), frozenset(), reduced)
    assert best[0] is not None  # every reduced set is non-empty
    return frozenset(best[0])


def min_hitting_set_greedy(
    sets: Sequence[frozenset[Edge]], forbidden: frozenset[Edge] = frozenset()
) -> frozenset[Edge]:
    """Greedy cover: repeatedly pick the allowed edge hitting the most
    uncovered sets (ties lexicographic).  Feasible, not necessarily
    minimum."""
    reduced = _reduce_sets(sets, forbidden)
    chosen: set[Edge] = set()
    uncovered = [s for s in reduced if not s & chosen]
    while uncovered:
        counts: dict[Edge, int] = {}
        for constraint in uncovered:
            for edge in constraint:
                counts[edge] = counts.get(edge, 0) + 1
        pick = min(counts, key=lambda e: (-counts[e], e))
        chosen.add(pick)
        uncovered = [s for s in uncovered if pick not in s]
    return frozenset(chosen)


def _reduce_sets(
    sets: Sequence[frozenset[Edge]], forbidden: frozenset[Edge]
) -> list[frozenset[Edge]]:
    reduced = []
    for index, constraint in enumerate(sets):
        allowed = frozenset(constraint) - forbidden
        if not allowed:
            raise InfeasibleSet(index)
        reduced.append(allowed)
    return reduced


# ---------------------------------------------------------------------------
# Separation checking and the refinement loop

def verify_separation(
    graph: FlowGraph, cut: frozenset[Edge], negative_pairs: Sequence[Edge]
) -> tuple[tuple[Edge, tuple[str, ...]], ...]:
    """For every negative pair still connected after the cut, one witness
    path (breadth-first shortest, lexicographic).  Empty means separated."""
    leftover = []
    for source, sink in negative_pairs:
        witness = shortest_path(graph, source, sink, excluded=cut)
        if witness is not None:
            leftover.append(((source, sink), witness))
    return tuple(leftover)


def solve_synthesis_cut(problem: CutProblem, config: SolverConfig = SolverConfig()):
    """Compute the minimum cut for the problem, or a Conflict.

    Path semantics hits the observed negative paths once.  Separation
    semantics (default) runs the lazy refinement loop until every negative
    pair is separated; `iterations` counts hitting-set solves.  `optimal`
    is True iff the exact solver produced the final solve.
    """
    constraints = list(problem.constraint_paths)
    for constraint in constraints:
        if not constraint.cuttable:
            return _conflict(problem.graph, (constraint.nodes[0], constraint.nodes[-1]), constraint.nodes)

    iterations = 0
    refined = 0
    warned_greedy = False
    while True:
        iterations += 1
        if iterations > config.max_iterations:
            raise RefinementLimitError(
                f"refinement did not terminate within {config.max_iterations} iterations"
            )
        sets = [c.cuttable for c in constraints]
        candidates = {edge for s in sets for edge in s}
        if config.solver == EXACT:
            use_exact = True
        elif config.solver == GREEDY:
            use_exact = False
        elif config.solver == AUTO:
            use_exact = len(candidates) <= config.max_exact_candidates
            if not use_exact and not warned_greedy:
                warned_greedy = True
                log.warning(
                    "%d candidate edges exceed max_exact_candidates=%d; "
                    "falling back to the greedy solver (cut may not be minimum)",
                    len(candidates),
                    config.max_exact_candidates,
                )
        else:
            raise ValueError(f"unknown solver {config.solver!r}")
        solve = min_hitting_set_exact if use_exact else min_hitting_set_greedy
        cut = solve(sets, problem.forbidden) if sets else frozenset()

        if problem.semantics == PATH:
            return CutSet(cut, iterations, use_exact, tuple(constraints))

        leftover = verify_separation(problem.graph, cut, problem.graph.negative_pairs)
        if not leftover:
            return CutSet(cut, iterations, use_exact, tuple(constraints))
        for pair, witness in leftover:
            cuttable = path_cuttable_edges(problem.graph, witness)
            if not cuttable:
                return _conflict(problem.graph, pair, witness)
            refined += 1
            constraints.append(PathConstraint(f"refined-{refined}", witness, cuttable))


def _conflict(graph: FlowGraph, pair: Edge, witness: tuple[str, ...]) -> Conflict:
    negative_ids = tuple(
        trace_id
        for trace_id, nodes in graph.negative_paths
        if (nodes[0], nodes[-1]) == pair
    )
    return Conflict(pair, witness, negative_ids)
