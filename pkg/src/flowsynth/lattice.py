"""Qualifier orders and effect semilattices over a cut flow graph.

Elements are the strongly connected components of the retained graph (all
edges minus the cut); the order is reachability between components, so a
retained edge (u, v) always yields assignment(u) <= assignment(v) and a
separating cut guarantees the rejected flows stay underivable.

Effect mode completes the order to a join semilattice by representing each
element as the down-set of component elements at or below it: joins are
down-set unions, a bottom (the pure, empty effect) is always added, and
missing unions become synthetic elements named after their maximal
generators ("A∨B").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .cut import CutSet
from .errors import UnknownElement
from .graph import FlowGraph, scc_condense
from .traces import Edge

BOTTOM_NAME = "⊥"

EQUAL = "equal"
LESS = "less"
GREATER = "greater"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Element:
    """A qualifier or effect: a named cluster of nodes.  Synthetic elements
    (joins, bottom, the unknown default) own no nodes."""

    name: str
    members: frozenset[str]
    synthetic: bool = False


@dataclass(frozen=True)
class QualifierOrder:
    """Elements, their partial order (stored as the full reflexive
    transitive relation over names), and the node assignment."""

    elements: tuple[Element, ...]
    relation: frozenset[tuple[str, str]]
    assignment: dict[str, str]

    @cached_property
    def by_name(self) -> dict[str, Element]:
        return {element.name: element for element in self.elements}

    def element(self, name: str) -> Element:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownElement(name) from None

    def leq(self, a: str, b: str) -> bool:
        self.element(a)
        self.element(b)
        return (a, b) in self.relation

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(element.name for element in self.elements)


@dataclass(frozen=True)
class EffectSemilattice(QualifierOrder):
    """A QualifierOrder closed under binary joins, with a bottom element.

    downsets maps each element name to the set of non-synthetic generator
    names at or below it; joins are unions of these sets.
    """

    bottom: str = BOTTOM_NAME
    downsets: dict[str, frozenset[str]] = field(default_factory=dict)

    @cached_property
    def by_downset(self) -> dict[frozenset[str], str]:
        return {downset: name for name, downset in self.downsets.items()}


def cut_edge_set(cut) -> frozenset[Edge]:
    return cut.edges if isinstance(cut, CutSet) else frozenset(cut)


def build_order(graph: FlowGraph, cut) -> QualifierOrder:
    """Condense the retained graph into elements and take the reachability
    order on the condensation.  Element names: "Q_" + smallest member."""
    cut_edges = cut_edge_set(cut)
    retained = [edge for edge in graph.edge_keys() if edge not in cut_edges]
    condensation = scc_condense(graph.nodes, retained)

    names = ["Q_" + min(component) for component in condensation.components]
    elements = tuple(
        sorted(
            (Element(names[i], component) for i, component in enumerate(condensation.components)),
            key=lambda element: element.name,
        )
    )
    assignment = {node: names[index] for node, index in condensation.membership.items()}

    successors: dict[int, set[int]] = {i: set() for i in range(len(names))}
    for src, dst in condensation.quotient_edges:
        successors[src].add(dst)
    relation = set()
    for start in range(len(names)):
        seen = {start}
        stack = [start]
        while stack:
            current = stack.pop()
            for nxt in successors[current]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        relation.update((names[start], names[other]) for other in seen)
    return QualifierOrder(elements, frozenset(relation), assignment)


# ---------------------------------------------------------------------------
# Consistency against the cut

CUT_EDGE_STILL_RELATED = "cut-edge-still-related"
CUT_EDGE_MERGED = "cut-edge-merged"
NEGATIVE_PAIR_RELATED = "negative-pair-related"


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: Edge
    elements: tuple[str, str]

    def __str__(self) -> str:
        src, dst = self.subject
        a, b = self.elements
        if self.kind == CUT_EDGE_MERGED:
            return f"cut edge ({src}, {dst}): endpoints merged into one cluster {a}"
        what = "cut edge" if self.kind == CUT_EDGE_STILL_RELATED else "negative pair"
        return f"{what} ({src}, {dst}): {a} leq {b} still holds"


def check_consistency(order: QualifierOrder, cut, negative_pairs) -> tuple[Violation, ...]:
    """Violations of the separation the cut was supposed to achieve: cut
    edges whose endpoints ended up related (or merged), and negative pairs
    whose endpoints ended up related.  Empty means consistent."""
    violations = []
    for src, dst in sorted(cut_edge_set(cut)):
        a = order.assignment[src]
        b = order.assignment[dst]
        if a == b:
            violations.append(Violation(CUT_EDGE_MERGED, (src, dst), (a, b)))
        elif order.leq(a, b):
            violations.append(Violation(CUT_EDGE_STILL_RELATED, (src, dst), (a, b)))
    for source, sink in negative_pairs:
        a = order.assignment[source]
        b = order.assignment[sink]
        if order.leq(a, b):
            violations.append(Violation(NEGATIVE_PAIR_RELATED, (source, sink), (a, b)))
    return tuple(violations)


# ---------------------------------------------------------------------------
# Join-semilattice completion

def complete_join_semilattice(order: QualifierOrder) -> EffectSemilattice:
    """Close the order under binary joins via generator down-sets.

    Every original element maps to the set of generators below it; the
    closure adds the empty set (bottom) and all pairwise unions.  Original
    elements embed order-faithfully: x leq y iff downset(x) is a subset of
    downset(y).
    """
    generators = [element for element in order.elements if not element.synthetic]
    downset_of = {
        g.name: frozenset(h.name for h in generators if order.leq(h.name, g.name))
        for g in generators
    }

    closed: set[frozenset[str]] = {frozenset()} | set(downset_of.values())
    changed = True
    while changed:
        changed = False
        for a, b in combinations(sorted(closed, key=sorted), 2):
            union = a | b
            if union not in closed:
                closed.add(union)
                changed = True

    taken = {g.name for g in generators}
    name_for: dict[frozenset[str], str] = {downset: name for name, downset in downset_of.items()}
    members_of = {g.name: g.members for g in generators}
    for downset in sorted(closed, key=lambda s: (len(s), sorted(s))):
        if downset in name_for:
            continue
        if not downset:
            name = BOTTOM_NAME
        else:
            maximal = sorted(
                g for g in downset
                if not any(h != g and g in downset_of[h] for h in downset)
            )
            name = "∨".join(maximal)
        while name in taken:
            name += "'"
        taken.add(name)
        name_for[downset] = name

    elements = tuple(
        sorted(
            (
                Element(name, members_of.get(name, frozenset()), name not in members_of)
                for name in name_for.values()
            ),
            key=lambda element: element.name,
        )
    )
    relation = frozenset(
        (name_for[a], name_for[b]) for a in closed for b in closed if a <= b
    )
    downsets = {name: downset for downset, name in name_for.items()}
    return EffectSemilattice(
        elements=elements,
        relation=relation,
        assignment=dict(order.assignment),
        bottom=name_for[frozenset()],
        downsets=downsets,
    )


def order_query(lattice: QualifierOrder, a: str, b: str) -> str:
    """Classify two elements as equal, less, greater, or incomparable."""
    forward = lattice.leq(a, b)
    backward = lattice.leq(b, a)
    if forward and backward:
        return EQUAL
    if forward:
        return LESS
    if backward:
        return GREATER
    return INCOMPARABLE


def join(lattice: EffectSemilattice, a: str, b: str) -> Element:
    """Least upper bound in the completed semilattice."""
    lattice.element(a)
    lattice.element(b)
    union = lattice.downsets[a] | lattice.downsets[b]
    return lattice.element(lattice.by_downset[union])
