"""End-to-end synthesis: corpus -> graph -> cut -> lattice -> analysis."""

from __future__ import annotations

from dataclasses import dataclass

from . import __version__
from .checker import QUALIFIER_DEFAULT, AnalysisSpec, CheckReport, check_corpus
from .cut import (
    SEPARATION,
    Conflict,
    CutSet,
    SolverConfig,
    cut_problem_from_graph,
    solve_synthesis_cut,
)
from .errors import ValidationError
from .graph import FlowGraph, build_graph
from .lattice import (
    Element,
    EffectSemilattice,
    QualifierOrder,
    Violation,
    build_order,
    check_consistency,
    complete_join_semilattice,
)
from .traces import (
    EFFECT,
    Corpus,
    Diagnostic,
    corpus_digest,
    corpus_errors,
    validate_corpus,
)


@dataclass(frozen=True)
class SynthesisResult:
    corpus: Corpus
    diagnostics: tuple[Diagnostic, ...]
    graph: FlowGraph
    cut: CutSet
    order: QualifierOrder
    semilattice: EffectSemilattice | None
    violations: tuple[Violation, ...]
    spec: AnalysisSpec
    report: CheckReport

    @property
    def lattice(self) -> QualifierOrder:
        return self.semilattice if self.semilattice is not None else self.order


def synthesize(
    corpus: Corpus,
    semantics: str = SEPARATION,
    config: SolverConfig = SolverConfig(),
) -> SynthesisResult | Conflict:
    """Run the full pipeline.  Returns a Conflict when some negative flow
    cannot be broken; raises ValidationError (carrying the diagnostics) on
    other corpus errors."""
    diagnostics = validate_corpus(corpus)
    conflict_diags = [d for d in diagnostics if d.code == "positive-negative-conflict"]
    if conflict_diags:
        negative_id = conflict_diags[0].trace_ids[0]
        trace = next(t for t in corpus.traces if t.id == negative_id)
        return Conflict(trace.endpoints, trace.nodes, (negative_id,))
    errors = corpus_errors(diagnostics)
    if errors:
        raise ValidationError(
            "; ".join(d.message for d in errors), diagnostics=diagnostics
        )

    graph = build_graph(corpus)
    problem = cut_problem_from_graph(graph, semantics)
    outcome = solve_synthesis_cut(problem, config)
    if isinstance(outcome, Conflict):
        return outcome

    order = build_order(graph, outcome)
    semilattice = complete_join_semilattice(order) if corpus.mode == EFFECT else None
    final = semilattice if semilattice is not None else order
    violations = check_consistency(final, outcome, graph.negative_pairs)
    spec = make_analysis_spec(corpus, outcome, final, config, semantics)
    report = check_corpus(spec, corpus)
    return SynthesisResult(
        corpus=corpus,
        diagnostics=diagnostics,
        graph=graph,
        cut=outcome,
        order=order,
        semilattice=semilattice,
        violations=violations,
        spec=spec,
        report=report,
    )


def make_analysis_spec(
    corpus: Corpus,
    cut: CutSet,
    lattice: QualifierOrder,
    config: SolverConfig,
    semantics: str,
) -> AnalysisSpec:
    """Bundle the synthesized lattice and cut into a serializable spec.

    Unknown nodes default to a fresh maximal element in qualifier mode
    (conservative: related only to itself) and to bottom in effect mode.
    """
    elements = list(lattice.elements)
    relation = set(lattice.relation)
    if isinstance(lattice, EffectSemilattice):
        default = lattice.bottom
    else:
        default = QUALIFIER_DEFAULT
        taken = {element.name for element in elements}
        while default in taken:
            default += "'"
        elements.append(Element(default, frozenset(), synthetic=True))
        relation.add((default, default))

    cut_origins = []
    for edge in sorted(cut.edges):
        ids = sorted(c.id for c in cut.constraints if edge in c.cuttable)
        cut_origins.append([list(edge), ids])
    metadata = {
        "corpus_sha256": corpus_digest(corpus),
        "optimal": cut.optimal,
        "semantics": semantics,
        "tool_version": __version__,
        "solver": config.solver,
        "max_exact_candidates": config.max_exact_candidates,
        "iterations": cut.iterations,
        "constraints": [
            {"id": c.id, "nodes": list(c.nodes)} for c in cut.constraints
        ],
        "cut_origins": cut_origins,
    }
    return AnalysisSpec(
        mode=corpus.mode,
        elements=tuple(sorted(elements, key=lambda e: e.name)),
        relation=frozenset(relation),
        assignment=dict(lattice.assignment),
        cut=frozenset(cut.edges),
        default_element=default,
        metadata=metadata,
    )
