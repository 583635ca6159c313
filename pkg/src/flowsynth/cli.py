"""Command-line entry point: synth, check, expand, explain.

Exit codes: 0 success; 1 infeasible/conflict; 2 input parse/validation;
3 invalid or inconsistent analysis; 4 check found misses or false alarms.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .checker import AnalysisSpec, CheckReport, check_corpus, dump_analysis, explain_rejection, load_analysis
from .cut import AUTO, EXACT, GREEDY, PATH, SEPARATION, Conflict, SolverConfig
from .dot import lattice_dot
from .errors import (
    InvalidAnalysisError,
    NotRejected,
    ParseError,
    UnknownNode,
    ValidationError,
)
from .expand import EndpointSpec, enumerate_candidate_paths, parse_static_graph
from .pipeline import SynthesisResult, synthesize
from .traces import (
    EFFECT,
    QUALIFIER,
    WARNING,
    Corpus,
    corpus_digest,
    parse_corpus,
    serialize_corpus,
    stack_traces_from_dir,
)

EXIT_OK = 0
EXIT_CONFLICT = 1
EXIT_INPUT = 2
EXIT_INVALID_ANALYSIS = 3
EXIT_CHECK_FAILED = 4

log = logging.getLogger("flowsynth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowsynth",
        description="Synthesize and apply program-specific flow analyses from trace corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthesize an analysis from a corpus")
    synth.add_argument("--corpus", type=Path, help="corpus JSON file")
    synth.add_argument("--stack-traces", type=Path, help="directory of *.neg.txt / *.pos.txt files")
    synth.add_argument("--mode", choices=[QUALIFIER, EFFECT], help="override the corpus mode")
    synth.add_argument("--semantics", choices=[SEPARATION, PATH], default=SEPARATION)
    synth.add_argument("--solver", choices=[AUTO, EXACT, GREEDY], default=AUTO)
    synth.add_argument("--max-exact-candidates", type=int, default=24, metavar="N")
    synth.add_argument("--out", type=Path, required=True, help="output directory")

    check = sub.add_parser("check", help="check a corpus against a synthesized analysis")
    check.add_argument("--analysis", type=Path, required=True)
    check.add_argument("--corpus", type=Path, required=True)
    check.add_argument("--out", type=Path, required=True, help="output directory")

    expand = sub.add_parser("expand", help="expand endpoints into candidate negative traces")
    expand.add_argument("--static-graph", type=Path, required=True)
    expand.add_argument("--source", required=True)
    expand.add_argument("--sink", required=True)
    expand.add_argument("--max-path-len", type=int, default=12, metavar="N")
    expand.add_argument("--max-paths", type=int, default=1000, metavar="N")
    expand.add_argument("--out", type=Path, required=True, help="output corpus file")

    explain = sub.add_parser("explain", help="explain why the analysis rejects a trace")
    explain.add_argument("--analysis", type=Path, required=True)
    explain.add_argument("--trace-id", required=True)
    explain.add_argument("--corpus", type=Path, required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {
        "synth": run_synth,
        "check": run_check,
        "expand": run_expand,
        "explain": run_explain,
    }
    try:
        return handlers[args.command](args)
    except (ParseError, ValidationError, UnknownNode, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidAnalysisError as exc:
        print(f"invalid analysis: {exc}", file=sys.stderr)
        return EXIT_INVALID_ANALYSIS


def _load_corpus_inputs(args) -> Corpus:
    if args.corpus is None and args.stack_traces is None:
        raise ValidationError("synth needs --corpus and/or --stack-traces")
    if args.corpus is not None:
        corpus = parse_corpus(args.corpus.read_text(encoding="utf-8"))
    else:
        corpus = Corpus(mode=args.mode or QUALIFIER)
    if args.stack_traces is not None:
        extra = stack_traces_from_dir(args.stack_traces)
        corpus = Corpus(
            mode=corpus.mode,
            traces=corpus.traces + extra,
            required_edges=corpus.required_edges,
            min_positive_support=corpus.min_positive_support,
            metadata=corpus.metadata,
        )
    if args.mode is not None and args.mode != corpus.mode:
        corpus = Corpus(
            mode=args.mode,
            traces=corpus.traces,
            required_edges=corpus.required_edges,
            min_positive_support=corpus.min_positive_support,
            metadata=corpus.metadata,
        )
    return corpus


def run_synth(args) -> int:
    corpus = _load_corpus_inputs(args)
    config = SolverConfig(solver=args.solver, max_exact_candidates=args.max_exact_candidates)
    try:
        result = synthesize(corpus, semantics=args.semantics, config=config)
    except ValidationError as exc:
        for diagnostic in getattr(exc, "diagnostics", ()):
            print(f"{diagnostic.severity}: {diagnostic.message}", file=sys.stderr)
        if not getattr(exc, "diagnostics", ()):
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(result, Conflict):
        _print_conflict(result, corpus)
        return EXIT_CONFLICT

    for diagnostic in result.diagnostics:
        if diagnostic.severity == WARNING:
            log.warning(diagnostic.message)

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    (out / "analysis.json").write_text(dump_analysis(result.spec), encoding="utf-8")
    (out / "lattice.dot").write_text(lattice_dot(result.lattice), encoding="utf-8")
    (out / "report.json").write_text(
        _report_json(result.report, corpus_digest(corpus), result.spec), encoding="utf-8"
    )
    _print_summary(result, out)

    if result.violations:
        print("internal consistency violations:", file=sys.stderr)
        for violation in result.violations:
            print(f"  {violation}", file=sys.stderr)
        return EXIT_INVALID_ANALYSIS
    return EXIT_OK


def run_check(args) -> int:
    spec = load_analysis(args.analysis.read_text(encoding="utf-8"))
    corpus = parse_corpus(args.corpus.read_text(encoding="utf-8"))
    digest = corpus_digest(corpus)
    if spec.metadata.get("corpus_sha256") not in (None, digest):
        log.warning("corpus digest does not match the one recorded in the analysis")
    report = check_corpus(spec, corpus)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "report.json").write_text(_report_json(report, digest, spec), encoding="utf-8")
    print(
        f"checked {len(report.verdicts)} trace(s): "
        f"{report.negatives_rejected} negative(s) rejected, {report.misses} miss(es), "
        f"{report.positives_accepted} positive(s) accepted, {report.false_alarms} false alarm(s)"
    )
    return EXIT_OK if report.clean else EXIT_CHECK_FAILED


def run_expand(args) -> int:
    graph = parse_static_graph(args.static_graph.read_text(encoding="utf-8"))
    spec = EndpointSpec(args.source, args.sink, args.max_path_len, args.max_paths)
    result = enumerate_candidate_paths(graph, spec)
    corpus = Corpus(
        mode=QUALIFIER,
        traces=result.traces,
        metadata={
            "origin": "static-expansion",
            "source": args.source,
            "sink": args.sink,
            "max_path_len": args.max_path_len,
            "max_paths": args.max_paths,
            "truncated": result.truncated,
        },
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(serialize_corpus(corpus), encoding="utf-8")
    note = " (truncated)" if result.truncated else ""
    print(f"wrote {len(result.traces)} candidate negative trace(s){note} to {args.out}")
    return EXIT_OK


def run_explain(args) -> int:
    spec = load_analysis(args.analysis.read_text(encoding="utf-8"))
    corpus = parse_corpus(args.corpus.read_text(encoding="utf-8"))
    matches = [trace for trace in corpus.traces if trace.id == args.trace_id]
    if not matches:
        raise ValidationError(f"trace id {args.trace_id!r} not found in corpus")
    trace = matches[0]
    try:
        explanation = explain_rejection(spec, trace)
    except NotRejected:
        print(f"trace {trace.id} is accepted; nothing to explain")
        return EXIT_OK
    src, dst = explanation.violating_edge
    print(f"trace {explanation.trace_id} rejected at edge {explanation.violation_index}: {src} -> {dst}")
    print(f"  {explanation.non_relation}")
    for edge in explanation.separating_cut_edges:
        print(f"  separated by cut edge: {edge[0]} -> {edge[1]}")
    for origin_id, nodes in explanation.origins:
        if nodes:
            print(f"  forced by constraint {origin_id}: {' -> '.join(nodes)}")
        else:
            print(f"  forced by constraint {origin_id}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Output helpers

def _print_conflict(conflict: Conflict, corpus: Corpus) -> None:
    source, sink = conflict.pair
    print(f"conflict: cannot separate {source} -> {sink}", file=sys.stderr)
    if conflict.negative_ids:
        print(f"  negative trace(s): {', '.join(conflict.negative_ids)}", file=sys.stderr)
    print(f"  protected witness path: {' -> '.join(conflict.witness)}", file=sys.stderr)
    protecting = {
        trace.id
        for trace in corpus.positives
        for edge in zip(conflict.witness, conflict.witness[1:])
        if edge in zip(trace.nodes, trace.nodes[1:])
    }
    if protecting:
        print(f"  protected by positive trace(s): {', '.join(sorted(protecting))}", file=sys.stderr)


def _print_summary(result: SynthesisResult, out: Path) -> None:
    graph = result.graph
    protected = sum(1 for edge in graph.edges.values() if edge.protected)
    cut_edges = ", ".join(f"{s} -> {d}" for s, d in sorted(result.cut.edges)) or "(none)"
    synthetic = sum(1 for element in result.lattice.elements if element.synthetic)
    report = result.report
    print(f"mode: {result.corpus.mode}")
    print(f"graph: {len(graph.nodes)} node(s), {len(graph.edges)} edge(s), {protected} protected")
    print(
        f"cut: {len(result.cut.edges)} edge(s) [{cut_edges}] "
        f"iterations={result.cut.iterations} optimal={str(result.cut.optimal).lower()}"
    )
    print(f"lattice: {len(result.lattice.elements)} element(s), {synthetic} synthetic")
    print(
        f"report: {report.negatives_rejected}/{report.negatives_rejected + report.negatives_accepted} "
        f"negative(s) rejected, "
        f"{report.positives_accepted}/{report.positives_accepted + report.positives_rejected} "
        f"positive(s) accepted"
    )
    print(f"wrote: {out / 'analysis.json'} {out / 'lattice.dot'} {out / 'report.json'}")


def _report_json(report: CheckReport, digest: str, spec: AnalysisSpec) -> str:
    verdicts = []
    for verdict in report.verdicts:
        entry: dict = {"trace_id": verdict.trace_id, "accepted": verdict.accepted}
        if not verdict.accepted:
            entry["violation"] = {
                "index": verdict.violation_index,
                "edge": list(verdict.violating_edge),
                "source_element": verdict.source_element,
                "target_element": verdict.target_element,
            }
        verdicts.append(entry)
    doc = {
        "summary": {
            "traces": len(report.verdicts),
            "negatives_rejected": report.negatives_rejected,
            "negatives_accepted": report.negatives_accepted,
            "positives_accepted": report.positives_accepted,
            "positives_rejected": report.positives_rejected,
        },
        "verdicts": verdicts,
        "corpus_sha256": digest,
        "analysis_corpus_sha256": spec.metadata.get("corpus_sha256"),
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
