"""Filling in scarce examples from a static callgraph.

When too few dynamic traces exist, developer-chosen endpoints are expanded
into every simple source-to-sink path of the callgraph; each path becomes
a candidate negative trace (marked origin="static-expansion").  The demo
expands a diamond-shaped graph, feeds the candidates straight into
synthesis, and shows the cut that breaks both routes.

Run with:  python3 demos/callgraph_expansion.py
"""

from flowsynth import (
    Corpus,
    EndpointSpec,
    StaticGraph,
    enumerate_candidate_paths,
    serialize_corpus,
    synthesize,
)

callgraph = StaticGraph(
    nodes=frozenset({"handler", "parse", "render", "database"}),
    edges=frozenset(
        {
            ("handler", "parse"),
            ("handler", "render"),
            ("parse", "database"),
            ("render", "database"),
        }
    ),
)

expansion = enumerate_candidate_paths(callgraph, EndpointSpec("handler", "database"))

print("== candidate bad paths from handler to database ==")
for trace in expansion.traces:
    print(f"  {trace.id}: {' -> '.join(trace.nodes)}")
print(f"  truncated: {expansion.truncated}")

corpus = Corpus(mode="qualifier", traces=expansion.traces)
print("\n== expanded corpus document ==")
print(serialize_corpus(corpus))

result = synthesize(corpus)
print("== synthesized cut over the hypothesized negatives ==")
for src, dst in sorted(result.cut.edges):
    print(f"  prohibited flow: {src} -> {dst}")
print(
    f"  ({result.cut.iterations} solver iteration(s); "
    f"every candidate path is broken and the endpoints are fully separated)"
)
