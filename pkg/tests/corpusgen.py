"""Random corpus generation for the oracle-comparison suites.

Corpora stay inside the acceptance bounds (<= 8 nodes, <= 16 distinct
edges, <= 6 traces) and are regenerated until they carry no error
diagnostics, so every emitted corpus is synthesizable or honestly
infeasible (conflict), never malformed.
"""

from __future__ import annotations

import random

from flowsynth import Corpus, Trace, corpus_errors, trace_edges, validate_corpus

ALPHABET = "abcdefgh"


def random_walk(rng: random.Random, alphabet: list[str], length: int) -> tuple[str, ...]:
    path = [rng.choice(alphabet)]
    while len(path) < length:
        step = rng.choice(alphabet)
        if step == path[-1]:
            continue  # self-loops never constrain anything
        path.append(step)
    return tuple(path)


def random_corpus(
    rng: random.Random,
    mode: str | None = None,
    max_nodes: int = 8,
    max_edges: int = 16,
    max_traces: int = 6,
) -> Corpus:
    while True:
        corpus = _attempt(rng, mode, max_nodes, max_edges, max_traces)
        if corpus is not None:
            return corpus


def _attempt(rng, mode, max_nodes, max_edges, max_traces) -> Corpus | None:
    alphabet = list(ALPHABET[: rng.randint(3, max_nodes)])
    traces = []
    for i in range(rng.randint(1, max_traces)):
        polarity = "positive" if rng.random() < 0.4 else "negative"
        for _ in range(20):
            path = random_walk(rng, alphabet, rng.randint(2, 5))
            if polarity == "positive" or path[0] != path[-1]:
                break
        else:
            return None
        traces.append(Trace(f"t{i}", polarity, path))
    required = frozenset()
    if rng.random() < 0.1:
        src, dst = rng.sample(alphabet, 2)
        required = frozenset({(src, dst)})
    corpus = Corpus(
        mode=mode if mode is not None else rng.choice(["qualifier", "effect"]),
        traces=tuple(traces),
        required_edges=required,
    )
    distinct = {edge for trace in corpus.traces for edge in trace_edges(trace)}
    distinct |= corpus.required_edges
    if len(distinct) > max_edges:
        return None
    if corpus_errors(validate_corpus(corpus)):
        return None
    return corpus


def add_random_negative(rng: random.Random, corpus: Corpus) -> Corpus | None:
    """The same corpus plus one fresh negative trace, or None when no
    valid extension was found."""
    alphabet = sorted({node for trace in corpus.traces for node in trace.nodes}) or ["a", "b"]
    for _ in range(30):
        path = random_walk(rng, alphabet, rng.randint(2, 5))
        if path[0] == path[-1]:
            continue
        extended = Corpus(
            mode=corpus.mode,
            traces=corpus.traces + (Trace("extra-negative", "negative", path),),
            required_edges=corpus.required_edges,
            min_positive_support=corpus.min_positive_support,
        )
        return extended
    return None
