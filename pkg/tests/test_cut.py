"""Hitting sets, separation verification, and the lazy refinement loop."""

from __future__ import annotations

import random

import pytest

from flowsynth import (
    Conflict,
    Corpus,
    CutSet,
    InfeasibleSet,
    SolverConfig,
    Trace,
    build_graph,
    cut_problem_from_graph,
    min_hitting_set_exact,
    min_hitting_set_greedy,
    solve_synthesis_cut,
    verify_separation,
)

from corpusgen import random_corpus
from oracles import brute_min_hitting_set, brute_min_separation_cut

E1, E2, E3 = ("a", "b"), ("b", "c"), ("c", "d")


def solve_corpus(corpus, semantics="separation", solver="exact"):
    graph = build_graph(corpus)
    problem = cut_problem_from_graph(graph, semantics)
    return graph, solve_synthesis_cut(problem, SolverConfig(solver=solver))


# ---------------------------------------------------------------------------
# hitting sets

def test_exact_singletons_force_both():
    sets = [frozenset({E1}), frozenset({E2})]
    assert min_hitting_set_exact(sets) == {E1, E2}
    assert min_hitting_set_exact(sets) == brute_min_hitting_set(sets)


def test_exact_shared_edge_wins():
    sets = [frozenset({E1, E2}), frozenset({E2, E3})]
    assert min_hitting_set_exact(sets) == {E2}
    assert min_hitting_set_exact(sets) == brute_min_hitting_set(sets)


def test_exact_respects_forbidden():
    sets = [frozenset({E1, E2}), frozenset({E2, E3})]
    forbidden = frozenset({E2})
    assert min_hitting_set_exact(sets, forbidden) == {E1, E3}
    assert min_hitting_set_exact(sets, forbidden) == brute_min_hitting_set(sets, forbidden)


def test_exact_infeasible_set_index():
    with pytest.raises(InfeasibleSet) as excinfo:
        min_hitting_set_exact([frozenset({E1}), frozenset({E2})], forbidden=frozenset({E2}))
    assert excinfo.value.index == 1


def test_greedy_examples():
    assert min_hitting_set_greedy([frozenset({E1}), frozenset({E2})]) == {E1, E2}
    assert min_hitting_set_greedy([frozenset({E1, E2}), frozenset({E2, E3})]) == {E2}
    triangle = [frozenset({E1, E2}), frozenset({E1, E3}), frozenset({E2, E3})]
    assert min_hitting_set_greedy(triangle) == {E1, E2}
    assert len(brute_min_hitting_set(triangle)) == 2


def test_exact_matches_oracle_on_random_families():
    rng = random.Random(11)
    universe = [(chr(97 + i), chr(97 + j)) for i in range(4) for j in range(4) if i != j]
    for _ in range(120):
        n_sets = rng.randint(1, 5)
        sets = [
            frozenset(rng.sample(universe, rng.randint(1, 4)))
            for _ in range(n_sets)
        ]
        forbidden = frozenset(rng.sample(universe, rng.randint(0, 2)))
        expected = brute_min_hitting_set(sets, forbidden)
        if expected is None:
            with pytest.raises(InfeasibleSet):
                min_hitting_set_exact(sets, forbidden)
            continue
        actual = min_hitting_set_exact(sets, forbidden)
        assert actual == expected  # size and lexicographic tie-break
        greedy = min_hitting_set_greedy(sets, forbidden)
        assert all(s & greedy for s in sets)
        assert len(greedy) >= len(actual)


# ---------------------------------------------------------------------------
# separation verification

def test_verify_separation_examples():
    graph = build_graph(Corpus(traces=(Trace("n", "negative", ("a", "b", "c")),)))
    assert verify_separation(graph, frozenset({("b", "c")}), [("a", "c")]) == ()

    graph2 = build_graph(
        Corpus(
            traces=(
                Trace("n", "negative", ("a", "b", "c")),
                Trace("m", "negative", ("a", "c")),
            )
        )
    )
    leftover = verify_separation(graph2, frozenset({("a", "b")}), [("a", "c")])
    assert leftover == ((("a", "c"), ("a", "c")),)

    # vacuous separation: no path at all
    graph3 = build_graph(
        Corpus(
            traces=(
                Trace("n", "negative", ("a", "b")),
                Trace("m", "positive", ("c", "d")),
            )
        )
    )
    assert verify_separation(graph3, frozenset(), [("a", "d")]) == ()


# ---------------------------------------------------------------------------
# the solver

def test_protected_edge_forces_the_cut():
    corpus = Corpus(
        traces=(
            Trace("pos", "positive", ("a", "b")),
            Trace("neg", "negative", ("a", "b", "c")),
        )
    )
    _, cut = solve_corpus(corpus)
    assert isinstance(cut, CutSet)
    assert cut.edges == {("b", "c")}
    assert cut.iterations == 1
    assert cut.optimal


def test_lazy_refinement_three_node_instance():
    # edges a->b, b->c (negative path) and a->c (unprotected shortcut)
    corpus = Corpus(
        traces=(
            Trace("observed", "negative", ("a", "b", "c")),
            Trace("shortcut", "positive", ("a", "c")),
        ),
        min_positive_support=2,
    )
    graph, cut = solve_corpus(corpus)
    assert isinstance(cut, CutSet)
    assert cut.iterations == 2
    assert cut.edges == {("a", "b"), ("a", "c")}
    assert [c.id for c in cut.constraints] == ["observed", "refined-1"]

    oracle = brute_min_separation_cut(
        set(graph.edges), graph.cuttable_edges(), graph.negative_pairs
    )
    assert oracle == cut.edges


def test_fully_protected_path_is_a_conflict():
    corpus = Corpus(
        traces=(
            Trace("ok", "positive", ("a", "b")),
            Trace("bad", "negative", ("a", "c", "b")),
        )
    )
    _, outcome = solve_corpus(corpus)
    assert isinstance(outcome, Conflict)
    assert outcome.pair == ("a", "b")
    assert outcome.witness == ("a", "b")
    assert outcome.negative_ids == ("bad",)


def test_conflict_on_directly_protected_negative_path():
    # constructed problem, bypassing corpus validation: the negative path
    # itself is fully protected
    corpus = Corpus(
        traces=(
            Trace("ok", "positive", ("a", "b")),
            Trace("bad", "negative", ("x", "a", "b")),
        ),
        required_edges=frozenset({("x", "a")}),
    )
    _, outcome = solve_corpus(corpus)
    assert isinstance(outcome, Conflict)
    assert outcome.pair == ("x", "b")
    assert outcome.witness == ("x", "a", "b")


def test_diamond_cut_lex_tie_break():
    corpus = Corpus(
        traces=(
            Trace("left", "negative", ("a", "b", "d")),
            Trace("right", "negative", ("a", "c", "d")),
        )
    )
    graph, cut = solve_corpus(corpus)
    assert cut.edges == {("a", "b"), ("a", "c")}
    oracle = brute_min_separation_cut(
        set(graph.edges), graph.cuttable_edges(), graph.negative_pairs
    )
    assert len(oracle) == 2 and oracle == cut.edges


def test_path_semantics_hits_observed_paths_only():
    corpus = Corpus(
        traces=(
            Trace("observed", "negative", ("a", "b", "c")),
            Trace("shortcut", "positive", ("a", "c")),
        ),
        min_positive_support=2,
    )
    graph = build_graph(corpus)
    problem = cut_problem_from_graph(graph, "path")
    cut = solve_synthesis_cut(problem, SolverConfig(solver="exact"))
    assert cut.edges == {("a", "b")}
    assert cut.iterations == 1
    # the a->c shortcut is untouched, so the endpoints are not separated
    assert verify_separation(graph, cut.edges, graph.negative_pairs) != ()


def test_solver_determinism():
    rng = random.Random(23)
    for _ in range(20):
        corpus = random_corpus(rng)
        graph = build_graph(corpus)
        problem = cut_problem_from_graph(graph)
        first = solve_synthesis_cut(problem, SolverConfig(solver="exact"))
        second = solve_synthesis_cut(problem, SolverConfig(solver="exact"))
        assert first == second


def test_separation_postcondition_and_greedy_feasibility():
    rng = random.Random(31)
    for _ in range(60):
        corpus = random_corpus(rng)
        graph = build_graph(corpus)
        problem = cut_problem_from_graph(graph)
        exact = solve_synthesis_cut(problem, SolverConfig(solver="exact"))
        greedy = solve_synthesis_cut(problem, SolverConfig(solver="greedy"))
        if isinstance(exact, Conflict):
            assert isinstance(greedy, Conflict)
            continue
        assert verify_separation(graph, exact.edges, graph.negative_pairs) == ()
        assert isinstance(greedy, CutSet)
        assert verify_separation(graph, greedy.edges, graph.negative_pairs) == ()
        assert len(greedy.edges) >= len(exact.edges)
        assert not greedy.optimal or greedy.edges == exact.edges


def test_refinement_ceiling_fails_loudly():
    from flowsynth import RefinementLimitError

    corpus = Corpus(
        traces=(
            Trace("observed", "negative", ("a", "b", "c")),
            Trace("shortcut", "positive", ("a", "c")),
        ),
        min_positive_support=2,
    )
    graph = build_graph(corpus)
    problem = cut_problem_from_graph(graph)
    with pytest.raises(RefinementLimitError):
        solve_synthesis_cut(problem, SolverConfig(solver="exact", max_iterations=1))
    # the default ceiling is far above what this instance needs
    assert solve_synthesis_cut(problem, SolverConfig(solver="exact")).iterations == 2


def test_auto_policy_uses_exact_within_budget():
    corpus = Corpus(traces=(Trace("n", "negative", ("a", "b", "c")),))
    graph = build_graph(corpus)
    problem = cut_problem_from_graph(graph)
    auto = solve_synthesis_cut(problem, SolverConfig(solver="auto", max_exact_candidates=24))
    assert auto.optimal
    forced_greedy = solve_synthesis_cut(
        problem, SolverConfig(solver="auto", max_exact_candidates=1)
    )
    assert not forced_greedy.optimal
