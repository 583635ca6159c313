"""Verdicts, reports, explanations, and analysis serialization."""

from __future__ import annotations

import json
import random

import pytest

from flowsynth import (
    Conflict,
    Corpus,
    InvalidAnalysisError,
    NotRejected,
    ParseError,
    SolverConfig,
    Trace,
    check_corpus,
    check_trace,
    dump_analysis,
    explain_rejection,
    load_analysis,
    synthesize,
)

from corpusgen import random_corpus

TAINT_CORPUS = Corpus(
    traces=(
        Trace("trusted", "positive", ("untainted", "tainted")),
        Trace("leak", "negative", ("tainted", "untainted")),
    )
)


@pytest.fixture(scope="module")
def taint_spec():
    result = synthesize(TAINT_CORPUS, config=SolverConfig(solver="exact"))
    assert not isinstance(result, Conflict)
    return result.spec


def test_untainted_flows_into_tainted(taint_spec):
    verdict = check_trace(taint_spec, Trace("probe", "positive", ("untainted", "tainted")))
    assert verdict.accepted


def test_tainted_must_not_flow_into_untainted(taint_spec):
    verdict = check_trace(taint_spec, Trace("probe", "negative", ("tainted", "untainted")))
    assert not verdict.accepted
    assert verdict.violation_index == 0
    assert verdict.violating_edge == ("tainted", "untainted")


def test_ui_effect_scenario_rejects_worker_thread():
    corpus = Corpus(
        mode="effect",
        traces=(
            Trace(
                "ui_trusted",
                "positive",
                ("android.view.View.requestLayout", "android.os.UiThread.loop"),
            ),
            Trace(
                "ui_violation",
                "negative",
                ("android.view.View.requestLayout", "com.app.Worker.run"),
            ),
        ),
    )
    result = synthesize(corpus, config=SolverConfig(solver="exact"))
    assert not isinstance(result, Conflict)
    spec = result.spec
    bad = check_trace(
        spec,
        Trace("probe", "negative", ("android.view.View.requestLayout", "com.app.Worker.run")),
    )
    assert not bad.accepted
    good = check_trace(
        spec,
        Trace("probe2", "positive", ("android.view.View.requestLayout", "android.os.UiThread.loop")),
    )
    assert good.accepted


def test_check_corpus_round_trip(taint_spec):
    report = check_corpus(taint_spec, TAINT_CORPUS)
    assert report.negatives_rejected == 1
    assert report.positives_accepted == 1
    assert report.misses == 0 and report.false_alarms == 0
    assert report.clean


def test_check_corpus_empty(taint_spec):
    report = check_corpus(taint_spec, Corpus())
    assert report.verdicts == ()
    assert (
        report.negatives_rejected
        == report.negatives_accepted
        == report.positives_accepted
        == report.positives_rejected
        == 0
    )


def test_unknown_nodes_use_default_element(taint_spec):
    verdict = check_trace(taint_spec, Trace("probe", "positive", ("mystery1", "mystery2")))
    assert verdict.accepted  # default leq default by reflexivity
    # qualifier default is maximal-and-isolated: flows out of it are rejected
    outbound = check_trace(taint_spec, Trace("probe2", "positive", ("mystery1", "tainted")))
    assert not outbound.accepted


def test_counts_sum_to_totals_on_random_corpora():
    rng = random.Random(17)
    done = 0
    while done < 25:
        corpus = random_corpus(rng)
        result = synthesize(corpus, config=SolverConfig(solver="exact"))
        if isinstance(result, Conflict):
            continue
        done += 1
        report = result.report
        assert report.negatives_rejected + report.negatives_accepted == len(corpus.negatives)
        assert report.positives_accepted + report.positives_rejected == len(corpus.positives)


# ---------------------------------------------------------------------------
# explanations

def test_explain_taint_rejection(taint_spec):
    explanation = explain_rejection(
        taint_spec, Trace("probe", "negative", ("tainted", "untainted"))
    )
    assert explanation.source_element == "Q_tainted"
    assert explanation.target_element == "Q_untainted"
    assert explanation.non_relation == "Q_tainted not leq Q_untainted"
    assert explanation.separating_cut_edges == (("tainted", "untainted"),)
    assert [origin for origin, _ in explanation.origins] == ["leak"]


def test_explain_accepted_trace_raises(taint_spec):
    with pytest.raises(NotRejected):
        explain_rejection(taint_spec, Trace("probe", "positive", ("untainted", "tainted")))


def test_explain_cites_refined_witness():
    corpus = Corpus(
        traces=(
            Trace("observed", "negative", ("a", "b", "c")),
            Trace("shortcut", "positive", ("a", "c")),
        ),
        min_positive_support=2,
    )
    result = synthesize(corpus, config=SolverConfig(solver="exact"))
    assert not isinstance(result, Conflict)
    explanation = explain_rejection(result.spec, Trace("probe", "negative", ("a", "c")))
    assert explanation.violating_edge == ("a", "c")
    origin_ids = [origin for origin, _ in explanation.origins]
    assert "refined-1" in origin_ids
    witness = dict(explanation.origins)["refined-1"]
    assert witness == ("a", "c")


# ---------------------------------------------------------------------------
# serialization

def test_dump_load_round_trip_preserves_verdicts(taint_spec):
    reloaded = load_analysis(dump_analysis(taint_spec))
    assert reloaded.relation == taint_spec.relation
    assert reloaded.assignment == taint_spec.assignment
    assert reloaded.cut == taint_spec.cut
    assert reloaded.default_element == taint_spec.default_element
    probes = [
        Trace("p1", "positive", ("untainted", "tainted")),
        Trace("p2", "negative", ("tainted", "untainted")),
        Trace("p3", "positive", ("mystery", "tainted")),
    ]
    for probe in probes:
        assert check_trace(reloaded, probe) == check_trace(taint_spec, probe)
    assert dump_analysis(reloaded) == dump_analysis(taint_spec)


def test_load_round_trip_on_random_syntheses():
    rng = random.Random(29)
    done = 0
    while done < 20:
        corpus = random_corpus(rng)
        result = synthesize(corpus, config=SolverConfig(solver="exact"))
        if isinstance(result, Conflict):
            continue
        done += 1
        reloaded = load_analysis(dump_analysis(result.spec))
        for trace in corpus.traces:
            assert check_trace(reloaded, trace) == check_trace(result.spec, trace)


def test_load_rejects_bad_json():
    with pytest.raises(ParseError):
        load_analysis("{oops")


def test_load_rejects_missing_fields():
    with pytest.raises(InvalidAnalysisError, match="missing field"):
        load_analysis("{}")


def _taint_doc(taint_spec) -> dict:
    return json.loads(dump_analysis(taint_spec))


def test_load_rejects_antisymmetry_violation(taint_spec):
    doc = _taint_doc(taint_spec)
    doc["leq"].append(["Q_tainted", "Q_untainted"])
    with pytest.raises(InvalidAnalysisError, match="antisymmetric"):
        load_analysis(json.dumps(doc))


def test_load_rejects_unknown_assignment_target(taint_spec):
    doc = _taint_doc(taint_spec)
    doc["assignment"]["tainted"] = "Q_ghost"
    with pytest.raises(InvalidAnalysisError, match="unknown element"):
        load_analysis(json.dumps(doc))


def test_load_rejects_unknown_default(taint_spec):
    doc = _taint_doc(taint_spec)
    doc["default_element"] = "Q_ghost"
    with pytest.raises(InvalidAnalysisError, match="default element"):
        load_analysis(json.dumps(doc))


def test_load_rejects_effect_spec_without_lubs():
    doc = {
        "mode": "effect",
        "elements": [
            {"name": "bot", "members": ["b"], "synthetic": False},
            {"name": "x", "members": ["x"], "synthetic": False},
            {"name": "y", "members": ["y"], "synthetic": False},
        ],
        "leq": [["bot", "x"], ["bot", "y"]],
        "assignment": {"b": "bot", "x": "x", "y": "y"},
        "cut": [],
        "default_element": "bot",
        "metadata": {},
    }
    with pytest.raises(InvalidAnalysisError, match="least upper bound"):
        load_analysis(json.dumps(doc))


def test_load_accepts_transitively_reduced_leq(taint_spec):
    # the stored relation implies its transitive closure
    doc = {
        "mode": "qualifier",
        "elements": [
            {"name": "A", "members": ["a"], "synthetic": False},
            {"name": "B", "members": ["b"], "synthetic": False},
            {"name": "C", "members": ["c"], "synthetic": False},
        ],
        "leq": [["A", "B"], ["B", "C"]],
        "assignment": {"a": "A", "b": "B", "c": "C"},
        "cut": [],
        "default_element": "A",
        "metadata": {},
    }
    spec = load_analysis(json.dumps(doc))
    assert spec.leq("A", "C")
    assert check_trace(spec, Trace("t", "positive", ("a", "c"))).accepted
