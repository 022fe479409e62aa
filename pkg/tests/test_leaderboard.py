from __future__ import annotations

import math

import pytest

from equibench import leaderboard as lb
from equibench.errors import DomainError, NotFoundError
from equibench.ingest import parse_dataset, parse_submission
from equibench.metrics import demand_weights
from equibench.registry import (
    LanguageRecord,
    LanguageRegistry,
    MetricDef,
    TaskDef,
    TaskRegistry,
)
from equibench.store import EventLog

from conftest import dataset_doc, submission_doc

NER = "named_entity_recognition"


def make_log(tmp_path, registry, tasks) -> EventLog:
    return EventLog(tmp_path / "events.jsonl", registry, tasks)


# --- best utilities -----------------------------------------------------------


def test_best_utilities_fixed_max(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 90.0)))
    utilities = lb.best_utility_per_language(tiny_log.state, "tagging")
    assert utilities == {"aaa": 0.9, "bbb": 0.0}


def test_best_utilities_empty_state(tiny_log):
    utilities = lb.best_utility_per_language(tiny_log.state, "tagging")
    assert set(utilities.values()) == {0.0}


def test_best_utilities_empirical_max(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc(
        "mt1", "translation", [("aaa", "bbb"), ("bbb", "aaa")], pairs=True)))
    tiny_log.append(parse_submission(submission_doc(
        "m1", "translation", "mt1", ("aaa", "bbb"), 32.0, metric="Bleu")))
    tiny_log.append(parse_submission(submission_doc(
        "m2", "translation", "mt1", ("bbb", "aaa"), 16.0, metric="Bleu")))
    utilities = lb.best_utility_per_language(tiny_log.state, "translation")
    assert utilities == {"aaa": 1.0, "bbb": 0.5}


def test_unknown_task_raises(tiny_log):
    with pytest.raises(NotFoundError):
        lb.best_utility_per_language(tiny_log.state, "nope")
    with pytest.raises(NotFoundError):
        lb.task_report(tiny_log.state, "nope")
    with pytest.raises(NotFoundError):
        lb.underserved_ranking(tiny_log.state, "nope")
    with pytest.raises(NotFoundError):
        lb.language_score_ranking(tiny_log.state, "nope")


# --- task report ----------------------------------------------------------------


def test_task_report_worked_example(tiny_log):
    # registry {aaa: 600, bbb: 400}; only aaa covered at u = 0.8
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 80.0)))
    report = lb.task_report(tiny_log.state, "tagging")
    assert report.demographic_avg == pytest.approx(0.48, abs=1e-12)
    assert report.linguistic_avg == pytest.approx(0.40, abs=1e-12)
    assert report.pop_coverage_pct == pytest.approx(60.0, abs=1e-12)
    assert report.gini == pytest.approx(0.5, abs=1e-12)
    assert report.covered_language_count == 1
    assert report.per_language["aaa"].utility == pytest.approx(0.8)


def test_task_report_no_submissions(tiny_log):
    report = lb.task_report(tiny_log.state, "tagging")
    assert report.demographic_avg == 0.0
    assert report.linguistic_avg == 0.0
    assert report.pop_coverage_pct == 0.0
    assert report.gini == pytest.approx(1 / 2)  # (n-1)/n with n=2
    assert report.per_language == {}


def test_task_report_perfect_world(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa", "bbb"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 100.0)))
    tiny_log.append(parse_submission(submission_doc("s2", "tagging", "d1", "bbb", 100.0)))
    report = lb.task_report(tiny_log.state, "tagging")
    assert report.demographic_avg == pytest.approx(1.0, abs=1e-12)
    assert report.linguistic_avg == pytest.approx(1.0, abs=1e-12)
    assert report.gini == 0.0
    assert report.pop_coverage_pct == pytest.approx(100.0)


def test_report_serialization_rounding(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 66.666)))
    doc = lb.task_report(tiny_log.state, "tagging").to_dict()
    assert doc["demographic_avg"] == round(0.6 * 0.66666, 4)
    assert isinstance(doc["pop_coverage_pct"], float)
    assert doc["per_language"]["aaa"]["utility"] == round(0.66666, 4)


# --- under-served ranking ---------------------------------------------------------


def test_underserved_no_coverage_orders_by_population():
    registry = LanguageRegistry([
        LanguageRecord("cmn", "Mandarin", 900_000_000),
        LanguageRecord("spa", "Spanish", 500_000_000),
        LanguageRecord("ara", "Arabic", 300_000_000),
    ])
    metric = MetricDef(name="F1", range_min=0, range_max=100, max_mode="fixed", max_value=100)
    tasks = TaskRegistry([TaskDef(id="t", category="c", metric=metric)])
    from equibench.store import BenchState

    ranking = lb.underserved_ranking(BenchState(registry, tasks), "t", limit=3)
    assert [e.code for e in ranking.entries] == ["cmn", "spa", "ara"]


def test_underserved_served_language_never_outranks_bigger_unserved(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 100.0)))
    ranking = lb.underserved_ranking(tiny_log.state, "tagging")
    assert [e.code for e in ranking.entries] == ["bbb", "aaa"]
    assert ranking.entries[1].score == 0.0


def test_underserved_tie_break_population_then_code():
    registry = LanguageRegistry([
        LanguageRecord("bbb", "B", 100),
        LanguageRecord("aaa", "A", 100),
        LanguageRecord("ccc", "C", 200),
    ])
    metric = MetricDef(name="F1", range_min=0, range_max=100, max_mode="fixed", max_value=100)
    tasks = TaskRegistry([TaskDef(id="t", category="c", metric=metric)])
    from equibench.store import BenchState

    ranking = lb.underserved_ranking(BenchState(registry, tasks), "t")
    assert [e.code for e in ranking.entries] == ["ccc", "aaa", "bbb"]


def test_underserved_limit_and_negative_tau(tiny_log):
    ranking = lb.underserved_ranking(tiny_log.state, "tagging", limit=1)
    assert len(ranking.entries) == 1
    with pytest.raises(DomainError):
        lb.underserved_ranking(tiny_log.state, "tagging", tau=-1)


def test_figure2_flip(figure2_log):
    before = figure2_log.fold(upto=11)
    after = figure2_log.state
    top_before = [e.code for e in lb.underserved_ranking(before, NER, limit=4).entries]
    top_after = [e.code for e in lb.underserved_ranking(after, NER, limit=4).entries]
    assert top_before[:2] == ["ldd", "laa"]
    assert top_after[0] == "laa"


# --- language score ranking ----------------------------------------------------


def test_language_score_ranking_orders_by_value(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa", "bbb"])))
    tiny_log.append(parse_submission(submission_doc("p2", "tagging", "d1", "aaa", 71.0,
                                                    system="early-sys", at="2023-01-02T00:00:00Z")))
    tiny_log.append(parse_submission(submission_doc("p1", "tagging", "d1", "aaa", 84.0,
                                                    system="strong-sys", at="2023-01-03T00:00:00Z")))
    tiny_log.append(parse_submission(submission_doc("p3", "tagging", "d1", "bbb", 71.0,
                                                    system="other-sys", at="2023-01-04T00:00:00Z")))
    rows = lb.language_score_ranking(tiny_log.state, "tagging")
    assert [(r.code, r.best_value) for r in rows] == [("aaa", 84.0), ("bbb", 71.0)]
    assert rows[0].system == "strong-sys"


def test_language_score_ranking_singleton_and_empty(tiny_log):
    assert lb.language_score_ranking(tiny_log.state, "tagging") == []
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 50.0)))
    rows = lb.language_score_ranking(tiny_log.state, "tagging")
    assert len(rows) == 1 and rows[0].code == "aaa"


def test_language_score_tie_earliest_seq_first(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa", "bbb"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "bbb", 64.0,
                                                    at="2023-01-02T00:00:00Z")))
    tiny_log.append(parse_submission(submission_doc("s2", "tagging", "d1", "aaa", 64.0,
                                                    at="2023-01-03T00:00:00Z")))
    rows = lb.language_score_ranking(tiny_log.state, "tagging")
    assert [r.code for r in rows] == ["bbb", "aaa"]


# --- attribution -----------------------------------------------------------------


def quarter_registry():
    # weights at tau=1: aaa -> 0.25
    return LanguageRegistry([
        LanguageRecord("aaa", "A", 250),
        LanguageRecord("bbb", "B", 750),
    ])


def test_attribute_first_submission_credits_system_and_dataset(tmp_path, tiny_tasks):
    log = make_log(tmp_path, quarter_registry(), tiny_tasks)
    log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 50.0,
                                               system="pioneer")))
    by_tau = {(c.beneficiary_kind, c.tau): c.delta
              for c in log.state.credits if c.event_seq == 2}
    assert by_tau[("system", 1.0)] == pytest.approx(0.125, abs=1e-12)
    assert by_tau[("dataset", 1.0)] == pytest.approx(0.125, abs=1e-12)
    assert by_tau[("system", 0.0)] == pytest.approx(0.25, abs=1e-12)


def test_attribute_equal_resubmission_is_zero(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 80.0)))
    tiny_log.append(parse_submission(submission_doc("s2", "tagging", "d1", "aaa", 80.0,
                                                    system="latecomer")))
    deltas = [c.delta for c in tiny_log.state.credits if c.event_seq == 3]
    assert deltas == [0.0, 0.0, 0.0]


def test_attribute_dataset_registration_zero_delta(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    entries = [c for c in tiny_log.state.credits if c.event_seq == 1]
    assert len(entries) == 3
    assert all(c.beneficiary_kind == "dataset" and c.delta == 0.0 for c in entries)


def test_attribute_empirical_max_full_recompute(tiny_log):
    # Raising the task's empirical max deflates the other language's utility;
    # the raising event's delta carries that side effect.
    tiny_log.append(parse_dataset(dataset_doc(
        "mt1", "translation", [("aaa", "bbb"), ("bbb", "aaa")], pairs=True)))
    tiny_log.append(parse_submission(submission_doc(
        "m1", "translation", "mt1", ("aaa", "bbb"), 16.0, metric="Bleu")))
    tiny_log.append(parse_submission(submission_doc(
        "m2", "translation", "mt1", ("bbb", "aaa"), 8.0, metric="Bleu")))
    tiny_log.append(parse_submission(submission_doc(
        "m3", "translation", "mt1", ("bbb", "aaa"), 32.0, metric="Bleu", system="sota")))
    # before m3: u(aaa)=1.0, u(bbb)=0.5; after: u(aaa)=0.5, u(bbb)=1.0
    w = demand_weights({"aaa": 600, "bbb": 400}, 1.0).weights
    expected = (w["aaa"] * (0.5 - 1.0)) + (w["bbb"] * (1.0 - 0.5))
    got = [c.delta for c in tiny_log.state.credits
           if c.event_seq == 4 and c.tau == 1.0 and c.beneficiary_kind == "system"]
    assert got[0] == pytest.approx(expected, abs=1e-12)


def test_ledger_conservation_on_fixed_max_task(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa", "bbb"])))
    for i, (code, value) in enumerate([("aaa", 30), ("bbb", 60), ("aaa", 75), ("bbb", 55)]):
        tiny_log.append(parse_submission(submission_doc(
            f"s{i}", "tagging", "d1", code, value, at=f"2023-01-{i + 2:02d}T00:00:00Z")))
    for tau in lb.LEDGER_TAUS:
        total = math.fsum(c.delta for c in tiny_log.state.credits
                          if c.tau == tau and c.beneficiary_kind == "system"
                          and c.task_id == "tagging")
        report = lb.task_report(tiny_log.state, "tagging")
        final = report.demographic_avg if tau == 1.0 else (
            report.linguistic_avg if tau == 0.0 else None)
        if final is not None:
            assert total == pytest.approx(final, abs=1e-9)


# --- contribution leaderboard ------------------------------------------------------


def test_contribution_single_system(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 40.0,
                                                    system="only-sys")))
    rows = lb.contribution_leaderboard(tiny_log.state, "tagging", 1.0, "system")
    assert rows[0].beneficiary_id == "only-sys"
    assert rows[0].total == pytest.approx(0.6 * 0.4, abs=1e-12)


def test_contribution_figure2_dataset_board(figure2_log):
    rows = lb.contribution_leaderboard(figure2_log.state, NER, 0.4, "dataset")
    assert rows[0].beneficiary_id == "ner-ldd-corpus"


def test_contribution_disjoint_systems_order(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa", "bbb"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 90.0,
                                                    system="sys-big")))
    tiny_log.append(parse_submission(submission_doc("s2", "tagging", "d1", "bbb", 40.0,
                                                    system="sys-small")))
    rows = lb.contribution_leaderboard(tiny_log.state, "tagging", 1.0, "system")
    assert [r.beneficiary_id for r in rows] == ["sys-big", "sys-small"]
    assert rows[0].total == pytest.approx(0.6 * 0.9, abs=1e-12)
    assert rows[1].total == pytest.approx(0.4 * 0.4, abs=1e-12)


def test_contribution_unsupported_tau(tiny_log):
    with pytest.raises(DomainError):
        lb.contribution_leaderboard(tiny_log.state, "tagging", 0.7, "system")
    with pytest.raises(DomainError):
        lb.contribution_leaderboard(tiny_log.state, "tagging", 0.4, "committee")


# --- diachronic series ---------------------------------------------------------------


def test_diachronic_empty_log(tiny_log):
    assert lb.diachronic_series(tiny_log, "tagging", 1.0) == []


def test_diachronic_last_point_matches_report(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 80.0)))
    tiny_log.append(parse_submission(submission_doc("s2", "tagging", "d1", "aaa", 90.0,
                                                    at="2023-01-03T00:00:00Z")))
    series = lb.diachronic_series(tiny_log, "tagging", 1.0)
    report = lb.task_report(tiny_log.state, "tagging")
    assert series[-1].value == pytest.approx(report.demographic_avg, abs=1e-12)
    assert len(series) == 3


def test_diachronic_monotone_under_fixed_max(diachronic_log):
    for tau in (0.0, 1.0):
        series = lb.diachronic_series(diachronic_log, NER, tau)
        values = [p.value for p in series]
        assert all(b >= a for a, b in zip(values, values[1:]))


def test_diachronic_rejects_other_taus(tiny_log):
    with pytest.raises(DomainError):
        lb.diachronic_series(tiny_log, "tagging", 0.4)


# --- what-if ---------------------------------------------------------------------------


def test_what_if_below_current_is_noop(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 80.0)))
    result = lb.what_if(tiny_log.state, "tagging", "aaa", 0.5)
    assert all(d == 0.0 for d in result.delta_m.values())
    baseline = lb.underserved_ranking(tiny_log.state, "tagging")
    ranked = [e.code for e in baseline.entries]
    assert result.new_rank_of_language == ranked.index("aaa") + 1
    assert result.displaced_top3 == []


def test_what_if_idempotent_at_current_utility(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 80.0)))
    result = lb.what_if(tiny_log.state, "tagging", "aaa", 0.8)
    assert all(d == 0.0 for d in result.delta_m.values())


def test_what_if_uncovered_language_to_perfect(tiny_log):
    result = lb.what_if(tiny_log.state, "tagging", "aaa", 1.0)
    assert result.delta_m[1.0] == pytest.approx(0.6, abs=1e-12)
    # aaa's score becomes 0, so it ranks below the still-unserved bbb
    assert result.new_rank_of_language == 2


def test_what_if_validation(tiny_log):
    with pytest.raises(DomainError):
        lb.what_if(tiny_log.state, "tagging", "aaa", 1.2)
    with pytest.raises(NotFoundError):
        lb.what_if(tiny_log.state, "tagging", "zzz", 0.5)
    with pytest.raises(NotFoundError):
        lb.what_if(tiny_log.state, "nope", "aaa", 0.5)


def test_what_if_figure2_projection_matches_real_event(figure2_log):
    # Project the enabling language's submission on the state just before it
    # and compare with the ranking the real event produced.
    before = figure2_log.fold(upto=12)
    after = figure2_log.state
    projected = lb.what_if(before, NER, "ldd", 0.75)
    ranking_before = [e.code for e in lb.underserved_ranking(before, NER).entries]
    real_ranking = [e.code for e in lb.underserved_ranking(after, NER).entries]
    assert projected.new_rank_of_language == real_ranking.index("ldd") + 1
    real_report = lb.task_report(after, NER)
    before_report = lb.task_report(before, NER)
    assert projected.delta_m[1.0] == pytest.approx(
        real_report.demographic_avg - before_report.demographic_avg, abs=1e-12)
    real_displaced = [c for c in ranking_before[:3] if c not in real_ranking[:3]]
    assert projected.displaced_top3 == real_displaced


def test_what_if_leaves_state_unmodified(tiny_log):
    tiny_log.append(parse_dataset(dataset_doc("d1", "tagging", ["aaa"])))
    tiny_log.append(parse_submission(submission_doc("s1", "tagging", "d1", "aaa", 50.0)))
    before = tiny_log.state.to_dict()
    lb.what_if(tiny_log.state, "tagging", "bbb", 1.0)
    assert tiny_log.state.to_dict() == before


# --- replay equivalence -------------------------------------------------------------


def test_incremental_state_equals_scratch_fold(figure2_log):
    assert figure2_log.state == figure2_log.fold()
    incremental = lb.task_report(figure2_log.state, NER).to_dict()
    scratch = lb.task_report(figure2_log.fold(), NER).to_dict()
    assert incremental == scratch
