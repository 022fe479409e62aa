"""Per-task aggregation over a folded state.

Best-per-language selection, report cards, under-served rankings, the credit
attribution ledger, diachronic series, and what-if projections. Everything
here is pure over an immutable BenchState.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime

from equibench.errors import DomainError, NotFoundError
from equibench.metrics import (
    demand_weights,
    gini,
    gini_degenerate_max,
    global_metric_sparse,
    population_coverage,
    underserved_scores,
    utility,
)
from equibench.records import (
    CreditEntry,
    DatasetReg,
    PerformanceRecord,
    format_timestamp,
)
from equibench.store import BenchState, apply_event

# Deltas are attributed at exactly these tau values; rankings default to 0.4
# as the balance point between demographic and linguistic demand.
LEDGER_TAUS = (0.0, 0.4, 1.0)
RANKING_TAU = 0.4


@dataclass(frozen=True)
class PerLanguageBest:
    best_value: float
    utility: float
    system: str
    dataset_id: str


@dataclass(frozen=True)
class TaskReport:
    """Table-row view of one task: global averages, equity, coverage, bests."""

    task_id: str
    demographic_avg: float  # M at tau=1
    linguistic_avg: float  # M at tau=0
    gini: float
    pop_coverage_pct: float
    covered_language_count: int
    per_language: dict  # code -> PerLanguageBest

    def to_dict(self) -> dict:
        return {
            "task": self.task_id,
            "demographic_avg": round(self.demographic_avg, 4),
            "linguistic_avg": round(self.linguistic_avg, 4),
            "gini": round(self.gini, 4),
            "pop_coverage_pct": round(self.pop_coverage_pct, 2),
            "covered_language_count": self.covered_language_count,
            "per_language": {
                code: {
                    "best_value": entry.best_value,
                    "utility": round(entry.utility, 4),
                    "system": entry.system,
                    "dataset": entry.dataset_id,
                }
                for code, entry in sorted(self.per_language.items())
            },
        }


@dataclass(frozen=True)
class UnderservedEntry:
    code: str
    population: int
    utility: float
    score: float


@dataclass(frozen=True)
class UnderservedRanking:
    task_id: str
    tau: float
    entries: list

    def to_dict(self) -> dict:
        return {
            "task": self.task_id,
            "tau": self.tau,
            "entries": [
                {
                    "code": e.code,
                    "population": e.population,
                    "utility": round(e.utility, 4),
                    "score": round(e.score, 8),
                }
                for e in self.entries
            ],
        }


@dataclass(frozen=True)
class LanguageScore:
    code: str
    best_value: float
    system: str

    def to_dict(self) -> dict:
        return {"code": self.code, "best_value": self.best_value, "system": self.system}


@dataclass(frozen=True)
class ContributionRow:
    beneficiary_id: str
    kind: str
    tau: float
    total: float
    events: int

    def to_dict(self) -> dict:
        return {
            "beneficiary": self.beneficiary_id,
            "kind": self.kind,
            "tau": self.tau,
            "total": round(self.total, 8),
            "events": self.events,
        }


@dataclass(frozen=True)
class DiachronicPoint:
    at: datetime
    value: float

    def to_dict(self) -> dict:
        return {"at": format_timestamp(self.at), "value": round(self.value, 4)}


@dataclass(frozen=True)
class WhatIfResult:
    task_id: str
    code: str
    hypothetical_utility: float
    delta_m: dict  # tau -> delta
    new_rank_of_language: int
    displaced_top3: list

    def to_dict(self) -> dict:
        return {
            "task": self.task_id,
            "language": self.code,
            "utility": self.hypothetical_utility,
            "delta_m": {_tau_key(tau): round(d, 8) for tau, d in self.delta_m.items()},
            "new_rank_of_language": self.new_rank_of_language,
            "displaced_top3": list(self.displaced_top3),
        }


def _tau_key(tau: float) -> str:
    return f"{tau:g}"


def _theoretical_max(task, task_state) -> float | None:
    if task.metric.max_mode == "fixed":
        return task.metric.max_value
    return task_state.empirical_max


def covered_utilities(state: BenchState, task_id: str) -> dict:
    """Utility of the best record for each covered language (sparse map)."""
    task = state.tasks.get(task_id)
    ts = state.task_state(task.id)
    tmax = _theoretical_max(task, ts)
    if tmax is None or not ts.best:
        return {}
    return {key: utility(rec.value, tmax) for key, rec in ts.best.items()}


def best_utility_per_language(state: BenchState, task_id: str) -> dict:
    """Utilities over the full registry; languages without submissions score 0."""
    covered = covered_utilities(state, task_id)
    utilities = dict.fromkeys(state.registry.codes, 0.0)
    utilities.update(covered)
    return utilities


def task_report(state: BenchState, task_id: str) -> TaskReport:
    task = state.tasks.get(task_id)
    ts = state.task_state(task.id)
    covered = covered_utilities(state, task.id)
    registry = state.registry
    n = len(registry)

    demographic = global_metric_sparse(covered, registry.demand_weights(1.0))
    linguistic = global_metric_sparse(covered, registry.demand_weights(0.0))

    values = [covered.get(code, 0.0) for code in registry.codes]
    try:
        gini_value = gini(values).gini
    except DomainError:
        # No measurable submissions at all: support is maximally concentrated.
        gini_value = gini_degenerate_max(n)

    coverage = population_coverage(ts.covered, registry)
    per_language = {
        key: PerLanguageBest(
            best_value=rec.value,
            utility=covered[key],
            system=rec.system,
            dataset_id=rec.dataset_id,
        )
        for key, rec in ts.best.items()
    }
    return TaskReport(
        task_id=task.id,
        demographic_avg=demographic,
        linguistic_avg=linguistic,
        gini=gini_value,
        pop_coverage_pct=coverage,
        covered_language_count=len(ts.best),
        per_language=per_language,
    )


def all_task_reports(state: BenchState) -> list:
    """Reports for every task with at least one submission, in registry order."""
    return [
        task_report(state, task.id)
        for task in state.tasks
        if state.task_state(task.id).submission_count > 0
    ]


def _ranked_codes(state, scores) -> list:
    pops = state.registry.populations()
    return sorted(scores, key=lambda c: (-scores[c], -pops[c], c))


def underserved_ranking(
    state: BenchState, task_id: str, tau: float = RANKING_TAU, limit: int | None = None
) -> UnderservedRanking:
    """Languages ranked most to least under-served for one task.

    Score is the demand weight times the utility shortfall; ties break by
    population descending, then code ascending.
    """
    if tau < 0:
        raise DomainError(f"tau must be non-negative, got {tau}")
    task = state.tasks.get(task_id)
    utilities = best_utility_per_language(state, task.id)
    scores = underserved_scores(utilities, state.registry.populations(), tau)
    ordered = _ranked_codes(state, scores)
    if limit is not None:
        ordered = ordered[: max(limit, 0)]
    pops = state.registry.populations()
    entries = [
        UnderservedEntry(code=c, population=pops[c], utility=utilities[c], score=scores[c])
        for c in ordered
    ]
    return UnderservedRanking(task_id=task.id, tau=tau, entries=entries)


def language_score_ranking(state: BenchState, task_id: str) -> list:
    """Covered languages sorted by best raw value, earliest submission first on ties."""
    task = state.tasks.get(task_id)
    ts = state.task_state(task.id)
    ranked = sorted(ts.best.items(), key=lambda item: (-item[1].value, item[1].seq))
    return [
        LanguageScore(code=key, best_value=rec.value, system=rec.system) for key, rec in ranked
    ]


def attribute_delta(state_before: BenchState, event) -> list:
    """Credit the change in the global metric caused by one event.

    Deltas are computed at each ledger tau with denominators recomputed under
    the task's max mode, so under an empirical max the side effects of a
    denominator-raising event fold into that event's own net delta. The
    submitting system is always credited; the referenced dataset is
    co-credited when the event first covers its (task, language).
    """
    payload = event.payload
    task_id = payload.task_id
    task = state_before.tasks.get(task_id)
    before = covered_utilities(state_before, task_id)

    after_state = state_before.copy()
    apply_event(after_state, event)
    after = covered_utilities(after_state, task_id)

    registry = state_before.registry
    deltas = {}
    for tau in LEDGER_TAUS:
        weights = registry.demand_weights(tau)
        deltas[tau] = global_metric_sparse(after, weights) - global_metric_sparse(before, weights)

    entries = []
    if isinstance(payload, DatasetReg):
        for tau in LEDGER_TAUS:
            entries.append(
                CreditEntry(
                    event_seq=event.seq,
                    beneficiary_kind="dataset",
                    beneficiary_id=payload.dataset_id,
                    task_id=task_id,
                    tau=tau,
                    delta=deltas[tau],
                    at=event.at,
                )
            )
        return entries

    rec: PerformanceRecord = payload
    key = task.derive_language_key(rec.language)
    first_for_language = key not in state_before.task_state(task_id).best
    for tau in LEDGER_TAUS:
        entries.append(
            CreditEntry(
                event_seq=event.seq,
                beneficiary_kind="system",
                beneficiary_id=rec.system,
                task_id=task_id,
                tau=tau,
                delta=deltas[tau],
                at=event.at,
            )
        )
    if first_for_language:
        for tau in LEDGER_TAUS:
            entries.append(
                CreditEntry(
                    event_seq=event.seq,
                    beneficiary_kind="dataset",
                    beneficiary_id=rec.dataset_id,
                    task_id=task_id,
                    tau=tau,
                    delta=deltas[tau],
                    at=event.at,
                )
            )
    return entries


def contribution_leaderboard(
    state: BenchState, task_id: str, tau: float = RANKING_TAU, kind: str = "system"
) -> list:
    """Credit totals grouped by beneficiary, largest total first."""
    if tau not in LEDGER_TAUS:
        raise DomainError(f"tau {tau} not in ledger; attributed taus are {LEDGER_TAUS}")
    if kind not in ("system", "dataset"):
        raise DomainError(f"kind must be 'system' or 'dataset', got {kind!r}")
    task = state.tasks.get(task_id)
    grouped: dict[str, list] = {}
    counts: dict[str, int] = {}
    for entry in state.credits:
        if entry.task_id != task.id or entry.tau != tau or entry.beneficiary_kind != kind:
            continue
        grouped.setdefault(entry.beneficiary_id, []).append(entry.delta)
        counts[entry.beneficiary_id] = counts.get(entry.beneficiary_id, 0) + 1
    rows = [
        ContributionRow(
            beneficiary_id=bid, kind=kind, tau=tau, total=math.fsum(ds), events=counts[bid]
        )
        for bid, ds in grouped.items()
    ]
    rows.sort(key=lambda r: (-r.total, r.beneficiary_id))
    return rows


def diachronic_series(log, task_id: str, tau: float) -> list:
    """Global metric recomputed at every event touching the task, over time.

    Values follow the canonical seq-order fold; points are ordered for
    display by (at, seq).
    """
    if tau not in (0.0, 1.0):
        raise DomainError(f"diachronic tau must be 0 or 1, got {tau}")
    events = getattr(log, "events", log)
    registry = getattr(log, "registry", None)
    tasks = getattr(log, "tasks", None)
    if registry is None or tasks is None:
        raise TypeError("diachronic_series needs an EventLog")
    task = tasks.get(task_id)
    weights = registry.demand_weights(tau)

    state = BenchState(registry, tasks)
    points = []
    for event in events:
        apply_event(state, event)
        if event.payload.task_id == task.id:
            value = global_metric_sparse(covered_utilities(state, task.id), weights)
            points.append((event.at, event.seq, value))
    points.sort(key=lambda p: (p[0], p[1]))
    return [DiachronicPoint(at=at, value=value) for at, _seq, value in points]


def what_if(
    state: BenchState,
    task_id: str,
    code: str,
    hypothetical_utility: float,
    taus=LEDGER_TAUS,
) -> WhatIfResult:
    """Pure projection: how the boards move if a language reached a given utility.

    The projected utility is max(current, hypothetical); the state itself is
    never modified. The reported rank is the language's position on the
    under-served ranking at the default ranking tau.
    """
    if not (0.0 <= hypothetical_utility <= 1.0):
        raise DomainError(f"utility must be in [0, 1], got {hypothetical_utility}")
    task = state.tasks.get(task_id)
    registry = state.registry
    if code not in registry:
        raise NotFoundError("language", code)

    covered = covered_utilities(state, task.id)
    current = covered.get(code, 0.0)
    projected_u = max(current, hypothetical_utility)
    projected = dict(covered)
    projected[code] = projected_u

    delta_m = {}
    for tau in taus:
        weights = registry.demand_weights(tau)
        delta_m[tau] = global_metric_sparse(projected, weights) - global_metric_sparse(
            covered, weights
        )

    pops = registry.populations()
    full_before = dict.fromkeys(registry.codes, 0.0)
    full_before.update(covered)
    full_after = dict(full_before)
    full_after[code] = projected_u
    scores_before = underserved_scores(full_before, pops, RANKING_TAU)
    scores_after = underserved_scores(full_after, pops, RANKING_TAU)
    ranked_before = _ranked_codes(state, scores_before)
    ranked_after = _ranked_codes(state, scores_after)
    new_rank = ranked_after.index(code) + 1
    top3_before = ranked_before[:3]
    top3_after = ranked_after[:3]
    displaced = [c for c in top3_before if c not in top3_after]

    return WhatIfResult(
        task_id=task.id,
        code=code,
        hypothetical_utility=hypothetical_utility,
        delta_m=delta_m,
        new_rank_of_language=new_rank,
        displaced_top3=displaced,
    )
