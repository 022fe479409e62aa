from __future__ import annotations

import json
import time
from pathlib import Path

import pytest


def pytest_sessionstart(session):
    session.suite_started = time.perf_counter()

from equibench.ingest import parse_dataset, parse_submission
from equibench.registry import (
    LanguageRecord,
    LanguageRegistry,
    MetricDef,
    TaskDef,
    TaskRegistry,
    load_language_registry,
    load_task_registry,
)
from equibench.store import EventLog

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"
FIXTURES = ROOT / "fixtures"
GOLDEN = FIXTURES / "golden"
SCHEMAS = ROOT / "schemas"


def replay_corpus(corpus_path: Path, registry, tasks, log_path: Path) -> EventLog:
    """Ingest a committed corpus file through the real append pipeline."""
    log = EventLog(log_path, registry, tasks)
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            item = json.loads(line)
            record = parse_submission(item) if "submission_id" in item else parse_dataset(item)
            log.append(record)
    return log


@pytest.fixture(scope="session")
def default_registry():
    return load_language_registry(DATA / "languages.tsv")


@pytest.fixture(scope="session")
def default_tasks():
    return load_task_registry(DATA / "tasks.json")


@pytest.fixture(scope="session")
def corpus_log(default_registry, default_tasks, tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "events.jsonl"
    return replay_corpus(FIXTURES / "corpus" / "corpus.jsonl", default_registry, default_tasks, path)


@pytest.fixture(scope="session")
def figure2_registry():
    return load_language_registry(FIXTURES / "figure2" / "languages.tsv")


@pytest.fixture(scope="session")
def figure2_log(figure2_registry, default_tasks, tmp_path_factory):
    path = tmp_path_factory.mktemp("figure2") / "events.jsonl"
    return replay_corpus(FIXTURES / "figure2" / "corpus.jsonl", figure2_registry, default_tasks, path)


@pytest.fixture(scope="session")
def diachronic_log(default_tasks, tmp_path_factory):
    registry = load_language_registry(FIXTURES / "diachronic" / "languages.tsv")
    path = tmp_path_factory.mktemp("diachronic") / "events.jsonl"
    return replay_corpus(FIXTURES / "diachronic" / "corpus.jsonl", registry, default_tasks, path)


@pytest.fixture
def tiny_registry():
    return LanguageRegistry(
        [
            LanguageRecord("aaa", "Alpha", 600),
            LanguageRecord("bbb", "Beta", 400),
        ]
    )


@pytest.fixture
def tiny_tasks():
    f1 = MetricDef(name="F1", range_min=0, range_max=100, max_mode="fixed", max_value=100)
    bleu = MetricDef(name="Bleu", range_min=0, range_max=100, max_mode="empirical")
    return TaskRegistry(
        [
            TaskDef(id="tagging", category="sequence-labeling", metric=f1),
            TaskDef(id="translation", category="generation", metric=bleu, language_role="mt_source"),
        ]
    )


@pytest.fixture
def tiny_log(tiny_registry, tiny_tasks, tmp_path):
    return EventLog(tmp_path / "events.jsonl", tiny_registry, tiny_tasks)


def dataset_doc(dataset_id, task, languages, at="2023-01-01T00:00:00Z", pairs=False, **extra):
    doc = {"dataset_id": dataset_id, "task": task, "name": f"{dataset_id} name", "registered_at": at}
    if pairs:
        doc["language_pairs"] = [list(p) for p in languages]
    else:
        doc["languages"] = list(languages)
    doc.update(extra)
    return doc


def submission_doc(sub_id, task, dataset_id, language, value, metric="F1",
                   system="sys", at="2023-01-02T00:00:00Z", **extra):
    if isinstance(language, tuple):
        language = {"source": language[0], "target": language[1]}
    doc = {
        "submission_id": sub_id,
        "task": task,
        "dataset": dataset_id,
        "language": language,
        "metric": metric,
        "value": value,
        "system": system,
        "submitted_at": at,
    }
    doc.update(extra)
    return doc
