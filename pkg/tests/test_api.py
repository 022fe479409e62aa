from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

from equibench import leaderboard as lb
from equibench.api import STATE_VERSION_HEADER, create_app
from equibench.store import EventLog

from conftest import FIXTURES, SCHEMAS, dataset_doc, replay_corpus, submission_doc


def load_schema(name: str) -> Draft202012Validator:
    with open(SCHEMAS / name, encoding="utf-8") as fh:
        return Draft202012Validator(json.load(fh))


@pytest.fixture
def client(figure2_registry, default_tasks, tmp_path):
    log = replay_corpus(FIXTURES / "figure2" / "corpus.jsonl", figure2_registry,
                        default_tasks, tmp_path / "events.jsonl")
    app = create_app(log)
    with TestClient(app) as client:
        client.log = log
        yield client


def test_tasks_lists_default_registry(client):
    body = client.get("/tasks").json()
    assert len(body) == 17
    by_id = {t["id"]: t for t in body}
    assert by_id["named_entity_recognition"]["submission_count"] == 4
    assert by_id["machine_translation"]["submission_count"] == 4
    assert by_id["named_entity_recognition"]["covered_language_count"] == 4
    assert by_id["kg_prediction"]["submission_count"] == 0
    # counts cross-check against a from-scratch fold
    fold = client.log.fold()
    for task in body:
        assert task["submission_count"] == fold.task_state(task["id"]).submission_count


def test_report_mirrors_leaderboard(client):
    body = client.get("/tasks/named_entity_recognition/report").json()
    expected = lb.task_report(client.log.state, "named_entity_recognition").to_dict()
    assert body == expected


def test_underserved_defaults_to_tau_04(client):
    body = client.get("/tasks/named_entity_recognition/underserved").json()
    assert body["tau"] == 0.4
    explicit = client.get("/tasks/named_entity_recognition/underserved?tau=0.4").json()
    assert body == explicit


def test_underserved_respects_limit(client):
    body = client.get("/tasks/named_entity_recognition/underserved?limit=2").json()
    assert len(body["entries"]) == 2


def test_whatif_matches_module(client):
    body = client.get("/whatif?task=named_entity_recognition&language=lcc&utility=0.9").json()
    expected = lb.what_if(client.log.state, "named_entity_recognition", "lcc", 0.9).to_dict()
    assert body == expected


def test_whatif_utility_out_of_range_is_422(client):
    resp = client.get("/whatif?task=named_entity_recognition&language=lcc&utility=1.2")
    assert resp.status_code == 422
    body = resp.json()
    assert body["status"] == 422
    assert set(body) >= {"status", "code", "detail"}


def test_unknown_task_is_404(client):
    resp = client.get("/tasks/basket_weaving/report")
    assert resp.status_code == 404
    body = resp.json()
    assert body["status"] == 404
    assert "basket_weaving" in body["detail"]


def test_unknown_language_in_whatif_is_404(client):
    resp = client.get("/whatif?task=named_entity_recognition&language=zzz&utility=0.5")
    assert resp.status_code == 404


def test_bad_tau_types_are_422(client):
    assert client.get("/tasks/named_entity_recognition/underserved?tau=abc").status_code == 422
    assert client.get("/tasks/named_entity_recognition/underserved?tau=-2").status_code == 422
    assert client.get("/tasks/named_entity_recognition/diachronic?tau=0.4").status_code == 422
    assert client.get("/tasks/named_entity_recognition/contributions?tau=0.7").status_code == 422
    assert client.get("/tasks/named_entity_recognition/contributions?kind=guild").status_code == 422


def test_post_then_read_your_writes(client):
    ds = dataset_doc("qa-ldd", "qa_extractive", ["ldd"], at="2023-02-01T00:00:00Z")
    resp = client.post("/datasets", content=json.dumps(ds))
    assert resp.status_code == 201
    seq_ds = resp.json()["seq"]
    sub = submission_doc("qa1", "qa_extractive", "qa-ldd", "ldd", 66.0,
                         at="2023-02-02T00:00:00Z", system="qa-sys")
    resp = client.post("/submissions", content=json.dumps(sub))
    assert resp.status_code == 201
    assert resp.json()["seq"] == seq_ds + 1

    report = client.get("/tasks/qa_extractive/report").json()
    assert report["per_language"]["ldd"]["best_value"] == 66.0
    assert report["per_language"]["ldd"]["system"] == "qa-sys"


def test_duplicate_post_is_409_and_log_unchanged(client):
    sub = submission_doc("dup1", "named_entity_recognition", "ner-laa-corpus", "laa", 33.0,
                         at="2023-02-03T00:00:00Z")
    assert client.post("/submissions", content=json.dumps(sub)).status_code == 201
    length = len(client.log.events)
    resp = client.post("/submissions", content=json.dumps(sub))
    assert resp.status_code == 409
    assert resp.json()["code"] == "duplicate_id"
    assert len(client.log.events) == length


def test_invalid_post_is_422_with_report(client):
    sub = submission_doc("bad1", "named_entity_recognition", "ner-laa-corpus", "laa", 500.0)
    resp = client.post("/submissions", content=json.dumps(sub))
    assert resp.status_code == 422
    body = resp.json()
    assert body["code"] == "validation_failed"
    assert any(e["code"] == "out_of_range" for e in body["report"]["errors"])


def test_unparsable_post_is_422(client):
    resp = client.post("/submissions", content=json.dumps({"task": 5}))
    assert resp.status_code == 422
    assert resp.json()["code"] == "parse_failed"


def test_state_version_header_changes_iff_seq_advances(client):
    first = client.get("/tasks/named_entity_recognition/report")
    second = client.get("/tasks/named_entity_recognition/underserved")
    assert first.headers[STATE_VERSION_HEADER] == second.headers[STATE_VERSION_HEADER]
    ds = dataset_doc("hdr-ds", "qa_extractive", ["laa"], at="2023-03-01T00:00:00Z")
    client.post("/datasets", content=json.dumps(ds))
    third = client.get("/tasks/named_entity_recognition/report")
    assert third.headers[STATE_VERSION_HEADER] != first.headers[STATE_VERSION_HEADER]
    assert int(third.headers[STATE_VERSION_HEADER]) == int(first.headers[STATE_VERSION_HEADER]) + 1


GET_SCHEMA_PAIRS = [
    ("/tasks", "task_list.schema.json"),
    ("/tasks/named_entity_recognition/report", "task_report.schema.json"),
    ("/tasks/named_entity_recognition/underserved?limit=4", "underserved.schema.json"),
    ("/tasks/named_entity_recognition/languages", "language_ranking.schema.json"),
    ("/tasks/named_entity_recognition/diachronic?tau=1", "diachronic.schema.json"),
    ("/tasks/named_entity_recognition/contributions?kind=dataset&tau=0.4", "contributions.schema.json"),
    ("/whatif?task=named_entity_recognition&language=laa&utility=0.9", "whatif.schema.json"),
]


@pytest.mark.parametrize("path, schema_name", GET_SCHEMA_PAIRS)
def test_get_bodies_validate_against_schemas(client, path, schema_name):
    resp = client.get(path)
    assert resp.status_code == 200
    load_schema(schema_name).validate(resp.json())


def test_error_bodies_validate_against_schema(client):
    schema = load_schema("api_error.schema.json")
    for path in ("/tasks/nope/report",
                 "/whatif?task=named_entity_recognition&language=laa&utility=9"):
        resp = client.get(path)
        assert resp.status_code in (404, 422)
        schema.validate(resp.json())


def test_reads_have_no_side_effects(client, figure2_registry, default_tasks, tmp_path):
    before = client.log.state.to_dict()
    for path, _ in GET_SCHEMA_PAIRS:
        client.get(path)
    assert client.log.state.to_dict() == before


def test_serves_ui_when_configured(figure2_registry, default_tasks, tmp_path):
    log = EventLog(tmp_path / "e.jsonl", figure2_registry, default_tasks)
    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>dash</title>", encoding="utf-8")
    app = create_app(log, ui_dir=ui)
    with TestClient(app) as client:
        resp = client.get("/")
        assert resp.status_code == 200
        assert "dash" in resp.text
        # API routes still win
        assert client.get("/tasks").status_code == 200
