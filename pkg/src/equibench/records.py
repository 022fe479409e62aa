"""Domain records and their JSON wire forms.

The event log, the ingest formats, and the HTTP write endpoints all share
these shapes. Timestamps are UTC at second resolution, serialized as
``YYYY-MM-DDThh:mm:ssZ``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"

DATASET_REGISTERED = "dataset_registered"
SCORE_SUBMITTED = "score_submitted"


def parse_timestamp(value: str) -> datetime:
    dt = datetime.strptime(value, TIMESTAMP_FORMAT)
    return dt.replace(tzinfo=timezone.utc)


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


@dataclass(frozen=True)
class DatasetReg:
    """A dataset registration: which task it serves and which languages it enables."""

    dataset_id: str
    task_id: str
    languages: tuple  # tuple[str, ...] or tuple[tuple[str, str], ...]
    name: str
    registered_at: datetime
    source_url: str | None = None

    @property
    def has_pairs(self) -> bool:
        return bool(self.languages) and isinstance(self.languages[0], tuple)

    def to_payload(self) -> dict:
        payload: dict = {"dataset_id": self.dataset_id, "task": self.task_id}
        if self.has_pairs:
            payload["language_pairs"] = [list(pair) for pair in self.languages]
        else:
            payload["languages"] = list(self.languages)
        payload["name"] = self.name
        if self.source_url is not None:
            payload["source_url"] = self.source_url
        payload["registered_at"] = format_timestamp(self.registered_at)
        return payload


@dataclass(frozen=True)
class PerformanceRecord:
    """One scored system output: a scalar metric value for a (task, dataset, language)."""

    submission_id: str
    task_id: str
    dataset_id: str
    language: object  # str or (source, target)
    metric_name: str
    value: float
    system: str
    submitted_at: datetime
    contributor: str | None = None

    @property
    def is_pair(self) -> bool:
        return isinstance(self.language, tuple)

    def to_payload(self) -> dict:
        if self.is_pair:
            language = {"source": self.language[0], "target": self.language[1]}
        else:
            language = self.language
        payload = {
            "submission_id": self.submission_id,
            "task": self.task_id,
            "dataset": self.dataset_id,
            "language": language,
            "metric": self.metric_name,
            "value": self.value,
            "system": self.system,
            "submitted_at": format_timestamp(self.submitted_at),
        }
        if self.contributor is not None:
            payload["contributor"] = self.contributor
        return payload


@dataclass(frozen=True)
class CreditEntry:
    """Attributed change in the global metric caused by one event.

    Every score event credits the submitting system; the referenced dataset
    is co-credited when the event is the first submission for its
    (task, language). Dataset registrations alone produce zero-delta entries.
    """

    event_seq: int
    beneficiary_kind: str  # "system" or "dataset"
    beneficiary_id: str
    task_id: str
    tau: float
    delta: float
    at: datetime

    def to_dict(self) -> dict:
        return {
            "event_seq": self.event_seq,
            "beneficiary_kind": self.beneficiary_kind,
            "beneficiary_id": self.beneficiary_id,
            "task_id": self.task_id,
            "tau": self.tau,
            "delta": self.delta,
            "at": format_timestamp(self.at),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CreditEntry":
        return cls(
            event_seq=doc["event_seq"],
            beneficiary_kind=doc["beneficiary_kind"],
            beneficiary_id=doc["beneficiary_id"],
            task_id=doc["task_id"],
            tau=doc["tau"],
            delta=doc["delta"],
            at=parse_timestamp(doc["at"]),
        )


@dataclass(frozen=True)
class Event:
    """One append-only log entry; seq is assigned by the log and is gapless."""

    seq: int
    kind: str  # DATASET_REGISTERED or SCORE_SUBMITTED
    at: datetime
    payload: object  # DatasetReg or PerformanceRecord

    def to_json_line(self) -> str:
        doc = {
            "seq": self.seq,
            "kind": self.kind,
            "at": format_timestamp(self.at),
            "payload": self.payload.to_payload(),
        }
        return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def record_timestamp(record) -> datetime:
    """The event time carried by a payload record."""
    if isinstance(record, DatasetReg):
        return record.registered_at
    return record.submitted_at


def record_kind(record) -> str:
    return DATASET_REGISTERED if isinstance(record, DatasetReg) else SCORE_SUBMITTED


def event_from_json_line(line: str) -> Event:
    """Decode one events.jsonl line. Lines were validated at append time."""
    from equibench.ingest import parse_dataset, parse_submission

    doc = json.loads(line)
    kind = doc["kind"]
    if kind == DATASET_REGISTERED:
        payload = parse_dataset(doc["payload"])
    elif kind == SCORE_SUBMITTED:
        payload = parse_submission(doc["payload"])
    else:
        raise ValueError(f"unknown event kind {kind!r}")
    return Event(seq=doc["seq"], kind=kind, at=parse_timestamp(doc["at"]), payload=payload)
