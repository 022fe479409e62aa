"""Append-only event log and the deterministic fold into leaderboard state.

All leaderboard state is a pure fold over a log prefix: the same prefix
always produces an identical state, including the credit ledger. Appends are
serialized through a single writer; folded states are immutable values that
any number of readers may hold.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from equibench.errors import EquibenchError, SnapshotError, ValidationFailed
from equibench.records import (
    CreditEntry,
    DatasetReg,
    Event,
    PerformanceRecord,
    event_from_json_line,
    format_timestamp,
    parse_timestamp,
    record_kind,
    record_timestamp,
)

SNAPSHOT_FORMAT = "equibench.snapshot.v1"


@dataclass(frozen=True)
class BestRecord:
    """The winning submission for one (task, language): max value, earliest seq on ties."""

    value: float
    system: str
    dataset_id: str
    submission_id: str
    seq: int
    at: datetime

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "system": self.system,
            "dataset": self.dataset_id,
            "submission": self.submission_id,
            "seq": self.seq,
            "at": format_timestamp(self.at),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BestRecord":
        return cls(
            value=doc["value"],
            system=doc["system"],
            dataset_id=doc["dataset"],
            submission_id=doc["submission"],
            seq=doc["seq"],
            at=parse_timestamp(doc["at"]),
        )


@dataclass
class TaskState:
    """Folded per-task aggregates."""

    best: dict = field(default_factory=dict)  # derived language key -> BestRecord
    dataset_ids: list = field(default_factory=list)  # registration order
    empirical_max: float | None = None
    submission_count: int = 0

    @property
    def covered(self) -> set:
        return set(self.best)

    def copy(self) -> "TaskState":
        return TaskState(
            best=dict(self.best),
            dataset_ids=list(self.dataset_ids),
            empirical_max=self.empirical_max,
            submission_count=self.submission_count,
        )


class BenchState:
    """The fold of an event-log prefix: bests, datasets, coverage, credit ledger."""

    def __init__(self, registry, tasks):
        self.registry = registry
        self.tasks = tasks
        self.last_seq = 0
        self.task_states: dict[str, TaskState] = {}
        self.datasets_by_id: dict[str, DatasetReg] = {}
        self.submission_ids: set[str] = set()
        self.credits: list[CreditEntry] = []

    @property
    def dataset_ids(self) -> set:
        return set(self.datasets_by_id)

    def find_dataset(self, dataset_id: str):
        return self.datasets_by_id.get(dataset_id)

    def task_state(self, task_id: str) -> TaskState:
        """Read view of a task's folded aggregates (empty if no events yet)."""
        return self.task_states.get(task_id) or TaskState()

    def _task_state_mut(self, task_id: str) -> TaskState:
        if task_id not in self.task_states:
            self.task_states[task_id] = TaskState()
        return self.task_states[task_id]

    def copy(self) -> "BenchState":
        dup = BenchState(self.registry, self.tasks)
        dup.last_seq = self.last_seq
        dup.task_states = {tid: ts.copy() for tid, ts in self.task_states.items()}
        dup.datasets_by_id = dict(self.datasets_by_id)
        dup.submission_ids = set(self.submission_ids)
        dup.credits = list(self.credits)
        return dup

    def to_dict(self) -> dict:
        return {
            "last_seq": self.last_seq,
            "datasets": {
                did: reg.to_payload() for did, reg in sorted(self.datasets_by_id.items())
            },
            "submission_ids": sorted(self.submission_ids),
            "tasks": {
                tid: {
                    "dataset_ids": list(ts.dataset_ids),
                    "empirical_max": ts.empirical_max,
                    "submission_count": ts.submission_count,
                    "best": {
                        _key_str(key): rec.to_dict() for key, rec in sorted(ts.best.items())
                    },
                }
                for tid, ts in sorted(self.task_states.items())
            },
            "credits": [entry.to_dict() for entry in self.credits],
        }

    @classmethod
    def from_dict(cls, doc: dict, registry, tasks) -> "BenchState":
        from equibench.ingest import parse_dataset

        state = cls(registry, tasks)
        state.last_seq = doc["last_seq"]
        state.datasets_by_id = {
            did: parse_dataset(payload) for did, payload in doc["datasets"].items()
        }
        state.submission_ids = set(doc["submission_ids"])
        for tid, tdoc in doc["tasks"].items():
            ts = TaskState(
                best={
                    key: BestRecord.from_dict(rec) for key, rec in tdoc["best"].items()
                },
                dataset_ids=list(tdoc["dataset_ids"]),
                empirical_max=tdoc["empirical_max"],
                submission_count=tdoc["submission_count"],
            )
            state.task_states[tid] = ts
        state.credits = [CreditEntry.from_dict(c) for c in doc["credits"]]
        return state

    def __eq__(self, other) -> bool:
        if not isinstance(other, BenchState):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _key_str(key) -> str:
    # MT tasks derive a single source (or target) code, so keys are plain
    # strings already; kept as a function for one obvious extension point.
    return key


def apply_event(state: BenchState, event: Event) -> None:
    """Fold one event into the state, in place. Assumes the event validated."""
    if isinstance(event.payload, DatasetReg):
        reg = event.payload
        state.datasets_by_id[reg.dataset_id] = reg
        state._task_state_mut(reg.task_id).dataset_ids.append(reg.dataset_id)
    else:
        rec: PerformanceRecord = event.payload
        task = state.tasks.get(rec.task_id)
        key = task.derive_language_key(rec.language)
        ts = state._task_state_mut(rec.task_id)
        ts.submission_count += 1
        if ts.empirical_max is None or rec.value > ts.empirical_max:
            ts.empirical_max = rec.value
        incumbent = ts.best.get(key)
        if incumbent is None or rec.value > incumbent.value:
            ts.best[key] = BestRecord(
                value=rec.value,
                system=rec.system,
                dataset_id=rec.dataset_id,
                submission_id=rec.submission_id,
                seq=event.seq,
                at=event.at,
            )
        state.submission_ids.add(rec.submission_id)
    state.last_seq = event.seq


def _select_prefix(events, upto):
    if upto is None:
        return list(events)
    if isinstance(upto, int):
        return [e for e in events if e.seq <= upto]
    if isinstance(upto, str):
        upto = parse_timestamp(upto)
    if isinstance(upto, datetime):
        return [e for e in events if e.at <= upto]
    raise TypeError(f"upto must be a seq, timestamp, or None, got {type(upto).__name__}")


def fold_state(events, registry, tasks, upto=None, start: BenchState | None = None) -> BenchState:
    """Fold events with seq <= upto (or at <= upto for timestamps) into a state.

    Optionally resumes from a snapshot state; events at or before the
    snapshot's last_seq are skipped so snapshot-plus-tail equals a full fold.
    """
    from equibench.leaderboard import attribute_delta

    state = start.copy() if start is not None else BenchState(registry, tasks)
    for event in _select_prefix(events, upto):
        if event.seq <= state.last_seq:
            continue
        state.credits.extend(attribute_delta(state, event))
        apply_event(state, event)
    return state


class EventLog:
    """Single-writer append-only log backed by an events.jsonl file.

    Keeps the current folded state in memory; each append builds the
    successor state and swaps it in atomically, so concurrent readers always
    see a complete snapshot.
    """

    def __init__(self, path: str | Path, registry, tasks):
        self.path = Path(path)
        self.registry = registry
        self.tasks = tasks
        self._write_lock = threading.Lock()
        self.events: list[Event] = []
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        self.events.append(event_from_json_line(line))
            for i, event in enumerate(self.events, start=1):
                if event.seq != i:
                    raise EquibenchError(
                        f"{self.path}: event log seqs must be gapless, expected {i} got {event.seq}"
                    )
        self._state = fold_state(self.events, registry, tasks)

    @property
    def state(self) -> BenchState:
        return self._state

    def append(self, record) -> int:
        """Validate and durably append one record; returns the assigned seq.

        Appends are serialized; readers keep seeing the previous state until
        the successor state is swapped in whole.
        """
        from equibench.ingest import validate_event
        from equibench.leaderboard import attribute_delta

        with self._write_lock:
            report = validate_event(record, self.registry, self.tasks, self._state)
            if not report.ok:
                raise ValidationFailed(report)
            seq = len(self.events) + 1
            event = Event(
                seq=seq, kind=record_kind(record), at=record_timestamp(record), payload=record
            )
            self._write_line(event.to_json_line())
            new_state = self._state.copy()
            new_state.credits.extend(attribute_delta(new_state, event))
            apply_event(new_state, event)
            self.events.append(event)
            self._state = new_state
            return seq

    def _write_line(self, line: str) -> None:
        data = (line + "\n").encode("utf-8")
        old_size = self.path.stat().st_size if self.path.exists() else 0
        try:
            with open(self.path, "ab") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            # Roll back a partial write so the log never holds a torn line.
            try:
                with open(self.path, "ab") as fh:
                    fh.truncate(old_size)
            except OSError:
                pass
            raise EquibenchError(f"append to {self.path} failed: {exc}") from exc

    def fold(self, upto=None) -> BenchState:
        """Recompute the state of an arbitrary prefix from scratch."""
        return fold_state(self.events, self.registry, self.tasks, upto=upto)


def _canonical_state_bytes(state_doc: dict) -> bytes:
    return json.dumps(state_doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_snapshot(state: BenchState, path: str | Path) -> None:
    """Write a checksummed snapshot; load_snapshot(save_snapshot(s)) == s."""
    path = Path(path)
    state_doc = state.to_dict()
    doc = {
        "format": SNAPSHOT_FORMAT,
        "checksum": hashlib.sha256(_canonical_state_bytes(state_doc)).hexdigest(),
        "state": state_doc,
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")
    os.replace(tmp, path)


def load_snapshot(path: str | Path, registry, tasks) -> BenchState:
    """Read a snapshot, verifying its embedded content checksum."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"unreadable snapshot {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError(f"{path}: not a {SNAPSHOT_FORMAT} file")
    expected = doc.get("checksum")
    actual = hashlib.sha256(_canonical_state_bytes(doc["state"])).hexdigest()
    if expected != actual:
        raise SnapshotError(f"{path}: checksum mismatch (file corrupt or truncated)")
    return BenchState.from_dict(doc["state"], registry, tasks)
