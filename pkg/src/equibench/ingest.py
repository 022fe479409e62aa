"""Parsing and validation of submitted datasets and scores.

Parsing turns raw JSON into typed records, collecting field-level errors with
JSON-path style locations. Validation checks a parsed record against the
registries and the current folded state; it never raises, it reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from equibench.errors import PayloadParseError
from equibench.records import DatasetReg, PerformanceRecord, parse_timestamp
from equibench.registry import CODE_RE


@dataclass(frozen=True)
class FieldError:
    field: str  # JSON path, e.g. ".value" or ".language_pairs[2][0]"
    code: str  # short machine-readable code
    message: str


@dataclass
class ValidationReport:
    errors: list[FieldError] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, field_path: str, code: str, message: str) -> None:
        self.errors.append(FieldError(field=field_path, code=code, message=message))

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [
                {"field": e.field, "code": e.code, "message": e.message} for e in self.errors
            ],
            "warnings": list(self.warnings),
        }


class _Collector:
    """Accumulates parse errors so one pass reports every bad field."""

    def __init__(self):
        self.errors: list[FieldError] = []

    def add(self, path: str, code: str, message: str) -> None:
        self.errors.append(FieldError(field=path, code=code, message=message))

    def raise_if_any(self) -> None:
        if self.errors:
            raise PayloadParseError(self.errors)


def _load_doc(data) -> dict:
    if isinstance(data, dict):
        return data
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    doc = json.loads(data)
    if not isinstance(doc, dict):
        raise PayloadParseError(
            [FieldError(field=".", code="type", message="top-level value must be an object")]
        )
    return doc


def _want_str(doc, key, errs) -> str | None:
    if key not in doc:
        errs.add(f".{key}", "missing", f"required field {key!r} is missing")
        return None
    val = doc[key]
    if not isinstance(val, str) or not val:
        errs.add(f".{key}", "type", f"field {key!r} must be a non-empty string")
        return None
    return val


def _want_timestamp(doc, key, errs):
    raw = _want_str(doc, key, errs)
    if raw is None:
        return None
    try:
        return parse_timestamp(raw)
    except ValueError:
        errs.add(f".{key}", "timestamp", f"bad timestamp {raw!r}: want YYYY-MM-DDThh:mm:ssZ (UTC)")
        return None


def _check_code(raw, path, errs) -> str | None:
    if not isinstance(raw, str):
        errs.add(path, "type", "language code must be a string")
        return None
    code = raw.lower()
    if not CODE_RE.match(code):
        hint = " (2-letter codes are not accepted; use the ISO 639-3 3-letter code)" if len(code) == 2 else ""
        errs.add(path, "code_format", f"bad language code {raw!r}: want ISO 639-3 [a-z]{{3}}{hint}")
        return None
    return code


def _parse_language_field(raw, path, errs):
    """A submission language: bare code, or {source, target} for mt tasks."""
    if isinstance(raw, dict):
        if set(raw) != {"source", "target"}:
            errs.add(path, "shape", 'language pair must have exactly "source" and "target"')
            return None
        source = _check_code(raw["source"], f"{path}.source", errs)
        target = _check_code(raw["target"], f"{path}.target", errs)
        if source is None or target is None:
            return None
        return (source, target)
    return _check_code(raw, path, errs)


def parse_submission(data) -> PerformanceRecord:
    """Parse a submission JSON document into a PerformanceRecord.

    Raises PayloadParseError carrying one FieldError per problem.
    """
    doc = _load_doc(data)
    errs = _Collector()
    submission_id = _want_str(doc, "submission_id", errs)
    task_id = _want_str(doc, "task", errs)
    dataset_id = _want_str(doc, "dataset", errs)
    metric_name = _want_str(doc, "metric", errs)
    system = _want_str(doc, "system", errs)
    submitted_at = _want_timestamp(doc, "submitted_at", errs)

    language = None
    if "language" not in doc:
        errs.add(".language", "missing", "required field 'language' is missing")
    else:
        language = _parse_language_field(doc["language"], ".language", errs)

    value = None
    if "value" not in doc:
        errs.add(".value", "missing", "required field 'value' is missing")
    elif isinstance(doc["value"], bool) or not isinstance(doc["value"], (int, float)):
        errs.add(".value", "type", f"field 'value' must be a number, got {doc['value']!r}")
    else:
        value = float(doc["value"])

    contributor = None
    if "contributor" in doc:
        if not isinstance(doc["contributor"], str):
            errs.add(".contributor", "type", "field 'contributor' must be a string")
        else:
            contributor = doc["contributor"]

    errs.raise_if_any()
    return PerformanceRecord(
        submission_id=submission_id,
        task_id=task_id,
        dataset_id=dataset_id,
        language=language,
        metric_name=metric_name,
        value=value,
        system=system,
        submitted_at=submitted_at,
        contributor=contributor,
    )


def parse_dataset(data) -> DatasetReg:
    """Parse a dataset registration JSON document into a DatasetReg.

    The document must carry exactly one of "languages" (list of codes) or
    "language_pairs" (list of [source, target]); which one the task demands
    is checked later by validate_event.
    """
    doc = _load_doc(data)
    errs = _Collector()
    dataset_id = _want_str(doc, "dataset_id", errs)
    task_id = _want_str(doc, "task", errs)
    name = _want_str(doc, "name", errs)
    registered_at = _want_timestamp(doc, "registered_at", errs)

    source_url = None
    if "source_url" in doc:
        if not isinstance(doc["source_url"], str):
            errs.add(".source_url", "type", "field 'source_url' must be a string")
        else:
            source_url = doc["source_url"]

    has_codes = "languages" in doc
    has_pairs = "language_pairs" in doc
    languages: tuple = ()
    if has_codes == has_pairs:
        errs.add(
            ".languages",
            "shape",
            'exactly one of "languages" or "language_pairs" is required',
        )
    elif has_codes:
        raw = doc["languages"]
        if not isinstance(raw, list) or not raw:
            errs.add(".languages", "type", "field 'languages' must be a non-empty array")
        else:
            codes = []
            for i, item in enumerate(raw):
                code = _check_code(item, f".languages[{i}]", errs)
                if code is not None:
                    if code in codes:
                        errs.add(f".languages[{i}]", "duplicate", f"duplicate language {code!r}")
                    else:
                        codes.append(code)
            languages = tuple(codes)
    else:
        raw = doc["language_pairs"]
        if not isinstance(raw, list) or not raw:
            errs.add(".language_pairs", "type", "field 'language_pairs' must be a non-empty array")
        else:
            pairs = []
            for i, item in enumerate(raw):
                if not isinstance(item, list) or len(item) != 2:
                    errs.add(f".language_pairs[{i}]", "shape", "pair must be [source, target]")
                    continue
                source = _check_code(item[0], f".language_pairs[{i}][0]", errs)
                target = _check_code(item[1], f".language_pairs[{i}][1]", errs)
                if source is None or target is None:
                    continue
                pair = (source, target)
                if pair in pairs:
                    errs.add(f".language_pairs[{i}]", "duplicate", f"duplicate pair {pair!r}")
                else:
                    pairs.append(pair)
            languages = tuple(pairs)

    errs.raise_if_any()
    return DatasetReg(
        dataset_id=dataset_id,
        task_id=task_id,
        languages=languages,
        name=name,
        registered_at=registered_at,
        source_url=source_url,
    )


def _validate_codes_resolvable(codes, registry, path, report) -> None:
    for code in codes:
        if code not in registry:
            report.add(path, "unknown_language", f"language {code!r} is not in the registry")


def validate_event(parsed, registry, tasks, state) -> ValidationReport:
    """Check a parsed record against the registries and the folded state.

    Pure: the same (parsed, registries, state) always yields the same report.
    Any record this accepts can be appended and folded without error.
    """
    report = ValidationReport()
    if isinstance(parsed, DatasetReg):
        _validate_dataset(parsed, registry, tasks, state, report)
    elif isinstance(parsed, PerformanceRecord):
        _validate_submission(parsed, registry, tasks, state, report)
    else:
        report.add(".", "type", f"unsupported record type {type(parsed).__name__}")
    return report


def _validate_dataset(reg: DatasetReg, registry, tasks, state, report) -> None:
    if reg.task_id not in tasks:
        report.add(".task", "unknown_task", f"task {reg.task_id!r} is not registered")
        return
    task = tasks.get(reg.task_id)
    if state is not None and reg.dataset_id in state.dataset_ids:
        report.add(".dataset_id", "duplicate_id", f"dataset {reg.dataset_id!r} already registered")
    if task.is_mt and not reg.has_pairs:
        report.add(
            ".languages", "shape", f"task {task.id!r} needs language_pairs, not languages"
        )
    elif not task.is_mt and reg.has_pairs:
        report.add(
            ".language_pairs", "shape", f"task {task.id!r} needs languages, not language_pairs"
        )
    if reg.has_pairs:
        for source, target in reg.languages:
            _validate_codes_resolvable((source, target), registry, ".language_pairs", report)
    else:
        _validate_codes_resolvable(reg.languages, registry, ".languages", report)


def _validate_submission(rec: PerformanceRecord, registry, tasks, state, report) -> None:
    if rec.task_id not in tasks:
        report.add(".task", "unknown_task", f"task {rec.task_id!r} is not registered")
        return
    task = tasks.get(rec.task_id)
    metric = task.metric

    if state is not None and rec.submission_id in state.submission_ids:
        report.add(
            ".submission_id", "duplicate_id", f"submission {rec.submission_id!r} already ingested"
        )

    if task.is_mt and not rec.is_pair:
        report.add(".language", "shape", f"task {task.id!r} needs a source->target language pair")
    elif not task.is_mt and rec.is_pair:
        report.add(".language", "shape", f"task {task.id!r} needs a single language code")
    if rec.is_pair:
        _validate_codes_resolvable(rec.language, registry, ".language", report)
    else:
        _validate_codes_resolvable((rec.language,), registry, ".language", report)

    if rec.metric_name != metric.name:
        report.add(
            ".metric",
            "metric_mismatch",
            f"task {task.id!r} is scored with {metric.name!r}, got {rec.metric_name!r}",
        )
    if not (metric.range_min <= rec.value <= metric.range_max):
        report.add(
            ".value",
            "out_of_range",
            f"value {rec.value} outside {metric.name} range "
            f"[{metric.range_min}, {metric.range_max}]",
        )

    if state is None:
        return
    dataset = state.find_dataset(rec.dataset_id)
    if dataset is None:
        report.add(
            ".dataset", "unregistered_dataset", f"dataset {rec.dataset_id!r} is not registered"
        )
    else:
        if dataset.task_id != rec.task_id:
            report.add(
                ".dataset",
                "task_mismatch",
                f"dataset {rec.dataset_id!r} belongs to task {dataset.task_id!r}",
            )
        elif rec.language not in dataset.languages:
            report.add(
                ".language",
                "language_not_in_dataset",
                f"dataset {rec.dataset_id!r} does not declare language {rec.language!r}",
            )
