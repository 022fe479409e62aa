"""Language, task, and metric registries.

Everything else in the engine resolves language codes and task ids through
the registries defined here. Both are immutable after load and safe to share
across threads.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from equibench.errors import ConflictError, NotFoundError, RegistryParseError

CODE_RE = re.compile(r"^[a-z]{3}$")

LANGUAGE_ROLES = ("single", "mt_source", "mt_target")


@dataclass(frozen=True)
class LanguageRecord:
    """One world language: ISO 639-3 code, display name, L1 speaker count."""

    code: str
    name: str
    population: int

    def __post_init__(self):
        if not CODE_RE.match(self.code):
            raise ValueError(f"bad language code {self.code!r}: want [a-z]{{3}}")
        if self.population < 0:
            raise ValueError(f"negative population for {self.code!r}")


class LanguageRegistry:
    """Immutable, code-indexed collection of LanguageRecords."""

    def __init__(self, records: list[LanguageRecord]):
        self._by_code: dict[str, LanguageRecord] = {}
        for rec in records:
            if rec.code in self._by_code:
                raise ConflictError(f"duplicate language code {rec.code!r}")
            self._by_code[rec.code] = rec
        self._total_population = sum(r.population for r in records)
        self._weights_cache: dict[float, object] = {}

    def __len__(self) -> int:
        return len(self._by_code)

    def __contains__(self, code: str) -> bool:
        return code in self._by_code

    def __iter__(self):
        return iter(self._by_code.values())

    @property
    def codes(self) -> list[str]:
        return list(self._by_code)

    def populations(self) -> dict[str, int]:
        return {c: r.population for c, r in self._by_code.items()}

    def demand_weights(self, tau: float):
        """DemandWeights over the full registry, memoized per tau."""
        # Import here to keep metrics free of registry types.
        from equibench.metrics import demand_weights

        if tau not in self._weights_cache:
            self._weights_cache[tau] = demand_weights(self.populations(), tau)
        return self._weights_cache[tau]


def load_language_registry(path: str | Path) -> LanguageRegistry:
    """Parse a languages.tsv file (code<TAB>name<TAB>population, no header).

    Raises RegistryParseError naming the offending line on malformed rows and
    ConflictError on duplicate codes.
    """
    path = Path(path)
    records: list[LanguageRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise RegistryParseError(
                    str(path), lineno, f"expected 3 tab-separated columns, got {len(cols)}"
                )
            code, name, pop_str = cols
            code = code.strip().lower()
            if not CODE_RE.match(code):
                raise RegistryParseError(str(path), lineno, f"bad ISO 639-3 code {code!r}")
            try:
                population = int(pop_str)
            except ValueError:
                raise RegistryParseError(
                    str(path), lineno, f"population is not an integer: {pop_str!r}"
                ) from None
            if population < 0:
                raise RegistryParseError(str(path), lineno, f"negative population {population}")
            if code in seen:
                raise ConflictError(f"{path}:{lineno}: duplicate language code {code!r}")
            seen.add(code)
            records.append(LanguageRecord(code=code, name=name, population=population))
    return LanguageRegistry(records)


def resolve_language(registry: LanguageRegistry, code: str) -> LanguageRecord:
    """Exact-match lookup after lowercasing. No fuzzy matching."""
    normalized = code.lower()
    rec = registry._by_code.get(normalized)
    if rec is None:
        raise NotFoundError("language", code)
    return rec


def total_population(registry: LanguageRegistry) -> int:
    """Sum of L1 speaker populations over all registry rows."""
    return registry._total_population


@dataclass(frozen=True)
class MetricDef:
    """A scalar metric: bounded range, higher-is-better, fixed or empirical max.

    ``max_mode`` is "fixed" (theoretical maximum is ``max_value``) or
    "empirical" (utility denominators use the best submitted value so far).
    """

    name: str
    range_min: float
    range_max: float
    max_mode: str = "fixed"
    max_value: float | None = None
    better: str = "higher"

    def __post_init__(self):
        if not self.range_min < self.range_max:
            raise ValueError(f"metric {self.name!r}: range_min must be < range_max")
        if self.max_mode not in ("fixed", "empirical"):
            raise ValueError(f"metric {self.name!r}: bad max_mode {self.max_mode!r}")
        if self.max_mode == "fixed":
            if self.max_value is None:
                raise ValueError(f"metric {self.name!r}: fixed max_mode needs a value")
            if not (self.range_min <= self.max_value <= self.range_max):
                raise ValueError(f"metric {self.name!r}: fixed max outside metric range")
        if self.better != "higher":
            raise ValueError(f"metric {self.name!r}: only higher-is-better metrics supported")


@dataclass(frozen=True)
class TaskDef:
    """A task: id, category, metric, and how a record's language key is derived."""

    id: str
    category: str
    metric: MetricDef
    language_role: str = "single"

    def __post_init__(self):
        if self.language_role not in LANGUAGE_ROLES:
            raise ValueError(f"task {self.id!r}: bad language_role {self.language_role!r}")

    @property
    def is_mt(self) -> bool:
        """True when records carry source->target language pairs."""
        return self.language_role in ("mt_source", "mt_target")

    def derive_language_key(self, language) -> str:
        """Map a record's language field to the code used for statistics."""
        if self.language_role == "single":
            return language
        source, target = language
        return source if self.language_role == "mt_source" else target


class TaskRegistry:
    """Immutable, id-indexed collection of TaskDefs."""

    def __init__(self, tasks: list[TaskDef]):
        self._by_id: dict[str, TaskDef] = {}
        for task in tasks:
            if task.id in self._by_id:
                raise ConflictError(f"duplicate task id {task.id!r}")
            self._by_id[task.id] = task

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, task_id: str) -> bool:
        return task_id in self._by_id

    def __iter__(self):
        return iter(self._by_id.values())

    def get(self, task_id: str) -> TaskDef:
        task = self._by_id.get(task_id)
        if task is None:
            raise NotFoundError("task", task_id)
        return task


def _parse_max_mode(raw) -> tuple[str, float | None]:
    if raw == "empirical":
        return "empirical", None
    if isinstance(raw, dict) and set(raw) == {"fixed"}:
        return "fixed", float(raw["fixed"])
    raise ValueError(f'bad max_mode {raw!r}: want "empirical" or {{"fixed": <value>}}')


def load_task_registry(path: str | Path) -> TaskRegistry:
    """Parse a tasks.json file (array of task objects)."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: top-level value must be an array of tasks")
    tasks = []
    for obj in data:
        m = obj["metric"]
        max_mode, max_value = _parse_max_mode(m["max_mode"])
        metric = MetricDef(
            name=m["name"],
            range_min=float(m["range_min"]),
            range_max=float(m["range_max"]),
            max_mode=max_mode,
            max_value=max_value,
        )
        tasks.append(
            TaskDef(
                id=obj["id"],
                category=obj["category"],
                metric=metric,
                language_role=obj.get("language_role", "single"),
            )
        )
    return TaskRegistry(tasks)
