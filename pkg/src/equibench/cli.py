"""Operator command line: ingest files, run reports, rank, serve, snapshot.

With ``--output json`` every command writes exactly one JSON document to
stdout; diagnostics go to stderr. Exit codes: 0 ok, 1 runtime failure
(including rejected ingest items), 2 usage errors and unknown names.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from equibench import leaderboard
from equibench.errors import (
    DomainError,
    EquibenchError,
    NotFoundError,
    PayloadParseError,
    ValidationFailed,
)
from equibench.ingest import parse_dataset, parse_submission
from equibench.jsonio import dumps_canonical
from equibench.registry import load_language_registry, load_task_registry
from equibench.store import EventLog, load_snapshot, save_snapshot

DEFAULTS = {
    "registry_path": "data/languages.tsv",
    "tasks_path": "data/tasks.json",
    "log_path": "events.jsonl",
    "snapshot_path": "snapshot.json",
    "tau": 0.4,
    "output": "table",
}


@dataclass
class CliConfig:
    registry_path: str
    tasks_path: str
    log_path: str
    snapshot_path: str
    tau: float
    output: str

    def open_log(self) -> EventLog:
        registry = load_language_registry(self.registry_path)
        tasks = load_task_registry(self.tasks_path)
        return EventLog(self.log_path, registry, tasks)


def _resolve_config(config_path, **flags) -> CliConfig:
    # Precedence: flags (and env via click's envvar) > config file > defaults.
    file_values = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            file_values = json.load(fh)
    resolved = {}
    for key, default in DEFAULTS.items():
        if flags.get(key) is not None:
            resolved[key] = flags[key]
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = default
    if resolved["tau"] < 0:
        raise click.UsageError("tau must be non-negative")
    return CliConfig(**resolved)


def _emit(cfg: CliConfig, doc, render_table) -> None:
    if cfg.output == "json":
        click.echo(dumps_canonical(doc), nl=False)
    else:
        render_table(doc)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    """Map engine errors to the documented exit codes."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NotFoundError as exc:
            _fail(str(exc), 2)
        except DomainError as exc:
            _fail(str(exc), 2)
        except EquibenchError as exc:
            _fail(str(exc), 1)
        except OSError as exc:
            _fail(str(exc), 1)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), envvar="EQUIBENCH_CONFIG", default=None, help="Optional JSON config file.")
@click.option("--registry", "registry_path", envvar="EQUIBENCH_REGISTRY", default=None, help="languages.tsv path.")
@click.option("--tasks", "tasks_path", envvar="EQUIBENCH_TASKS", default=None, help="tasks.json path.")
@click.option("--log", "log_path", envvar="EQUIBENCH_LOG", default=None, help="events.jsonl path.")
@click.option("--snapshot", "snapshot_path", envvar="EQUIBENCH_SNAPSHOT", default=None, help="Snapshot file path.")
@click.option("--tau", type=float, envvar="EQUIBENCH_TAU", default=None, help="Default tau for rankings.")
@click.option("--output", type=click.Choice(["table", "json"]), envvar="EQUIBENCH_OUTPUT", default=None)
@click.pass_context
def main(ctx, config_path, **flags):
    """Track utility and equity of benchmark submissions across languages."""
    ctx.obj = _resolve_config(config_path, **flags)


def _iter_items(text: str):
    """Yield JSON objects from a batch file: one array, or one object per line."""
    stripped = text.lstrip()
    if stripped.startswith("["):
        yield from json.loads(text)
        return
    for line in text.splitlines():
        line = line.strip()
        if line:
            yield json.loads(line)


def _parse_item(item: dict):
    if "submission_id" in item:
        return parse_submission(item)
    if "dataset_id" in item:
        return parse_dataset(item)
    raise PayloadParseError([])


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.pass_obj
@_guard
def ingest(cfg: CliConfig, files):
    """Ingest batch files of dataset registrations and score submissions."""
    log = cfg.open_log()
    total_accepted = 0
    total_rejected = 0
    per_file = []
    for path in files:
        text = Path(path).read_text(encoding="utf-8")
        accepted = 0
        errors = []
        try:
            items = list(_iter_items(text))
        except json.JSONDecodeError as exc:
            per_file.append(
                {"path": str(path), "accepted": 0, "rejected": 1,
                 "errors": [{"item": None, "field": ".", "code": "json", "message": str(exc)}]}
            )
            total_rejected += 1
            continue
        for i, item in enumerate(items):
            try:
                record = _parse_item(item)
                log.append(record)
                accepted += 1
            except PayloadParseError as exc:
                fields = exc.errors or []
                if not fields:
                    errors.append({"item": i, "field": ".", "code": "shape",
                                   "message": "object is neither a submission nor a dataset"})
                for fe in fields:
                    errors.append({"item": i, "field": fe.field, "code": fe.code, "message": fe.message})
            except ValidationFailed as exc:
                for fe in exc.report.errors:
                    errors.append({"item": i, "field": fe.field, "code": fe.code, "message": fe.message})
        rejected = len(items) - accepted
        total_accepted += accepted
        total_rejected += rejected
        per_file.append({"path": str(path), "accepted": accepted, "rejected": rejected, "errors": errors})

    doc = {"accepted": total_accepted, "rejected": total_rejected, "files": per_file}

    def render(doc):
        for f in doc["files"]:
            click.echo(f"{f['path']}: accepted={f['accepted']} rejected={f['rejected']}")
            for e in f["errors"]:
                click.echo(f"  item {e['item']}: {e['field']} [{e['code']}] {e['message']}", err=True)
        click.echo(f"total: accepted={doc['accepted']} rejected={doc['rejected']}")

    _emit(cfg, doc, render)
    if total_rejected:
        sys.exit(1)


def _report_table(rows) -> None:
    header = f"{'Task':<28} {'Demo. Avg.':>10} {'Ling. Avg.':>10} {'Gini':>8} {'% Pop.':>8} {'Langs':>6}"
    click.echo(header)
    click.echo("-" * len(header))
    for doc in rows:
        click.echo(
            f"{doc['task']:<28} {doc['demographic_avg']:>10.4f} {doc['linguistic_avg']:>10.4f} "
            f"{doc['gini']:>8.4f} {doc['pop_coverage_pct']:>7.2f}% {doc['covered_language_count']:>6}"
        )


@main.command()
@click.argument("task", required=False)
@click.pass_obj
@_guard
def report(cfg: CliConfig, task):
    """Per-task report: global averages, Gini, population coverage."""
    log = cfg.open_log()
    if task is not None:
        doc = leaderboard.task_report(log.state, task).to_dict()
        _emit(cfg, doc, lambda d: _report_table([d]))
    else:
        doc = [r.to_dict() for r in leaderboard.all_task_reports(log.state)]
        _emit(cfg, doc, _report_table)


@main.command()
@click.argument("task")
@click.option("--tau", type=float, default=None, help="Demand exponent (default from config).")
@click.option("--limit", type=int, default=10, show_default=True)
@click.pass_obj
@_guard
def underserved(cfg: CliConfig, task, tau, limit):
    """Rank the most under-served languages for a task."""
    log = cfg.open_log()
    tau_value = cfg.tau if tau is None else tau
    ranking = leaderboard.underserved_ranking(log.state, task, tau=tau_value, limit=limit)
    doc = ranking.to_dict()

    def render(doc):
        click.echo(f"task={doc['task']} tau={doc['tau']:g}")
        for rank, e in enumerate(doc["entries"], start=1):
            click.echo(
                f"{rank:>3}. {e['code']}  pop={e['population']:<12} u={e['utility']:.4f}  score={e['score']:.8f}"
            )

    _emit(cfg, doc, render)


@main.command()
@click.argument("task")
@click.pass_obj
@_guard
def languages(cfg: CliConfig, task):
    """Covered languages ranked by best raw score."""
    log = cfg.open_log()
    doc = [row.to_dict() for row in leaderboard.language_score_ranking(log.state, task)]

    def render(doc):
        for rank, row in enumerate(doc, start=1):
            click.echo(f"{rank:>3}. {row['code']}  best={row['best_value']} ({row['system']})")

    _emit(cfg, doc, render)


@main.command()
@click.argument("task")
@click.option("--tau", type=float, default=1.0, show_default=True, help="0 linguistic, 1 demographic.")
@click.pass_obj
@_guard
def diachronic(cfg: CliConfig, task, tau):
    """Global average after every event touching the task, over time."""
    log = cfg.open_log()
    doc = [p.to_dict() for p in leaderboard.diachronic_series(log, task, tau)]

    def render(doc):
        for point in doc:
            click.echo(f"{point['at']}  {point['value']:.4f}")

    _emit(cfg, doc, render)


@main.command()
@click.argument("task")
@click.option("--tau", type=float, default=None)
@click.option("--kind", type=click.Choice(["system", "dataset"]), default="system", show_default=True)
@click.pass_obj
@_guard
def contributions(cfg: CliConfig, task, tau, kind):
    """Credit totals per system or dataset for a task."""
    log = cfg.open_log()
    tau_value = cfg.tau if tau is None else tau
    doc = [r.to_dict() for r in leaderboard.contribution_leaderboard(log.state, task, tau_value, kind)]

    def render(doc):
        for rank, row in enumerate(doc, start=1):
            click.echo(f"{rank:>3}. {row['beneficiary']}  total={row['total']:.8f} ({row['events']} events)")

    _emit(cfg, doc, render)


@main.command()
@click.argument("task")
@click.argument("language")
@click.argument("utility", type=float)
@click.pass_obj
@_guard
def whatif(cfg: CliConfig, task, language, utility):
    """Project boards as if a language reached the given utility."""
    log = cfg.open_log()
    doc = leaderboard.what_if(log.state, task, language, utility).to_dict()

    def render(doc):
        click.echo(f"task={doc['task']} language={doc['language']} utility={doc['utility']:g}")
        for tau, delta in doc["delta_m"].items():
            click.echo(f"  delta M(tau={tau}) = {delta:.8f}")
        click.echo(f"  new under-served rank: {doc['new_rank_of_language']}")
        click.echo(f"  displaced from top-3: {', '.join(doc['displaced_top3']) or '(none)'}")

    _emit(cfg, doc, render)


@main.command()
@click.option("--host", default=None, help="Bind address (default from EQUIBENCH_ADDR or 127.0.0.1).")
@click.option("--port", type=int, default=None, help="Port (default from EQUIBENCH_ADDR or 8000).")
@click.option("--with-ui", "ui_dir", is_flag=False, flag_value="frontend/dist", default=None,
              help="Serve a dashboard build (default frontend/dist; pass a path to override).")
@click.pass_obj
@_guard
def serve(cfg: CliConfig, host, port, ui_dir):
    """Run the HTTP API (and optionally the dashboard) over the configured log."""
    import os

    import uvicorn

    from equibench.api import create_app

    addr = os.environ.get("EQUIBENCH_ADDR", "")
    if host is None:
        host = addr.split(":")[0] if ":" in addr else (addr or "127.0.0.1")
    if port is None:
        port = int(addr.rsplit(":", 1)[1]) if ":" in addr else 8000
    log = cfg.open_log()
    if ui_dir is not None and not Path(ui_dir).is_dir():
        click.echo(f"warning: UI directory {ui_dir!r} not found; serving API only", err=True)
        ui_dir = None
    app = create_app(log, ui_dir=ui_dir)
    click.echo(f"serving on http://{host}:{port} (log: {cfg.log_path})", err=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.argument("action", type=click.Choice(["save", "load"]))
@click.pass_obj
@_guard
def snapshot(cfg: CliConfig, action):
    """Save the current fold to the snapshot file, or verify and summarize one."""
    if action == "save":
        log = cfg.open_log()
        save_snapshot(log.state, cfg.snapshot_path)
        doc = {"saved": cfg.snapshot_path, "last_seq": log.state.last_seq}
        _emit(cfg, doc, lambda d: click.echo(f"snapshot of seq {d['last_seq']} saved to {d['saved']}"))
    else:
        registry = load_language_registry(cfg.registry_path)
        tasks = load_task_registry(cfg.tasks_path)
        state = load_snapshot(cfg.snapshot_path, registry, tasks)
        doc = {
            "path": cfg.snapshot_path,
            "last_seq": state.last_seq,
            "datasets": len(state.datasets_by_id),
            "submissions": len(state.submission_ids),
            "active_tasks": sorted(state.task_states),
        }
        _emit(cfg, doc, lambda d: click.echo(
            f"{d['path']}: seq {d['last_seq']}, {d['datasets']} datasets, "
            f"{d['submissions']} submissions, tasks: {', '.join(d['active_tasks'])}"
        ))


if __name__ == "__main__":
    main()
