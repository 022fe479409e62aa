"""Read-mostly HTTP service over one event log.

GET endpoints mirror the leaderboard module's outputs exactly; POST endpoints
validate, append, and expose the new state to immediately following reads.
Bodies are rendered with the same canonical dumper the CLI uses, so the two
interfaces are byte-identical for the same state.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

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
from equibench.store import EventLog

STATE_VERSION_HEADER = "X-State-Version"


class ApiError(Exception):
    """Structured error: status in {400, 404, 409, 422, 500}."""

    def __init__(self, status: int, code: str, detail: str, report=None):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail
        self.report = report

    def body(self) -> dict:
        doc = {"status": self.status, "code": self.code, "detail": self.detail}
        if self.report is not None:
            doc["report"] = self.report
        return doc


def _parse_float(raw: str, name: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ApiError(422, "bad_parameter", f"{name} must be a number, got {raw!r}") from None


def _parse_int(raw: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ApiError(422, "bad_parameter", f"{name} must be an integer, got {raw!r}") from None


def create_app(log: EventLog, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="equibench", docs_url=None, redoc_url=None, openapi_url=None)

    def respond(doc) -> Response:
        return Response(
            content=dumps_canonical(doc),
            media_type="application/json",
            headers={STATE_VERSION_HEADER: str(log.state.last_seq)},
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    def translate(exc: Exception) -> ApiError:
        if isinstance(exc, NotFoundError):
            return ApiError(404, "not_found", str(exc))
        if isinstance(exc, DomainError):
            return ApiError(422, "bad_parameter", str(exc))
        if isinstance(exc, PayloadParseError):
            report = {
                "ok": False,
                "errors": [
                    {"field": e.field, "code": e.code, "message": e.message} for e in exc.errors
                ],
                "warnings": [],
            }
            return ApiError(422, "parse_failed", "payload did not parse", report=report)
        if isinstance(exc, ValidationFailed):
            codes = {e.code for e in exc.report.errors}
            if codes == {"duplicate_id"}:
                return ApiError(409, "duplicate_id", str(exc), report=exc.report.to_dict())
            return ApiError(422, "validation_failed", str(exc), report=exc.report.to_dict())
        if isinstance(exc, EquibenchError):
            return ApiError(500, "internal", str(exc))
        raise exc

    @app.get("/tasks")
    def list_tasks():
        state = log.state
        out = []
        for task in log.tasks:
            ts = state.task_state(task.id)
            metric = task.metric
            max_mode = "empirical" if metric.max_mode == "empirical" else {"fixed": metric.max_value}
            out.append(
                {
                    "id": task.id,
                    "category": task.category,
                    "metric": {
                        "name": metric.name,
                        "range_min": metric.range_min,
                        "range_max": metric.range_max,
                        "max_mode": max_mode,
                    },
                    "language_role": task.language_role,
                    "dataset_count": len(ts.dataset_ids),
                    "submission_count": ts.submission_count,
                    "covered_language_count": len(ts.best),
                }
            )
        return respond(out)

    @app.get("/tasks/{task_id}/report")
    def get_report(task_id: str):
        try:
            report = leaderboard.task_report(log.state, task_id)
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond(report.to_dict())

    @app.get("/tasks/{task_id}/underserved")
    def get_underserved(task_id: str, tau: str | None = None, limit: str | None = None):
        tau_value = leaderboard.RANKING_TAU if tau is None else _parse_float(tau, "tau")
        limit_value = 10 if limit is None else _parse_int(limit, "limit")
        try:
            ranking = leaderboard.underserved_ranking(
                log.state, task_id, tau=tau_value, limit=limit_value
            )
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond(ranking.to_dict())

    @app.get("/tasks/{task_id}/languages")
    def get_languages(task_id: str):
        try:
            ranking = leaderboard.language_score_ranking(log.state, task_id)
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond([row.to_dict() for row in ranking])

    @app.get("/tasks/{task_id}/diachronic")
    def get_diachronic(task_id: str, tau: str | None = None):
        tau_value = 1.0 if tau is None else _parse_float(tau, "tau")
        try:
            series = leaderboard.diachronic_series(log, task_id, tau_value)
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond([point.to_dict() for point in series])

    @app.get("/tasks/{task_id}/contributions")
    def get_contributions(task_id: str, kind: str = "system", tau: str | None = None):
        tau_value = leaderboard.RANKING_TAU if tau is None else _parse_float(tau, "tau")
        try:
            rows = leaderboard.contribution_leaderboard(
                log.state, task_id, tau=tau_value, kind=kind
            )
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond([row.to_dict() for row in rows])

    @app.get("/whatif")
    def get_whatif(task: str, language: str, utility: str, taus: str | None = None):
        utility_value = _parse_float(utility, "utility")
        tau_values = leaderboard.LEDGER_TAUS
        if taus is not None:
            tau_values = tuple(_parse_float(t, "taus") for t in taus.split(","))
        try:
            result = leaderboard.what_if(log.state, task, language, utility_value, tau_values)
        except (NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return respond(result.to_dict())

    async def _read_body(request: Request) -> bytes:
        return await request.body()

    @app.post("/datasets", status_code=201)
    async def post_dataset(request: Request):
        body = await _read_body(request)
        try:
            record = parse_dataset(body)
            seq = log.append(record)
        except (PayloadParseError, ValidationFailed, NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return Response(
            content=dumps_canonical({"seq": seq}),
            status_code=201,
            media_type="application/json",
            headers={STATE_VERSION_HEADER: str(log.state.last_seq)},
        )

    @app.post("/submissions", status_code=201)
    async def post_submission(request: Request):
        body = await _read_body(request)
        try:
            record = parse_submission(body)
            seq = log.append(record)
        except (PayloadParseError, ValidationFailed, NotFoundError, DomainError) as exc:
            raise translate(exc) from exc
        return Response(
            content=dumps_canonical({"seq": seq}),
            status_code=201,
            media_type="application/json",
            headers={STATE_VERSION_HEADER: str(log.state.last_seq)},
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
