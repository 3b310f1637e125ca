"""Local HTTP JSON service over the engine, one isolated invocation per request.

Error contract: 422 for validation problems, 413 when the enumeration size
guard trips, 500 with a correlation id otherwise.  Responses are produced by
the same report builders as the CLI, so the bytes match.
"""
from __future__ import annotations

import os
import uuid

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import reports
from .corpus import UnknownInstance
from .model import ModelError, TooLargeToEnumerateError, problem_from_json


class Config:
    def __init__(self):
        self.port = int(os.environ.get("FAIRDIV_PORT", "8000"))
        self.guard = int(os.environ.get("FAIRDIV_GUARD", "12"))
        self.deadline_s = float(os.environ.get("FAIRDIV_DEADLINE", "30"))


def _report_response(report: dict) -> Response:
    return Response(content=reports.dumps(report), media_type="application/json")


def create_app(config: Config | None = None) -> FastAPI:
    cfg = config or Config()
    app = FastAPI(title="fairdiv", docs_url=None, redoc_url=None)

    @app.exception_handler(ModelError)
    async def _model_error(_req: Request, exc: ModelError):
        return JSONResponse(status_code=422, content=exc.payload())

    @app.exception_handler(TooLargeToEnumerateError)
    async def _guard_error(_req: Request, exc: TooLargeToEnumerateError):
        return JSONResponse(status_code=413, content=exc.payload())

    @app.exception_handler(Exception)
    async def _internal(_req: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error": "internal", "correlation_id": str(uuid.uuid4())},
        )

    async def _body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception as exc:
            raise ModelError(f"invalid JSON body: {exc}") from exc
        if not isinstance(body, dict):
            raise ModelError("request body must be a JSON object")
        return body

    def _problem(body: dict):
        doc = body.get("problem")
        if doc is None:
            raise ModelError("request body needs a 'problem' field")
        return problem_from_json(doc)

    @app.get("/v1/health")
    async def health():
        return {"status": "ok"}

    @app.post("/v1/solve")
    async def solve(request: Request):
        body = await _body(request)
        rule = body.get("rule", "competitive")
        if rule not in ("competitive", "egalitarian"):
            raise ModelError(f"unknown rule {rule!r}")
        report = reports.solve_report(
            _problem(body),
            rule,
            enumerate_all=bool(body.get("enumerate", False)),
            guard=cfg.guard,
            deadline_s=cfg.deadline_s,
            verify=bool(body.get("verify", False)),
        )
        return _report_response(report)

    @app.post("/v1/axioms")
    async def axioms(request: Request):
        body = await _body(request)
        problem = _problem(body)
        alloc = None
        if body.get("allocation") is not None:
            alloc = reports.parse_allocation(body["allocation"])
        checks = body.get("checks") or ["fair-share", "envy", "ete"]
        try:
            report = reports.axioms_report(problem, checks, alloc)
        except ValueError as exc:
            raise ModelError(str(exc)) from exc
        return _report_response(report)

    @app.post("/v1/components")
    async def components(request: Request):
        body = await _body(request)
        problem = _problem(body)
        try:
            report = reports.components_report(problem)
        except ValueError as exc:
            raise ModelError(str(exc)) from exc
        return _report_response(report)

    @app.get("/v1/corpus")
    async def corpus_index():
        return _report_response(reports.corpus_listing())

    @app.get("/v1/corpus/{name}")
    async def corpus_item(name: str):
        try:
            return _report_response(reports.corpus_report(name))
        except UnknownInstance as exc:
            raise ModelError(f"unknown instance: {exc}") from exc

    # serve the web UI when a built bundle sits next to the package checkout
    ui_root = os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
    if os.path.exists(os.path.join(ui_root, "index.html")):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_root, html=True), name="ui")

    return app


def serve() -> None:
    import uvicorn

    cfg = Config()
    uvicorn.run(create_app(cfg), host="127.0.0.1", port=cfg.port)


app = create_app()
