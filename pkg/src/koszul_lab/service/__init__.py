"""FastAPI service wrapping the core package.

The service is stateless: every request carries the full script or
presentation.  POST /run is the workhorse; the CLI is a thin client of it
(in-process by default, over HTTP with --server).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import Budget
from ..constructions import preset
from ..errors import InvalidParamsError
from ..runner import RunOptions, RunResult, run_script
from .schemas import (
    HealthResponse,
    PresentationDescriptor,
    PresetRequest,
    RunRequest,
    RunResponse,
)

SERVICE_NAME = "koszul-lab"


def execute_run(request: RunRequest) -> RunResponse:
    """Shared by the POST /run route and the in-process CLI path."""
    budget = Budget.from_int(request.budget) if request.budget else Budget.from_env()
    options = RunOptions(degree=request.degree, threads=request.threads, budget=budget)
    result: RunResult = run_script(request.script, options)
    return RunResponse(
        exit_code=result.exit_code,
        report=result.report,
        dot_files=result.dot_files,
        dot_dir_hint=result.dot_dir_hint,
        json_path_hint=result.json_path_hint,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="koszul-lab",
        description="Exact Koszulity computations for quadratic algebras over F_p",
        version=__version__,
    )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", name=SERVICE_NAME, version=__version__)

    @app.post("/run", response_model=RunResponse)
    def run(request: RunRequest):
        return execute_run(request)

    @app.post("/presets", response_model=PresentationDescriptor)
    def build_preset(request: PresetRequest):
        try:
            pres = preset(request.kind, **request.params)
        except InvalidParamsError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return PresentationDescriptor(
            p=pres.p,
            generators=list(pres.generator_names),
            relations=pres.relator_texts(),
            provenance=pres.provenance,
        )

    @app.get("/schema")
    def report_schema():
        from ..report_schema import REPORT_SCHEMA

        return REPORT_SCHEMA

    return app
