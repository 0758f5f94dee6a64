"""FastAPI application exposing the toolkit as a stateless compute service."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="tflattice",
        description="Time-frequency lattice toolkit: region verdicts, norms, "
                    "phase-space distributions, and scaling experiments.",
        version="0.1.0",
    )

    def guard(fn, req):
        try:
            return fn(req)
        except handlers.InputError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/check", response_model=models.VerdictResponse)
    def check(req: models.CheckRequest):
        return guard(handlers.run_check, req)

    @app.post("/scan", response_model=models.ScanResponse)
    def scan(req: models.ScanRequest):
        return guard(handlers.run_scan, req)

    @app.post("/norm", response_model=models.NormResponse)
    def norm(req: models.NormRequest):
        return guard(handlers.run_norm, req)

    @app.post("/rihaczek")
    def rihaczek_endpoint(req: models.RihaczekRequest):
        out = guard(handlers.run_rihaczek, req)
        return out.model_dump(by_alias=True)

    @app.post("/experiment", response_model=models.ExperimentResponse)
    def experiment(req: models.ExperimentRequest):
        return guard(handlers.run_experiment, req)

    return app


app = create_app()
