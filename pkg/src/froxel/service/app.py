"""FastAPI app exposing the froxel pipelines.

One POST endpoint per pipeline plus GET /health.  Input problems surface as
HTTP 400 with a `detail` message; request-shape problems are FastAPI's usual
422.  Run it standalone with uvicorn:

    uvicorn froxel.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from . import pipeline, schemas

__all__ = ["app"]

app = FastAPI(title="froxel", version=__version__)


@app.exception_handler(ValueError)
async def _value_error_handler(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/gen-scene", response_model=schemas.GenSceneResponse)
def gen_scene(request: schemas.GenSceneRequest) -> schemas.GenSceneResponse:
    return pipeline.run_gen_scene(request)


@app.post("/add-noise", response_model=schemas.AddNoiseResponse)
def add_noise(request: schemas.AddNoiseRequest) -> schemas.AddNoiseResponse:
    return pipeline.run_add_noise(request)


@app.post("/bin", response_model=schemas.BinResponse)
def bin_lf(request: schemas.BinRequest) -> schemas.BinResponse:
    return pipeline.run_bin(request)


@app.post("/fristogram", response_model=schemas.FristogramResponse)
def fristogram(request: schemas.FristogramRequest) -> schemas.FristogramResponse:
    return pipeline.run_fristogram(request)


@app.post("/analyze", response_model=schemas.AnalyzeResponse)
def analyze(request: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    return pipeline.run_analyze(request)


@app.post("/reduce", response_model=schemas.ReduceResponse)
def reduce_lf(request: schemas.ReduceRequest) -> schemas.ReduceResponse:
    return pipeline.run_reduce(request)


@app.post("/synthesize", response_model=schemas.SynthesizeResponse)
def synthesize(request: schemas.SynthesizeRequest) -> schemas.SynthesizeResponse:
    return pipeline.run_synthesize(request)


@app.post("/metrics", response_model=schemas.MetricsResponse)
def metrics(request: schemas.MetricsRequest) -> schemas.MetricsResponse:
    return pipeline.run_metrics(request)
