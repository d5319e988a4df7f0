"""HTTP/JSON service exposing the replay pipeline.

All errors come back as JSON objects of the form {"error": ..., "detail":
...}. Datasets are immutable once uploaded; partition views are cached per
(dataset, timestamp, whole-meter range), so the range slider in the UI can
sweep cheaply over previously visited values.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from bsmsim.bench import aggregate_timings, run_benchmark
from bsmsim.bsm_data import CsvParseError, DatasetStore, parse_csv
from bsmsim.generator import DEFAULT_RECTANGLE, GeneratorConfig, Rectangle, generate
from bsmsim.views import FrameViewCache

DEFAULT_RANGE_M = 1000.0


class GenerateRequest(BaseModel):
    vehicles_per_frame: int = Field(ge=1)
    seed: int = 0
    frame_interval_ms: int = Field(default=100, gt=0)
    max_file_kb: int = Field(default=5000, gt=0)
    lat_min: float = DEFAULT_RECTANGLE.lat_min
    lat_max: float = DEFAULT_RECTANGLE.lat_max
    lon_min: float = DEFAULT_RECTANGLE.lon_min
    lon_max: float = DEFAULT_RECTANGLE.lon_max


class BenchRequest(BaseModel):
    range_m: float = Field(default=DEFAULT_RANGE_M, gt=0)
    repetitions: int = Field(default=1, ge=1)


def create_app(store: DatasetStore | None = None, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="bsmsim", version="0.1.0")
    app.state.store = store if store is not None else DatasetStore()
    app.state.cache = FrameViewCache()

    @app.exception_handler(HTTPException)
    async def http_error(_request: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": _error_name(exc.status_code), "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "validation", "detail": str(exc.errors())},
        )

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(request: Request):
        body = await request.body()
        try:
            dataset = parse_csv(body)
        except CsvParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        app.state.store.put(dataset, raw_csv=body)
        return dataset.summary()

    @app.get("/api/datasets")
    async def list_datasets():
        return app.state.store.summaries()

    @app.get("/api/datasets/{dataset_id}/frames")
    async def list_frames(dataset_id: str):
        dataset = app.state.store.get(dataset_id)
        if dataset is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id}")
        return {"dataset_id": dataset_id, "timestamps": dataset.timestamps}

    @app.get("/api/datasets/{dataset_id}/frames/{timestamp}")
    async def frame_view(
        dataset_id: str,
        timestamp: int,
        range_m: float = Query(default=DEFAULT_RANGE_M, gt=0),
    ):
        dataset = app.state.store.get(dataset_id)
        if dataset is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id}")
        frame = dataset.frame_at(timestamp)
        if frame is None:
            raise HTTPException(
                status_code=404, detail=f"no frame at t={timestamp} in dataset {dataset_id}"
            )
        view = app.state.cache.get_or_compute(dataset_id, frame, range_m)
        return view.to_dict()

    @app.post("/api/generate", status_code=201)
    async def generate_dataset(req: GenerateRequest):
        try:
            config = GeneratorConfig(
                vehicles_per_frame=req.vehicles_per_frame,
                rectangle=Rectangle(req.lat_min, req.lat_max, req.lon_min, req.lon_max),
                frame_interval_ms=req.frame_interval_ms,
                max_file_kb=req.max_file_kb,
                seed=req.seed,
            )
            dataset, raw_csv = generate(config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        app.state.store.put(dataset, raw_csv=raw_csv)
        return dataset.summary()

    @app.post("/api/datasets/{dataset_id}/bench")
    async def bench_dataset(dataset_id: str, req: BenchRequest):
        dataset = app.state.store.get(dataset_id)
        if dataset is None:
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id}")
        timings = run_benchmark(dataset, req.range_m, req.repetitions)
        return aggregate_timings(timings).to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _error_name(status_code: int) -> str:
    return {
        400: "bad_request",
        404: "not_found",
        422: "validation",
    }.get(status_code, "error")
