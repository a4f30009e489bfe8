"""HTTP/JSON service for the operator UI: uploads, tuning jobs, models.

State is flat files under a data directory (uploaded CSVs, job records,
event logs, model files); a single background worker runs queued tuning
jobs one at a time and appends per-generation events that the UI consumes
over a server-sent event stream.
"""

from __future__ import annotations

import json
import logging
import queue
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, UploadFile
from fastapi.responses import FileResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from evotune.dataset import DataError, load_csv
from evotune.miga import GaSettings, SearchSpace, run_miga
from evotune.model_io import RowSchemaError, bundle_from_run, load_model, predict_rows, save_model
from evotune.pipeline import PipelineConfig, prepare
from evotune.summary import build_summary

logger = logging.getLogger(__name__)

DEFAULT_MAX_UPLOAD = 32 * 1024 * 1024

PENDING, RUNNING, DONE, FAILED = "pending", "running", "done", "failed"


class JobRequest(BaseModel):
    dataset_id: str
    target: str
    space: dict | None = None
    settings: dict | None = None
    use_kpca: bool = True
    holdout_fitness: bool = False
    standardize: bool = True
    knn_k: int = 5
    variance_target: float = 0.95
    gamma: float | None = None


class PredictRequest(BaseModel):
    rows: list[dict]


@dataclass
class JobRecord:
    id: str
    dataset_id: str
    target: str
    config: dict
    state: str = PENDING
    events: list[dict] = field(default_factory=list)
    summary: dict | None = None
    error: str | None = None
    created: float = field(default_factory=time.time)

    def public(self) -> dict:
        return {
            "job_id": self.id,
            "dataset_id": self.dataset_id,
            "target": self.target,
            "state": self.state,
            "generations_completed": len(self.events),
            "error": self.error,
        }


class ServiceState:
    """Job table, dataset registry, and the single-runner work queue."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        for sub in ("datasets", "jobs", "events", "models"):
            (self.data_dir / sub).mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()
        self.events_changed = threading.Condition(self.lock)
        self.datasets: dict[str, dict] = {}
        self.jobs: dict[str, JobRecord] = {}
        self.queue: "queue.Queue[str]" = queue.Queue()
        self._restore()
        self.worker = threading.Thread(target=self._run_jobs, daemon=True)
        self.worker.start()

    # paths

    def dataset_csv(self, dataset_id: str) -> Path:
        return self.data_dir / "datasets" / f"{dataset_id}.csv"

    def dataset_meta(self, dataset_id: str) -> Path:
        return self.data_dir / "datasets" / f"{dataset_id}.json"

    def job_path(self, job_id: str) -> Path:
        return self.data_dir / "jobs" / f"{job_id}.json"

    def events_path(self, job_id: str) -> Path:
        return self.data_dir / "events" / f"{job_id}.jsonl"

    def model_path(self, job_id: str) -> Path:
        return self.data_dir / "models" / f"{job_id}.json"

    # persistence

    def _restore(self) -> None:
        for meta in sorted((self.data_dir / "datasets").glob("*.json")):
            doc = json.loads(meta.read_text())
            self.datasets[doc["dataset_id"]] = doc
        for path in sorted((self.data_dir / "jobs").glob("*.json")):
            doc = json.loads(path.read_text())
            job = JobRecord(
                id=doc["job_id"],
                dataset_id=doc["dataset_id"],
                target=doc["target"],
                config=doc.get("config", {}),
                state=doc["state"],
                summary=doc.get("summary"),
                error=doc.get("error"),
                created=doc.get("created", 0.0),
            )
            events_file = self.events_path(job.id)
            if events_file.exists():
                job.events = [
                    json.loads(line)
                    for line in events_file.read_text().splitlines()
                    if line.strip()
                ]
            if job.state in (PENDING, RUNNING):
                job.state = FAILED
                job.error = "interrupted"
            self.jobs[job.id] = job
            self._persist_job(job)

    def _persist_job(self, job: JobRecord) -> None:
        doc = {
            "job_id": job.id,
            "dataset_id": job.dataset_id,
            "target": job.target,
            "config": job.config,
            "state": job.state,
            "summary": job.summary,
            "error": job.error,
            "created": job.created,
        }
        self.job_path(job.id).write_text(json.dumps(doc))

    # job execution

    def submit(self, job: JobRecord) -> None:
        with self.lock:
            self.jobs[job.id] = job
            self._persist_job(job)
        self.queue.put(job.id)

    def _run_jobs(self) -> None:
        while True:
            job_id = self.queue.get()
            job = self.jobs.get(job_id)
            if job is None:
                continue
            try:
                self._execute(job)
            except Exception as exc:
                logger.exception("job %s failed", job_id)
                with self.events_changed:
                    job.state = FAILED
                    job.error = str(exc)
                    self._persist_job(job)
                    self.events_changed.notify_all()

    def _execute(self, job: JobRecord) -> None:
        with self.events_changed:
            job.state = RUNNING
            self._persist_job(job)
            self.events_changed.notify_all()

        cfg = job.config
        pipeline_config = PipelineConfig(
            target_column=job.target,
            knn_k=cfg.get("knn_k", 5),
            use_kpca=cfg.get("use_kpca", True),
            use_standardize=cfg.get("standardize", True),
            variance_target=cfg.get("variance_target", 0.95),
            gamma=cfg.get("gamma"),
            holdout_fitness=cfg.get("holdout_fitness", False),
            seed=cfg.get("settings", {}).get("master_seed", 0),
        )
        space = SearchSpace.from_dict(cfg.get("space") or {})
        settings = GaSettings(**(cfg.get("settings") or {}))
        prepared = prepare(self.dataset_csv(job.dataset_id), pipeline_config)

        events_file = self.events_path(job.id)

        def on_generation(stats):
            event = {"type": "generation", **stats.to_dict()}
            with self.events_changed:
                job.events.append(event)
                with open(events_file, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(event) + "\n")
                self.events_changed.notify_all()

        result = run_miga(space, settings, prepared.split, progress=on_generation)
        summary = build_summary(prepared, result)

        if result.final_model is not None:
            bundle = bundle_from_run(
                prepared,
                result.final_model,
                train_config={
                    "hidden_layers": list(result.best.hidden_layers),
                    "activation": result.best.activation,
                    "learning_rate_init": result.best.learning_rate,
                    "solver": result.best.solver,
                    "max_iter": settings.max_iter,
                    "seed": result.best_seed,
                },
            )
            save_model(bundle, self.model_path(job.id))

        with self.events_changed:
            job.summary = summary
            job.state = DONE if result.final_model is not None else FAILED
            if result.final_model is None:
                job.error = summary.get("error", "training diverged")
            self._persist_job(job)
            self.events_changed.notify_all()


def create_app(
    data_dir, max_upload_bytes: int = DEFAULT_MAX_UPLOAD, ui_dir=None
) -> FastAPI:
    state = ServiceState(Path(data_dir))
    app = FastAPI(title="evotune service", version="0.1.0")
    app.state.service = state

    @app.post("/api/datasets")
    def upload_dataset(file: UploadFile):
        raw = file.file.read(max_upload_bytes + 1)
        if len(raw) > max_upload_bytes:
            raise HTTPException(status_code=413, detail="upload too large")
        if not raw:
            raise HTTPException(status_code=400, detail="empty upload")
        try:
            ds = load_csv(raw)
        except DataError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        dataset_id = secrets.token_hex(8)
        missing = ds.missing_count_by_column()
        meta = {
            "dataset_id": dataset_id,
            "filename": file.filename,
            "n_rows": ds.n_rows,
            "columns": [
                {
                    "name": name,
                    "kind": kind,
                    "missing_count": missing[j],
                }
                for j, (name, kind) in enumerate(zip(ds.column_names, ds.column_kinds))
            ],
        }
        state.dataset_csv(dataset_id).write_bytes(raw)
        state.dataset_meta(dataset_id).write_text(json.dumps(meta))
        with state.lock:
            state.datasets[dataset_id] = meta
        return meta

    @app.get("/api/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        meta = state.datasets.get(dataset_id)
        if meta is None:
            raise HTTPException(status_code=404, detail="unknown dataset")
        return meta

    @app.post("/api/jobs")
    def create_job(request: JobRequest):
        meta = state.datasets.get(request.dataset_id)
        if meta is None:
            raise HTTPException(status_code=404, detail="unknown dataset")
        if request.target not in [c["name"] for c in meta["columns"]]:
            raise HTTPException(
                status_code=422, detail=f"target {request.target!r} is not a column"
            )
        try:
            SearchSpace.from_dict(request.space or {})
            GaSettings(**(request.settings or {}))
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        job = JobRecord(
            id=secrets.token_hex(8),
            dataset_id=request.dataset_id,
            target=request.target,
            config={
                "space": request.space,
                "settings": request.settings or {},
                "use_kpca": request.use_kpca,
                "holdout_fitness": request.holdout_fitness,
                "standardize": request.standardize,
                "knn_k": request.knn_k,
                "variance_target": request.variance_target,
                "gamma": request.gamma,
            },
        )
        state.submit(job)
        return {"job_id": job.id}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return job.public()

    @app.get("/api/jobs/{job_id}/events")
    def job_events(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")

        def stream():
            sent = 0
            while True:
                with state.events_changed:
                    pending = job.events[sent:]
                    terminal = job.state in (DONE, FAILED)
                    summary = job.summary
                    error = job.error
                    if not pending and not terminal:
                        state.events_changed.wait(timeout=0.5)
                        continue
                for event in pending:
                    yield f"data: {json.dumps(event)}\n\n"
                    sent += 1
                if terminal and sent >= len(job.events):
                    final = {"type": "summary", **(summary or {})}
                    if error is not None:
                        final["error"] = error
                    yield f"data: {json.dumps(final)}\n\n"
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/models/{job_id}")
    def download_model(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state != DONE:
            raise HTTPException(status_code=409, detail=f"job is {job.state}, not done")
        return FileResponse(
            state.model_path(job_id),
            media_type="application/json",
            filename=f"evotune-model-{job_id}.json",
        )

    @app.post("/api/models/{job_id}/predict")
    def model_predict(job_id: str, request: PredictRequest):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state != DONE:
            raise HTTPException(status_code=409, detail=f"job is {job.state}, not done")
        if not request.rows:
            raise HTTPException(status_code=422, detail="rows must be non-empty")
        bundle = load_model(state.model_path(job_id))
        try:
            labels, probs = predict_rows(bundle, request.rows, strict_columns=True)
        except RowSchemaError as exc:
            raise HTTPException(
                status_code=422,
                detail={
                    "message": str(exc),
                    "missing_columns": exc.missing,
                    "unknown_columns": exc.unknown,
                },
            )
        return {"predictions": labels, "probabilities": probs.tolist()}

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def main(argv=None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="evotune-service")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--data-dir", default="service-data")
    parser.add_argument(
        "--ui-dir",
        default=None,
        help="directory of built UI assets to serve at / (default: frontend/dist if present)",
    )
    args = parser.parse_args(argv)
    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path("frontend") / "dist"
        ui_dir = candidate if candidate.is_dir() else None
    app = create_app(args.data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
