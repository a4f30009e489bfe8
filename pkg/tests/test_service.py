"""HTTP service tests through the ASGI test client."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from evotune.service import ServiceState, create_app

SMALL_SPACE = {
    "hidden_layer_options": [[6]],
    "activation_options": ["tanh"],
    "learning_rate_options": [0.05],
    "solver_options": ["adam"],
}
SMALL_SETTINGS = {"population_size": 4, "generations": 2, "master_seed": 3,
                  "workers": 1, "max_iter": 40}


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


def upload(client, body: bytes, name="data.csv"):
    return client.post("/api/datasets", files={"file": (name, body, "text/csv")})


def wait_for_job(client, job_id, timeout=120.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        record = client.get(f"/api/jobs/{job_id}").json()
        if record["state"] in ("done", "failed"):
            return record
        time.sleep(0.05)
    raise TimeoutError(f"job {job_id} did not finish")


def start_small_job(client, tiny_csv_bytes, **overrides):
    dataset_id = upload(client, tiny_csv_bytes).json()["dataset_id"]
    body = {
        "dataset_id": dataset_id,
        "target": "outcome",
        "space": SMALL_SPACE,
        "settings": SMALL_SETTINGS,
    }
    body.update(overrides)
    response = client.post("/api/jobs", json=body)
    assert response.status_code == 200, response.text
    return response.json()["job_id"]


class TestDatasets:
    def test_upload_returns_column_metadata(self, client, tiny_csv_bytes):
        response = upload(client, tiny_csv_bytes)
        assert response.status_code == 200
        meta = response.json()
        assert meta["n_rows"] == 20
        by_name = {c["name"]: c for c in meta["columns"]}
        assert set(by_name) == {"age", "bp", "pc", "grade", "outcome"}
        assert by_name["bp"]["missing_count"] == 3
        assert by_name["age"]["kind"] == "numeric"
        assert by_name["pc"]["kind"] == "categorical"

    def test_parse_failure_reports_row(self, client):
        response = upload(client, b"a,b\n1,2\n1,2,3\n")
        assert response.status_code == 400
        assert "row 3" in response.json()["detail"]

    def test_empty_upload(self, client):
        response = upload(client, b"")
        assert response.status_code == 400

    def test_oversize_upload(self, tmp_path):
        app = create_app(tmp_path / "small", max_upload_bytes=64)
        with TestClient(app) as c:
            response = upload(c, b"a,b\n" + b"1,2\n" * 200)
            assert response.status_code == 413

    def test_get_dataset_meta(self, client, tiny_csv_bytes):
        dataset_id = upload(client, tiny_csv_bytes).json()["dataset_id"]
        assert client.get(f"/api/datasets/{dataset_id}").json()["n_rows"] == 20
        assert client.get("/api/datasets/missing").status_code == 404


class TestJobs:
    def test_job_runs_to_done(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        record = wait_for_job(client, job_id)
        assert record["state"] == "done"
        assert record["generations_completed"] == 2

    def test_unknown_dataset_404(self, client):
        response = client.post(
            "/api/jobs", json={"dataset_id": "nope", "target": "outcome"}
        )
        assert response.status_code == 404

    def test_bad_target_422(self, client, tiny_csv_bytes):
        dataset_id = upload(client, tiny_csv_bytes).json()["dataset_id"]
        response = client.post(
            "/api/jobs", json={"dataset_id": dataset_id, "target": "nope"}
        )
        assert response.status_code == 422

    def test_bad_settings_422(self, client, tiny_csv_bytes):
        dataset_id = upload(client, tiny_csv_bytes).json()["dataset_id"]
        response = client.post(
            "/api/jobs",
            json={
                "dataset_id": dataset_id,
                "target": "outcome",
                "settings": {"generations": 0},
            },
        )
        assert response.status_code == 422

    def test_bad_space_422(self, client, tiny_csv_bytes):
        dataset_id = upload(client, tiny_csv_bytes).json()["dataset_id"]
        response = client.post(
            "/api/jobs",
            json={
                "dataset_id": dataset_id,
                "target": "outcome",
                "space": {"activation_options": []},
            },
        )
        assert response.status_code == 422

    def test_two_jobs_queue_fifo(self, client, tiny_csv_bytes):
        first = start_small_job(client, tiny_csv_bytes)
        second = start_small_job(client, tiny_csv_bytes)
        assert wait_for_job(client, first)["state"] == "done"
        assert wait_for_job(client, second)["state"] == "done"


class TestEvents:
    def read_events(self, client, job_id):
        events = []
        with client.stream("GET", f"/api/jobs/{job_id}/events") as response:
            assert response.status_code == 200
            for line in response.iter_lines():
                if line.startswith("data: "):
                    events.append(json.loads(line[len("data: "):]))
        return events

    def test_completed_job_replays_generations_plus_summary(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        events = self.read_events(client, job_id)
        kinds = [e["type"] for e in events]
        assert kinds == ["generation", "generation", "summary"]
        assert [e["generation"] for e in events[:2]] == [1, 2]
        summary = events[-1]
        assert "best_chromosome" in summary
        assert "test_accuracy" in summary
        assert "confusion_matrix" in summary
        assert "classification_report" in summary
        total = sum(sum(row) for row in summary["confusion_matrix"])
        assert total == 4  # test split of the 20-row fixture

    def test_replay_is_idempotent(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        first = self.read_events(client, job_id)
        second = self.read_events(client, job_id)
        assert first == second

    def test_live_stream_during_run(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        events = self.read_events(client, job_id)  # follows until summary
        assert events[-1]["type"] == "summary"
        assert len(events) == 3

    def test_unknown_job_404(self, client):
        assert client.get("/api/jobs/nope/events").status_code == 404


class TestModels:
    def test_download_and_predict_round_trip(self, client, tiny_csv_bytes, tmp_path):
        from evotune.cli import main as cli_main

        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        response = client.get(f"/api/models/{job_id}")
        assert response.status_code == 200
        assert "attachment" in response.headers.get("content-disposition", "")
        model_path = tmp_path / "downloaded.json"
        model_path.write_bytes(response.content)

        data_path = tmp_path / "tiny.csv"
        data_path.write_bytes(tiny_csv_bytes)
        assert cli_main(["predict", "--model", str(model_path), "--data", str(data_path)]) == 0

    def test_model_409_while_not_done(self, client, tiny_csv_bytes):
        state: ServiceState = client.app.state.service
        from evotune.service import JobRecord

        job = JobRecord(id="held", dataset_id="x", target="y", config={})
        with state.lock:
            state.jobs["held"] = job
        assert client.get("/api/models/held").status_code == 409

    def test_model_404_unknown(self, client):
        assert client.get("/api/models/nope").status_code == 404

    def test_predict_endpoint(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        rows = [
            {"age": 53, "bp": 90, "pc": "abnormal", "grade": "b"},
            {"age": 25, "bp": 80, "pc": "normal", "grade": "b"},
        ]
        response = client.post(f"/api/models/{job_id}/predict", json={"rows": rows})
        assert response.status_code == 200
        body = response.json()
        assert body["predictions"] == ["sick", "healthy"]
        for probs in body["probabilities"]:
            assert abs(sum(probs) - 1.0) < 1e-9

    def test_predict_empty_rows_422(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        response = client.post(f"/api/models/{job_id}/predict", json={"rows": []})
        assert response.status_code == 422

    def test_predict_bad_columns_422(self, client, tiny_csv_bytes):
        job_id = start_small_job(client, tiny_csv_bytes)
        wait_for_job(client, job_id)
        response = client.post(
            f"/api/models/{job_id}/predict", json={"rows": [{"age": 4, "wat": 1}]}
        )
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert "pc" in detail["missing_columns"]
        assert detail["unknown_columns"] == ["wat"]


class TestRecovery:
    def test_interrupted_jobs_marked_failed(self, tmp_path, tiny_csv_bytes):
        data_dir = tmp_path / "data"
        app = create_app(data_dir)
        with TestClient(app) as c:
            job_id = start_small_job(c, tiny_csv_bytes)
            wait_for_job(c, job_id)
        # forge a job left "running" by a crash
        crashed = {
            "job_id": "crashed1",
            "dataset_id": "whatever",
            "target": "outcome",
            "config": {},
            "state": "running",
            "summary": None,
            "error": None,
            "created": 0.0,
        }
        (data_dir / "jobs" / "crashed1.json").write_text(json.dumps(crashed))

        app2 = create_app(data_dir)
        with TestClient(app2) as c2:
            record = c2.get("/api/jobs/crashed1").json()
            assert record["state"] == "failed"
            assert record["error"] == "interrupted"
            # finished jobs survive the restart
            survived = c2.get(f"/api/jobs/{job_id}").json()
            assert survived["state"] == "done"
            assert c2.get(f"/api/models/{job_id}").status_code == 200
