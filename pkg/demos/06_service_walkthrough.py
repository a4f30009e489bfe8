"""Drive the HTTP service end to end without leaving Python.

Uses the in-process test client; the same requests work against a live
`python -m evotune.service` with any HTTP client. Upload a CSV, start a
tuning job, follow the generation event stream, download the model, and
score rows with it.
"""

import json
import tempfile

from fastapi.testclient import TestClient

from evotune.service import create_app

data_dir = tempfile.mkdtemp(prefix="evotune-demo-")
client = TestClient(create_app(data_dir))

with open("tests/data/parkinsons_synthetic.csv", "rb") as fh:
    meta = client.post(
        "/api/datasets", files={"file": ("parkinsons.csv", fh, "text/csv")}
    ).json()
print(f"uploaded dataset {meta['dataset_id']}: {meta['n_rows']} rows")
print("columns:", [c["name"] for c in meta["columns"]][:5], "...")

job = client.post(
    "/api/jobs",
    json={
        "dataset_id": meta["dataset_id"],
        "target": "status",
        "settings": {
            "population_size": 4,
            "generations": 3,
            "master_seed": 0,
            "max_iter": 100,
        },
    },
).json()
print("job started:", job["job_id"])

# the event stream replays history and then follows the live run
summary = None
with client.stream("GET", f"/api/jobs/{job['job_id']}/events") as response:
    for line in response.iter_lines():
        if not line.startswith("data: "):
            continue
        event = json.loads(line[len("data: "):])
        if event["type"] == "generation":
            print(f"  gen {event['generation']}: best_so_far={event['best_so_far']:.4f}")
        else:
            summary = event

print("test accuracy:", summary["test_accuracy"])
print("confusion matrix:", summary["confusion_matrix"])

model_bytes = client.get(f"/api/models/{job['job_id']}").content
print(f"model download: {len(model_bytes)} bytes")

rows = [
    {c["name"]: None for c in meta["columns"] if c["name"] != "status"},
]
prediction = client.post(
    f"/api/models/{job['job_id']}/predict", json={"rows": rows}
).json()
print("all-missing row scores as:", prediction["predictions"][0],
      "with probabilities", [round(p, 3) for p in prediction["probabilities"][0]])
