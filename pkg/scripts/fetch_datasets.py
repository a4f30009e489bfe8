#!/usr/bin/env python3
"""Download the three UCI datasets into data/ as header-first CSVs.

  chronic kidney disease -> data/ckd.csv         (target: classification)
  parkinsons             -> data/parkinsons.csv  (target: status)
  breast cancer (WDBC)   -> data/wdbc.csv        (target: Diagnosis)

The CKD archive ships as ARFF; it is converted here. The Parkinson file's
"name" recording-id column is dropped. WDBC falls back to the copy bundled
with scikit-learn when the UCI mirror is unreachable.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import zipfile
from pathlib import Path
from urllib.request import urlopen

CKD_ZIP = "https://archive.ics.uci.edu/static/public/336/chronic+kidney+disease.zip"
PARKINSONS_DATA = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/parkinsons/parkinsons.data"
)
WDBC_DATA = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "breast-cancer-wisconsin/wdbc.data"
)

WDBC_FEATURES = [
    f"{stat} {name}"
    for stat in ("mean", "se", "worst")
    for name in (
        "radius", "texture", "perimeter", "area", "smoothness", "compactness",
        "concavity", "concave points", "symmetry", "fractal dimension",
    )
]


def _download(url: str, timeout: float = 60.0) -> bytes:
    print(f"fetching {url}")
    with urlopen(url, timeout=timeout) as response:
        return response.read()


def _arff_to_csv(text: str, target_rename: dict[str, str]) -> str:
    """Minimal ARFF reader: attribute names + data section."""
    names: list[str] = []
    rows: list[list[str]] = []
    in_data = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        low = line.lower()
        if low.startswith("@attribute"):
            parts = line.split(None, 2)
            name = parts[1].strip("'\"")
            names.append(target_rename.get(name, name))
        elif low.startswith("@data"):
            in_data = True
        elif in_data:
            values = [v.strip().strip("'\"") for v in line.rstrip(",").split(",")]
            if len(values) == len(names):
                rows.append(values)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(names)
    writer.writerows(rows)
    return buf.getvalue()


def fetch_ckd(out: Path) -> None:
    raw = _download(CKD_ZIP)
    with zipfile.ZipFile(io.BytesIO(raw)) as zf:
        candidates = [
            n for n in zf.namelist()
            if n.lower().endswith(".arff") and "full" not in n.lower()
        ]
        text = zf.read(sorted(candidates)[0]).decode("utf-8", errors="replace")
    out.write_text(_arff_to_csv(text, {"class": "classification"}), encoding="utf-8")
    print(f"wrote {out}")


def fetch_parkinsons(out: Path) -> None:
    text = _download(PARKINSONS_DATA).decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    drop = header.index("name")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([h for i, h in enumerate(header) if i != drop])
    for row in reader:
        if row:
            writer.writerow([v for i, v in enumerate(row) if i != drop])
    out.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {out}")


def fetch_wdbc(out: Path) -> None:
    try:
        text = _download(WDBC_DATA).decode("utf-8")
    except OSError as exc:
        print(f"UCI unreachable ({exc}); using the scikit-learn copy")
        write_wdbc_from_sklearn(out)
        return
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(WDBC_FEATURES + ["Diagnosis"])
    for row in csv.reader(io.StringIO(text)):
        if row:
            writer.writerow(row[2:] + [row[1]])  # drop id, move diagnosis last
    out.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {out}")


def write_wdbc_from_sklearn(out: Path) -> None:
    """The WDBC data bundled with scikit-learn is the same 569-row dataset."""
    from sklearn.datasets import load_breast_cancer

    data = load_breast_cancer()
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(list(data.feature_names) + ["Diagnosis"])
    for x, y in zip(data.data, data.target):
        label = "M" if data.target_names[y] == "malignant" else "B"
        writer.writerow([repr(float(v)) for v in x] + [label])
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(buf.getvalue(), encoding="utf-8")
    print(f"wrote {out} (from scikit-learn)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data-dir", default="data")
    parser.add_argument(
        "--only", choices=("ckd", "parkinsons", "wdbc"), default=None,
        help="fetch a single dataset",
    )
    args = parser.parse_args(argv)
    data_dir = Path(args.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    jobs = {
        "ckd": lambda: fetch_ckd(data_dir / "ckd.csv"),
        "parkinsons": lambda: fetch_parkinsons(data_dir / "parkinsons.csv"),
        "wdbc": lambda: fetch_wdbc(data_dir / "wdbc.csv"),
    }
    selected = [args.only] if args.only else list(jobs)
    failures = 0
    for name in selected:
        try:
            jobs[name]()
        except Exception as exc:
            print(f"failed to fetch {name}: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
