#!/usr/bin/env python3
"""Regenerate the committed synthetic stand-in datasets under tests/data/.

These mirror the shape, class balance, target naming, and missing-value
profile of the chronic-kidney-disease and Parkinson voice datasets so the
full pipeline can be exercised where the UCI files have not been fetched.
They are generated from fixed seeds; rerunning this script is a no-op diff.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

CKD_ROWS = 400
CKD_POSITIVE = 250  # class "ckd"
PARKINSONS_ROWS = 195
PARKINSONS_POSITIVE = 147  # status 1

# per-column missing counts, summing to exactly 1009 like the real file
CKD_MISSING = {
    "age": 9, "bp": 12, "sg": 47, "al": 46, "su": 49, "rbc": 152, "pc": 65,
    "pcc": 4, "ba": 4, "bgr": 44, "bu": 19, "sc": 17, "sod": 87, "pot": 88,
    "hemo": 52, "pcv": 70, "wc": 105, "rc": 130, "htn": 2, "dm": 2, "cad": 2,
    "appet": 1, "pe": 1, "ane": 1, "sex": 0,
}

PARKINSONS_FEATURES = [
    "MDVP:Fo(Hz)", "MDVP:Fhi(Hz)", "MDVP:Flo(Hz)", "MDVP:Jitter(%)",
    "MDVP:Jitter(Abs)", "MDVP:RAP", "MDVP:PPQ", "Jitter:DDP", "MDVP:Shimmer",
    "MDVP:Shimmer(dB)", "Shimmer:APQ3", "Shimmer:APQ5", "MDVP:APQ",
    "Shimmer:DDA", "NHR", "HNR", "RPDE", "DFA", "spread1", "spread2", "D2", "PPE",
]


def _categorical(rng, sick, p_sick, p_healthy, yes, no):
    p = p_sick if sick else p_healthy
    return yes if rng.random() < p else no


def make_ckd_rows(rng: np.random.Generator) -> tuple[list[str], list[list[str]]]:
    header = list(CKD_MISSING) + ["classification"]
    rows = []
    labels = [True] * CKD_POSITIVE + [False] * (CKD_ROWS - CKD_POSITIVE)
    rng.shuffle(labels)
    for sick in labels:
        hemo = rng.normal(10.6, 1.9) if sick else rng.normal(15.2, 1.0)
        pcv = hemo * 3.0 + rng.normal(0, 1.6)
        sc = abs(rng.normal(3.4, 2.6)) + 0.6 if sick else abs(rng.normal(0.9, 0.25))
        bu = sc * 12 + rng.normal(28, 10)
        sg = rng.choice([1.005, 1.010, 1.015, 1.020]) if sick else rng.choice([1.020, 1.025])
        al = rng.choice([0, 1, 2, 3, 4], p=[0.30, 0.20, 0.20, 0.18, 0.12]) if sick else 0
        su = rng.choice([0, 1, 2, 3], p=[0.62, 0.18, 0.12, 0.08]) if sick else 0
        bgr = rng.normal(175, 75) if sick else rng.normal(108, 18)
        sod = rng.normal(134, 6) if sick else rng.normal(141, 3.5)
        pot = abs(rng.normal(4.9, 1.3)) if sick else rng.normal(4.3, 0.5)
        wc = rng.normal(9100, 2900) if sick else rng.normal(7600, 1700)
        rc = rng.normal(3.9, 0.8) if sick else rng.normal(5.3, 0.5)
        age = rng.normal(56, 15) if sick else rng.normal(46, 15)
        bp = rng.choice([60, 70, 80, 90, 100], p=[0.04, 0.22, 0.40, 0.24, 0.10]) if sick \
            else rng.choice([60, 70, 80], p=[0.25, 0.40, 0.35])

        row = {
            "age": f"{max(int(round(age)), 3)}",
            "bp": f"{int(bp)}",
            "sg": f"{sg:.3f}",
            "al": f"{int(al)}",
            "su": f"{int(su)}",
            "rbc": _categorical(rng, sick, 0.35, 0.04, "abnormal", "normal"),
            "pc": _categorical(rng, sick, 0.45, 0.03, "abnormal", "normal"),
            "pcc": _categorical(rng, sick, 0.25, 0.01, "present", "notpresent"),
            "ba": _categorical(rng, sick, 0.12, 0.005, "present", "notpresent"),
            "bgr": f"{max(bgr, 55):.0f}",
            "bu": f"{max(bu, 8):.0f}",
            "sc": f"{sc:.1f}",
            "sod": f"{sod:.0f}",
            "pot": f"{max(pot, 2.4):.1f}",
            "hemo": f"{np.clip(hemo, 3.5, 18.5):.1f}",
            "pcv": f"{np.clip(pcv, 12, 55):.0f}",
            "wc": f"{int(round(max(wc, 2500) / 100) * 100)}",
            "rc": f"{np.clip(rc, 2.0, 7.0):.1f}",
            "htn": _categorical(rng, sick, 0.60, 0.02, "yes", "no"),
            "dm": _categorical(rng, sick, 0.55, 0.02, "yes", "no"),
            "cad": _categorical(rng, sick, 0.15, 0.02, "yes", "no"),
            "appet": _categorical(rng, sick, 0.33, 0.02, "poor", "good"),
            "pe": _categorical(rng, sick, 0.30, 0.02, "yes", "no"),
            "ane": _categorical(rng, sick, 0.30, 0.01, "yes", "no"),
            "sex": rng.choice(["male", "female"]),
            "classification": "ckd" if sick else "notckd",
        }
        rows.append([row[name] for name in header])
    return header, rows


def punch_holes(rng: np.random.Generator, header, rows, missing_counts) -> None:
    """Blank exactly the configured number of cells per column, in place."""
    n = len(rows)
    for name, count in missing_counts.items():
        j = header.index(name)
        victims = rng.choice(n, size=count, replace=False)
        for i in victims:
            rows[int(i)][j] = "?"


def make_parkinsons_rows(rng: np.random.Generator) -> tuple[list[str], list[list[str]]]:
    """Voice-measure lookalike with partially overlapping classes.

    Each feature mixes a shared per-subject severity latent with feature
    noise; the mixing weights keep roughly 2-4 of the 39 test rows on the
    wrong side for a tuned classifier, like the real recordings.
    """
    header = PARKINSONS_FEATURES + ["status"]
    d = len(PARKINSONS_FEATURES)
    loadings = rng.uniform(0.35, 1.0, size=d) * rng.choice([-1, 1], size=d)
    scales = np.concatenate([
        [40, 90, 30],                # frequencies
        [0.004, 0.00004, 0.002, 0.002, 0.006],  # jitter family
        [0.02, 0.2, 0.01, 0.012, 0.016, 0.03],  # shimmer family
        [0.02, 4.5],                 # NHR, HNR
        [0.09, 0.06, 1.1, 0.09, 0.7, 0.09],     # nonlinear measures
    ])
    centers = np.array([
        154, 197, 116,
        0.0062, 0.000044, 0.0033, 0.0034, 0.0099,
        0.0297, 0.282, 0.0157, 0.0179, 0.024, 0.0470,
        0.0248, 21.9,
        0.499, 0.718, -5.68, 0.227, 2.38, 0.207,
    ])
    rows = []
    labels = [1] * PARKINSONS_POSITIVE + [0] * (PARKINSONS_ROWS - PARKINSONS_POSITIVE)
    rng.shuffle(labels)
    for status in labels:
        severity = rng.normal(1.45 if status else -1.45, 0.92)
        noise = rng.normal(0, 0.60, size=d)
        values = centers + scales * (loadings * severity + noise)
        row = [f"{v:.6g}" for v in values] + [str(status)]
        rows.append(row)
    return header, rows


def write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows x {len(header)} cols)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="tests/data")
    args = parser.parse_args(argv)
    out_dir = Path(args.out_dir)

    rng = np.random.default_rng(20240816)
    header, rows = make_ckd_rows(rng)
    punch_holes(rng, header, rows, CKD_MISSING)
    assert sum(cell == "?" for row in rows for cell in row) == 1009
    write_csv(out_dir / "ckd_synthetic.csv", header, rows)

    rng = np.random.default_rng(9090126)
    header, rows = make_parkinsons_rows(rng)
    write_csv(out_dir / "parkinsons_synthetic.csv", header, rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
