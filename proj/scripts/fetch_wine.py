#!/usr/bin/env python3
"""Fetch the UCI Wine dataset into data/wine.csv (178 rows, 13 features).

Tries the UCI repository first and falls back to scikit-learn's bundled
copy of the same file when the network is unavailable.
"""

import io
import os
import sys
import urllib.request

UCI_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/wine/wine.data"
FEATURES = [
    "alcohol", "malic_acid", "ash", "alcalinity_of_ash", "magnesium",
    "total_phenols", "flavanoids", "nonflavanoid_phenols", "proanthocyanins",
    "color_intensity", "hue", "od280_od315_of_diluted_wines", "proline",
]


def fmt(value: float) -> str:
    return str(int(value)) if value == int(value) else repr(value)


def from_uci() -> list[str]:
    with urllib.request.urlopen(UCI_URL, timeout=30) as resp:
        raw = resp.read().decode("ascii")
    rows = []
    for line in raw.strip().splitlines():
        cells = line.split(",")
        label, values = cells[0], [fmt(float(v)) for v in cells[1:]]
        rows.append(",".join(values + [label]))
    return rows


def from_sklearn() -> list[str]:
    from sklearn.datasets import load_wine

    wine = load_wine()
    rows = []
    for sample, target in zip(wine.data, wine.target):
        values = [fmt(float(v)) for v in sample]
        rows.append(",".join(values + [str(int(target) + 1)]))
    return rows


def main() -> int:
    out_path = os.path.join(os.path.dirname(__file__), "..", "data", "wine.csv")
    out_path = os.path.normpath(out_path)
    try:
        rows = from_uci()
        source = "UCI repository"
    except Exception as net_err:  # noqa: BLE001 - any network failure falls back
        try:
            rows = from_sklearn()
            source = "scikit-learn bundled copy"
        except Exception:
            print(f"download failed ({net_err}) and scikit-learn is unavailable", file=sys.stderr)
            return 1
    if len(rows) != 178:
        print(f"unexpected row count {len(rows)}", file=sys.stderr)
        return 1
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    with io.open(out_path, "w", newline="\n") as out:
        out.write(",".join(FEATURES + ["class"]) + "\n")
        out.write("\n".join(rows) + "\n")
    print(f"wrote {out_path} from the {source}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
