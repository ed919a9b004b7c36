#!/usr/bin/env python3
"""Regenerate the committed small k-means fixtures (tests/data/kmeans_fixtures.json).

Each fixture has at most 7 points, so the acceptance suite can compare
best-of-20-seeds k-means against the exhaustive-partition optimum.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "kmeans_fixtures.json"


def main() -> None:
    rng = np.random.default_rng(2024)
    fixtures = []

    # structured: two tight lobes
    fixtures.append({
        "name": "two-lobes",
        "k": 2,
        "points": [[1.0, 1.0], [1.1, 1.0], [1.0, 1.1], [3.0, 3.0], [3.1, 3.0], [2.9, 3.2]],
    })
    # structured: three unit directions, near-duplicates
    fixtures.append({
        "name": "three-axes",
        "k": 3,
        "points": [[1, 0, 0], [0.99, 0.01, 0], [0, 1, 0], [0, 0.98, 0.02],
                   [0, 0, 1], [0.02, 0, 0.97], [0.5, 0.5, 0.0]],
    })
    for i in range(6):
        n = int(rng.integers(4, 8))
        d = int(rng.integers(2, 5))
        k = int(rng.integers(2, min(n, 4) + 1))
        points = rng.normal(size=(n, d))
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        fixtures.append({
            "name": f"random-{i}",
            "k": k,
            "points": [[round(float(x), 6) for x in row] for row in points],
        })

    OUT.write_text(json.dumps({"fixtures": fixtures}, indent=2) + "\n", "utf-8")
    print(f"wrote {len(fixtures)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
