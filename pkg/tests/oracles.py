"""Independent reference implementations used to check the engine.

These stay deliberately naive (full-matrix DP, exhaustive enumeration,
augmenting-path matching) and share no code with the package.
"""

from __future__ import annotations

import itertools

import numpy as np


def levenshtein_matrix(a: str, b: str) -> int:
    """Textbook full-matrix edit distance."""
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[m][n]


def fuzzy_oracle(a: str, b: str) -> float:
    na = " ".join(a.lower().split())
    nb = " ".join(b.lower().split())
    if not na and not nb:
        return 1.0
    return 1.0 - levenshtein_matrix(na, nb) / max(len(na), len(nb))


def partition_cost(points: np.ndarray, groups: list[list[int]]) -> float:
    total = 0.0
    for group in groups:
        block = points[group]
        center = block.mean(axis=0)
        total += float(((block - center) ** 2).sum())
    return total


def iter_partitions(n: int, max_parts: int):
    """All partitions of range(n) into at most max_parts non-empty groups,
    enumerated via canonical (restricted growth) labelings."""
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            groups: dict[int, list[int]] = {}
            for idx, lab in enumerate(labels):
                groups.setdefault(lab, []).append(idx)
            yield [groups[k] for k in sorted(groups)]
            return
        for lab in range(min(used + 1, max_parts)):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    yield from rec(0, 0)


def best_partition(points: np.ndarray, k: int) -> tuple[float, list[list[int]]]:
    """Exhaustive k-means optimum: min total within-group sum of squares over
    every partition into at most k groups."""
    best_cost = float("inf")
    best_groups: list[list[int]] = []
    for groups in iter_partitions(points.shape[0], k):
        cost = partition_cost(points, groups)
        if cost < best_cost - 1e-12:
            best_cost = cost
            best_groups = groups
    return best_cost, best_groups


def max_matching_tp(predictions: list[str], golds: list[str], theta: float, scorer) -> int:
    """Maximum bipartite matching size over the >= theta edge graph."""
    edges = [
        [gi for gi, g in enumerate(golds) if scorer(p, g) >= theta]
        for p in predictions
    ]
    match_of_gold: dict[int, int] = {}

    def augment(pi: int, seen: set[int]) -> bool:
        for gi in edges[pi]:
            if gi in seen:
                continue
            seen.add(gi)
            if gi not in match_of_gold or augment(match_of_gold[gi], seen):
                match_of_gold[gi] = pi
                return True
        return False

    count = 0
    for pi in range(len(predictions)):
        if augment(pi, set()):
            count += 1
    return count


def rank_by_mean_similarity(member_ids: list[str], vectors: dict[str, np.ndarray]) -> list[str]:
    """O(n^2) mean pairwise-cosine ranking; singleton scores 1."""
    def cos(u, v):
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu == 0 or nv == 0:
            return 0.0
        return float(np.dot(u, v) / (nu * nv))

    scores = {}
    for qid in member_ids:
        others = [cos(vectors[qid], vectors[o]) for o in member_ids if o != qid]
        scores[qid] = sum(others) / len(others) if others else 1.0
    return sorted(member_ids, key=lambda q: (-scores[q], q))
