"""K-means clustering and representative-question selection.

The clustering core is deliberately hand-rolled rather than delegated: the
engine needs k-means++ seeding under one seed, fixed tie-breaking (lowest
cluster id wins), deterministic empty-cluster repair and an in-loop check
that the Lloyd objective never increases, so that identical inputs always
produce byte-identical sessions.

Input vectors are L2-normalized upstream (spherical clustering via Euclidean
Lloyd). Zero "degenerate" vectors are excluded from fitting and then attached
to the cluster of their nearest non-degenerate neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadKError

MAX_ITERATIONS = 100
SHIFT_TOLERANCE = 1e-6


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray                 # k x dim, unit-norm (zero rows are degenerate)
    assignment: dict[str, int]            # question id -> cluster id in [0, k)
    inertia: float
    seed: int

    def members(self, cluster_id: int) -> list[str]:
        return [qid for qid, cid in self.assignment.items() if cid == cluster_id]

    def member_map(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {cid: [] for cid in range(self.k)}
        for qid, cid in self.assignment.items():
            out[cid].append(qid)
        return out

    def degenerate_centroids(self) -> list[bool]:
        return [not bool(row.any()) for row in self.centroids]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "centroids": self.centroids.tolist(),
            "assignment": self.assignment,
            "inertia": self.inertia,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClusterModel":
        return cls(
            k=int(d["k"]),
            centroids=np.asarray(d["centroids"], dtype=float),
            assignment={k: int(v) for k, v in d["assignment"].items()},
            inertia=float(d["inertia"]),
            seed=int(d["seed"]),
        )


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    out = matrix.copy()
    for i in range(out.shape[0]):
        norm = float(np.linalg.norm(out[i]))
        if norm > 0:
            out[i] /= norm
        else:
            out[i] = 0.0
    return out


def _plusplus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(0, n))]
    for _ in range(1, k):
        d2 = np.min(
            ((points[:, None, :] - points[chosen][None, :, :]) ** 2).sum(axis=2), axis=1
        )
        total = float(d2.sum())
        if total == 0.0:
            # fewer distinct points than k: fall back to unchosen indices in order
            for idx in range(n):
                if idx not in chosen:
                    chosen.append(idx)
                    break
            else:
                chosen.append(chosen[-1])
            continue
        chosen.append(int(rng.choice(n, p=d2 / total)))
    return points[chosen].copy()


def _objective(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    return float(((points - centroids[labels]) ** 2).sum())


def kmeans(ids: list[str], vectors: np.ndarray, k: int, seed: int) -> ClusterModel:
    """Lloyd k-means with k-means++ seeding.

    Stops when assignments are stable, the max centroid shift drops below
    1e-6, or after 100 iterations. Empty clusters steal the point farthest
    from its assigned centroid (lowest index on ties). Assignment ties go to
    the lower cluster id.
    """
    vectors = np.asarray(vectors, dtype=float)
    if len(ids) != vectors.shape[0]:
        raise ValueError("ids and vectors must be aligned")
    norms = np.linalg.norm(vectors, axis=1) if vectors.size else np.zeros(0)
    live = [i for i in range(len(ids)) if norms[i] > 0]
    if k < 1 or k > len(live):
        raise BadKError(f"k={k} outside [1, {len(live)}] (non-degenerate questions)")

    points = vectors[live]
    rng = np.random.default_rng(seed)
    centroids = _plusplus_init(points, k, rng)

    labels = np.zeros(len(live), dtype=int)
    prev_objective = float("inf")
    objective = prev_objective
    for _ in range(MAX_ITERATIONS):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)  # argmin takes the lowest index on ties

        # repair empty clusters in ascending id order
        for cid in range(k):
            if not (new_labels == cid).any():
                dist_to_own = d2[np.arange(len(live)), new_labels]
                donors = np.array([
                    i for i in range(len(live)) if (new_labels == new_labels[i]).sum() > 1
                ])
                if donors.size == 0:
                    continue
                farthest = donors[int(np.argmax(dist_to_own[donors]))]
                new_labels[farthest] = cid

        for cid in range(k):
            mask = new_labels == cid
            if mask.any():
                centroids[cid] = points[mask].mean(axis=0)

        objective = _objective(points, centroids, new_labels)
        # Lloyd guarantee, checked on every iteration
        assert objective <= prev_objective + 1e-9, "k-means objective increased"
        shift_converged = prev_objective != float("inf") and abs(prev_objective - objective) < SHIFT_TOLERANCE ** 2
        stable = (new_labels == labels).all() and prev_objective != float("inf")
        labels = new_labels
        prev_objective = objective
        if stable or shift_converged:
            break

    assignment: dict[str, int] = {}
    for pos, idx in enumerate(live):
        assignment[ids[idx]] = int(labels[pos])

    # degenerate vectors inherit the cluster of their nearest live neighbour
    if len(live) < len(ids):
        for i in range(len(ids)):
            if norms[i] > 0:
                continue
            dists = np.linalg.norm(points - vectors[i], axis=1)
            nearest = int(np.argmin(dists))
            assignment[ids[i]] = int(labels[nearest])

    assignment = {qid: assignment[qid] for qid in ids}
    return ClusterModel(
        k=k,
        centroids=_normalize_rows(centroids),
        assignment=assignment,
        inertia=objective,
        seed=seed,
    )


def random_clustering(ids: list[str], vectors: np.ndarray, k: int, seed: int) -> ClusterModel:
    """Uniform independent cluster assignment; centroids computed post hoc."""
    if k < 1:
        raise BadKError(f"k={k} must be >= 1")
    vectors = np.asarray(vectors, dtype=float)
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, k, size=len(ids))
    assignment = {qid: int(labels[i]) for i, qid in enumerate(ids)}
    dim = vectors.shape[1] if vectors.ndim == 2 else 0
    centroids = np.zeros((k, dim))
    for cid in range(k):
        mask = labels == cid
        if mask.any():
            centroids[cid] = vectors[mask].mean(axis=0)
    inertia = _objective(vectors, centroids, labels) if len(ids) else 0.0
    return ClusterModel(
        k=k,
        centroids=_normalize_rows(centroids),
        assignment=assignment,
        inertia=inertia,
        seed=seed,
    )


def recompute_centroids(model: ClusterModel, vectors_by_id: dict[str, np.ndarray]) -> None:
    """Refresh centroids as normalized member means after membership edits."""
    dim = model.centroids.shape[1]
    centroids = np.zeros((model.k, dim))
    for cid, members in model.member_map().items():
        if members:
            centroids[cid] = np.mean([vectors_by_id[qid] for qid in members], axis=0)
    model.centroids = _normalize_rows(centroids)


@dataclass
class RepresentativeSet:
    global_reps: dict[int, list[str]]                       # cluster -> ordered question ids
    doc_reps: dict[tuple[str, int], list[str]]              # (doc, cluster) -> question ids
    tau: float
    top_k: int

    def to_dict(self) -> dict:
        nested: dict[str, dict[str, list[str]]] = {}
        for (doc_id, cid), qids in sorted(self.doc_reps.items()):
            nested.setdefault(doc_id, {})[str(cid)] = qids
        return {
            "global_reps": {str(cid): qids for cid, qids in sorted(self.global_reps.items())},
            "doc_reps": nested,
            "tau": self.tau,
            "top_k": self.top_k,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RepresentativeSet":
        doc_reps: dict[tuple[str, int], list[str]] = {}
        for doc_id, per_cluster in d.get("doc_reps", {}).items():
            for cid, qids in per_cluster.items():
                doc_reps[(doc_id, int(cid))] = list(qids)
        return cls(
            global_reps={int(cid): list(qids) for cid, qids in d.get("global_reps", {}).items()},
            doc_reps=doc_reps,
            tau=float(d["tau"]),
            top_k=int(d["top_k"]),
        )


def global_representatives(
    member_ids: list[str], vectors_by_id: dict[str, np.ndarray], top_k: int
) -> list[str]:
    """Top-k member ids by mean cosine similarity to the other members.

    A singleton cluster's only question scores 1. Ties break by ascending id.
    """
    if not member_ids:
        return []
    if len(member_ids) == 1:
        return list(member_ids)
    scores: dict[str, float] = {}
    for qid in member_ids:
        v = vectors_by_id[qid]
        nv = float(np.linalg.norm(v))
        sims = []
        for other in member_ids:
            if other == qid:
                continue
            w = vectors_by_id[other]
            nw = float(np.linalg.norm(w))
            sims.append(0.0 if nv == 0 or nw == 0 else float(np.dot(v, w) / (nv * nw)))
        scores[qid] = sum(sims) / len(sims)
    ranked = sorted(member_ids, key=lambda q: (-scores[q], q))
    return ranked[:top_k]


def document_representative_flags(
    question_ids: list[str],
    vectors_by_id: dict[str, np.ndarray],
    centroid: np.ndarray,
    tau: float,
) -> dict[str, bool]:
    """Representative iff cosine similarity to the cluster mean is >= tau."""
    out: dict[str, bool] = {}
    c_norm = float(np.linalg.norm(centroid))
    for qid in question_ids:
        v = vectors_by_id[qid]
        nv = float(np.linalg.norm(v))
        if nv == 0.0 or c_norm == 0.0:
            out[qid] = False
        else:
            out[qid] = float(np.dot(v, centroid) / (nv * c_norm)) >= tau
    return out
