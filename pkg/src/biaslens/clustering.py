"""K-means clustering of story images by their Fisher vectors.

Vectors are canonically sorted by image_id before clustering so results do
not depend on ingestion order. Lloyd's algorithm runs with k-means++ seeding
per restart; the best restart by (inertia, restart index) wins. Empty
clusters are repaired by promoting the point farthest from its centroid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InsufficientSampleError, ProvenanceMissingError, RangeInvalidError
from .features.fisher import FisherVector
from .seeding import kmeanspp_indices


@dataclass(frozen=True)
class ClusteringParams:
    k: int
    seed: int = 0
    max_iter: int = 100
    tol: float = 1e-6
    restarts: int = 8

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class ClusterAssignment:
    labels: dict            # image_id -> cluster index in [0, k)
    centroids: np.ndarray   # (k, M)
    inertia: float
    distances: dict         # image_id -> Euclidean distance to assigned centroid
    inertia_history: tuple  # per-iteration inertia of the winning restart


@dataclass(frozen=True)
class ImageCluster:
    cluster_id: int
    members: tuple          # image_ids ordered by distance to centroid, ascending
    exemplar: str           # nearest member to the centroid
    per_source_counts: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.members)


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def lloyd(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int = 100,
    tol: float = 1e-6,
):
    """One restart of Lloyd's algorithm on a point matrix.

    Returns (labels, centroids, inertia, inertia_history). The history is
    non-increasing; the returned centroids are exact member means.
    """
    n = points.shape[0]
    centers = points[kmeanspp_indices(points, k, rng)].copy()
    history: list[float] = []
    prev_inertia = np.inf
    labels = np.zeros(n, dtype=np.intp)
    for _ in range(max_iter):
        d2 = _sq_dists(points, centers)
        labels = d2.argmin(axis=1)
        point_d2 = d2[np.arange(n), labels]

        empties = np.setdiff1d(np.arange(k), labels)
        if empties.size:
            stolen = np.zeros(n, dtype=bool)
            for empty in empties:
                # Promote the farthest not-yet-stolen point to be the centroid.
                far = int(np.where(stolen, -1.0, point_d2).argmax())
                centers[empty] = points[far]
                labels[far] = empty
                point_d2[far] = 0.0
                stolen[far] = True

        inertia = float(point_d2.sum())
        history.append(inertia)
        if prev_inertia - inertia < tol:
            break
        prev_inertia = inertia

        for j in range(k):
            centers[j] = points[labels == j].mean(axis=0)

    # Final centroids are member means; inertia measured against them.
    for j in range(k):
        centers[j] = points[labels == j].mean(axis=0)
    final_d2 = _sq_dists(points, centers)[np.arange(n), labels]
    inertia = float(final_d2.sum())
    history.append(inertia)
    return labels, centers, inertia, tuple(history)


def kmeans(vectors: list[FisherVector], params: ClusteringParams) -> ClusterAssignment:
    if not vectors:
        raise InsufficientSampleError("no vectors to cluster")
    if len(vectors) < params.k:
        raise InsufficientSampleError(
            f"too few points: {len(vectors)} vectors for k={params.k}"
        )
    ordered = sorted(vectors, key=lambda fv: fv.image_id)
    ids = [fv.image_id for fv in ordered]
    points = np.stack([fv.values for fv in ordered]).astype(np.float64)

    best = None
    for restart in range(params.restarts):
        rng = np.random.default_rng([params.seed, restart])
        labels, centers, inertia, history = lloyd(
            points, params.k, rng, params.max_iter, params.tol
        )
        if best is None or inertia < best[0]:
            best = (inertia, restart, labels, centers, history)

    inertia, _, labels, centers, history = best
    dists = np.sqrt(_sq_dists(points, centers)[np.arange(len(ids)), labels])
    return ClusterAssignment(
        labels={iid: int(lab) for iid, lab in zip(ids, labels)},
        centroids=centers,
        inertia=inertia,
        distances={iid: float(d) for iid, d in zip(ids, dists)},
        inertia_history=history,
    )


def mean_silhouette(points: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette over all points; singletons score 0."""
    n = points.shape[0]
    d2 = _sq_dists(points, points)
    np.maximum(d2, 0.0, out=d2)
    dist = np.sqrt(d2)
    scores = np.zeros(n)
    cluster_ids = np.unique(labels)
    masks = {c: labels == c for c in cluster_ids}
    for i in range(n):
        own = masks[labels[i]]
        own_size = int(own.sum())
        if own_size <= 1:
            continue
        a = dist[i, own].sum() / (own_size - 1)
        b = min(
            dist[i, masks[c]].mean() for c in cluster_ids if c != labels[i]
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def choose_k(
    vectors: list[FisherVector],
    k_min: int,
    k_max: int,
    params: ClusteringParams,
) -> int:
    """Pick K in [k_min, k_max] maximizing mean silhouette; ties go low."""
    count = len(vectors)
    if k_min < 2 or k_max > count - 1 or k_min > k_max:
        raise RangeInvalidError(
            f"invalid K range [{k_min}, {k_max}] for {count} vectors"
        )
    ordered = sorted(vectors, key=lambda fv: fv.image_id)
    points = np.stack([fv.values for fv in ordered]).astype(np.float64)
    best_k, best_score = k_min, -np.inf
    for k in range(k_min, k_max + 1):
        assignment = kmeans(
            vectors,
            ClusteringParams(
                k=k,
                seed=params.seed,
                max_iter=params.max_iter,
                tol=params.tol,
                restarts=params.restarts,
            ),
        )
        labels = np.array([assignment.labels[fv.image_id] for fv in ordered])
        score = mean_silhouette(points, labels)
        if score > best_score:
            best_k, best_score = k, score
    return best_k


def build_clusters(
    assignment: ClusterAssignment,
    images: list,
    articles: list,
) -> list[ImageCluster]:
    """Package an assignment for inspection: ordered members + provenance."""
    by_image = {img.image_id: img for img in images}
    source_by_article = {a.article_id: a.source_name for a in articles}

    grouped: dict[int, list[str]] = {}
    for image_id, label in assignment.labels.items():
        if image_id not in by_image:
            raise ProvenanceMissingError(f"labeled image {image_id} not in image set")
        grouped.setdefault(label, []).append(image_id)

    clusters = []
    for label, member_ids in grouped.items():
        member_ids.sort(key=lambda iid: (assignment.distances[iid], iid))
        counts: dict[str, int] = {}
        for iid in member_ids:
            article_id = by_image[iid].article_id
            if article_id not in source_by_article:
                raise ProvenanceMissingError(
                    f"image {iid} references unknown article {article_id}"
                )
            source = source_by_article[article_id]
            counts[source] = counts.get(source, 0) + 1
        clusters.append(
            ImageCluster(
                cluster_id=label,
                members=tuple(member_ids),
                exemplar=member_ids[0],
                per_source_counts=counts,
            )
        )
    clusters.sort(key=lambda c: (-c.size, c.cluster_id))
    return clusters


def write_cluster_report(
    path: Path,
    story_id: str,
    params: ClusteringParams,
    clusters: list[ImageCluster],
    inertia: float,
    auto_k: bool = False,
) -> dict:
    doc = cluster_report_doc(story_id, params, clusters, inertia, auto_k)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    return doc


def cluster_report_doc(
    story_id: str,
    params: ClusteringParams,
    clusters: list[ImageCluster],
    inertia: float,
    auto_k: bool = False,
) -> dict:
    return {
        "version": 1,
        "story_id": story_id,
        "params": {
            "k": params.k,
            "seed": params.seed,
            "max_iter": params.max_iter,
            "tol": params.tol,
            "restarts": params.restarts,
            "auto_k": auto_k,
        },
        "inertia": inertia,
        "clusters": [
            {
                "cluster_id": c.cluster_id,
                "size": c.size,
                "exemplar": c.exemplar,
                "members": list(c.members),
                "per_source_counts": c.per_source_counts,
            }
            for c in clusters
        ],
    }


def load_cluster_report(path: Path) -> dict:
    return json.loads(Path(path).read_text())
