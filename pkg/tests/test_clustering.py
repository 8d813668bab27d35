from types import SimpleNamespace

import numpy as np
import pytest

from biaslens.clustering import (
    ClusteringParams,
    build_clusters,
    choose_k,
    kmeans,
    lloyd,
    mean_silhouette,
)
from biaslens.errors import InsufficientSampleError, ProvenanceMissingError, RangeInvalidError
from biaslens.features.fisher import FisherVector

from helpers import brute_force_kmeans, make_blobs, partition_signature


def _fvs(points: np.ndarray, prefix: str = "img") -> list:
    return [
        FisherVector(f"{prefix}-{i:03d}", row.astype(np.float64), normalized=True)
        for i, row in enumerate(points)
    ]


def _three_blob_points(seed: int = 0) -> np.ndarray:
    points, _ = make_blobs(
        [[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]], spread=0.5, per_blob=4, seed=seed
    )
    return points


def test_k1_centroid_is_mean():
    rng = np.random.default_rng(0)
    points = rng.normal(size=(9, 3))
    assignment = kmeans(_fvs(points), ClusteringParams(k=1, seed=0))
    np.testing.assert_allclose(assignment.centroids[0], points.mean(axis=0), atol=1e-12)
    expected = float(((points - points.mean(axis=0)) ** 2).sum())
    assert assignment.inertia == pytest.approx(expected, rel=1e-12)


def test_k_equals_count_zero_inertia():
    rng = np.random.default_rng(1)
    points = rng.normal(size=(6, 2)) * 5
    assignment = kmeans(_fvs(points), ClusteringParams(k=6, seed=0))
    assert assignment.inertia == pytest.approx(0.0, abs=1e-12)
    assert sorted(assignment.labels.values()) == list(range(6))


def test_matches_brute_force_on_three_blobs():
    points = _three_blob_points(seed=7)
    oracle_labels, oracle_inertia = brute_force_kmeans(points, k=3)
    assignment = kmeans(_fvs(points), ClusteringParams(k=3, seed=0))
    ordered = sorted(assignment.labels)
    labels = [assignment.labels[i] for i in ordered]
    assert partition_signature(labels) == partition_signature(oracle_labels)
    assert assignment.inertia == pytest.approx(oracle_inertia, rel=1e-9)


def test_inertia_history_non_increasing():
    points, _ = make_blobs([[0, 0], [6, 6]], spread=2.0, per_blob=30, seed=2)
    assignment = kmeans(_fvs(points), ClusteringParams(k=4, seed=3, restarts=1))
    history = np.array(assignment.inertia_history)
    assert np.all(np.diff(history) <= 1e-9)


def test_best_of_restarts_contract():
    points, _ = make_blobs([[0, 0], [8, 0], [0, 8]], spread=1.5, per_blob=15, seed=4)
    vectors = _fvs(points)
    best = kmeans(vectors, ClusteringParams(k=3, seed=5, restarts=8))
    sorted_points = np.stack(
        [fv.values for fv in sorted(vectors, key=lambda fv: fv.image_id)]
    )
    for restart in range(8):
        rng = np.random.default_rng([5, restart])
        _, _, inertia, _ = lloyd(sorted_points, 3, rng)
        assert best.inertia <= inertia + 1e-12


def test_permutation_invariance():
    points = _three_blob_points(seed=9)
    vectors = _fvs(points)
    shuffled = list(reversed(vectors))
    a = kmeans(vectors, ClusteringParams(k=3, seed=1))
    b = kmeans(shuffled, ClusteringParams(k=3, seed=1))
    assert a.labels == b.labels
    assert a.inertia == pytest.approx(b.inertia, rel=1e-15)


def test_too_few_points():
    points = np.zeros((2, 2))
    with pytest.raises(InsufficientSampleError):
        kmeans(_fvs(points), ClusteringParams(k=3))


def test_choose_k_finds_three_blobs():
    points, _ = make_blobs(
        [[0, 0], [12, 0], [0, 12]], spread=0.6, per_blob=8, seed=11
    )
    k = choose_k(_fvs(points), k_min=2, k_max=6, params=ClusteringParams(k=2, seed=0))
    assert k == 3


def test_choose_k_single_candidate():
    points, _ = make_blobs([[0, 0], [9, 9]], spread=0.5, per_blob=5, seed=12)
    assert choose_k(_fvs(points), 2, 2, ClusteringParams(k=2, seed=0)) == 2


def test_choose_k_tie_breaks_low():
    # All-identical points score silhouette 0 for every K; the tie goes to 2.
    points = np.ones((8, 3))
    assert choose_k(_fvs(points), 2, 3, ClusteringParams(k=2, seed=0)) == 2


def test_choose_k_invalid_range():
    points = np.zeros((5, 2))
    with pytest.raises(RangeInvalidError):
        choose_k(_fvs(points), 1, 3, ClusteringParams(k=2))
    with pytest.raises(RangeInvalidError):
        choose_k(_fvs(points), 2, 5, ClusteringParams(k=2))


def test_silhouette_prefers_true_split():
    points, labels = make_blobs([[0, 0], [10, 10]], spread=0.5, per_blob=6, seed=13)
    good = mean_silhouette(points, labels)
    bad = mean_silhouette(points, np.array([0, 1] * 6))
    assert good > bad


def _provenance(points, sources):
    images = [
        SimpleNamespace(image_id=f"img-{i:03d}", article_id=f"a{i % len(sources)}")
        for i in range(len(points))
    ]
    articles = [
        SimpleNamespace(article_id=f"a{j}", source_name=src)
        for j, src in enumerate(sources)
    ]
    return images, articles


def test_build_clusters_order_counts_and_exemplar():
    points, _ = make_blobs([[0, 0], [20, 20]], spread=0.4, per_blob=5, seed=14)
    points = np.vstack([points, [[20.1, 20.1], [19.9, 19.8]]])  # sizes 5 and 7
    vectors = _fvs(points)
    assignment = kmeans(vectors, ClusteringParams(k=2, seed=0))
    images, articles = _provenance(points, ["outletA", "outletB"])
    clusters = build_clusters(assignment, images, articles)

    assert [c.size for c in clusters] == sorted([c.size for c in clusters], reverse=True)
    assert sum(c.size for c in clusters) == len(points)
    for cluster in clusters:
        assert cluster.exemplar == cluster.members[0]
        assert sum(cluster.per_source_counts.values()) == cluster.size
        # exemplar minimal by direct scan
        dists = [assignment.distances[m] for m in cluster.members]
        assert assignment.distances[cluster.exemplar] == pytest.approx(min(dists))
        assert dists == sorted(dists)


def test_build_clusters_per_source_counting():
    points = np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1], [5.0, 5.0]])
    vectors = _fvs(points)
    assignment = kmeans(vectors, ClusteringParams(k=2, seed=0))
    images = [
        SimpleNamespace(image_id=f"img-{i:03d}", article_id=aid)
        for i, aid in enumerate(["a1", "a1", "a1", "a2", "a2"])
    ]
    articles = [
        SimpleNamespace(article_id="a1", source_name="outletA"),
        SimpleNamespace(article_id="a2", source_name="outletB"),
    ]
    clusters = build_clusters(assignment, images, articles)
    big = clusters[0]
    assert big.size == 4
    assert big.per_source_counts == {"outletA": 3, "outletB": 1}


def test_build_clusters_provenance_missing():
    points = np.zeros((3, 2))
    vectors = _fvs(points)
    assignment = kmeans(vectors, ClusteringParams(k=1, seed=0))
    images = [SimpleNamespace(image_id=f"img-{i:03d}", article_id="aX") for i in range(3)]
    with pytest.raises(ProvenanceMissingError):
        build_clusters(assignment, images, articles=[])
