"""K-means++ center seeding, shared by GMM init and K-means clustering."""

from __future__ import annotations

import numpy as np


def kmeanspp_indices(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Pick ``k`` row indices of ``points`` by the k-means++ rule.

    First center uniform; each next center drawn with probability proportional
    to squared distance from the nearest chosen center. When every remaining
    distance is zero (duplicate-heavy data) the draw falls back to uniform.
    """
    n = points.shape[0]
    if k > n:
        raise ValueError(f"cannot seed {k} centers from {n} points")
    chosen = np.empty(k, dtype=np.intp)
    chosen[0] = rng.integers(n)
    dist_sq = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    for i in range(1, k):
        total = dist_sq.sum()
        if total <= 0.0:
            chosen[i] = rng.integers(n)
        else:
            chosen[i] = rng.choice(n, p=dist_sq / total)
        dist_sq = np.minimum(dist_sq, np.sum((points - points[chosen[i]]) ** 2, axis=1))
    return chosen
