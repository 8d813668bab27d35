"""Independent oracles used by the test suite.

These deliberately avoid the library's own code paths: brute-force
enumeration for K-means, high-precision direct summation for the mixture
log-likelihood, and central finite differences for Fisher gradients.
"""

from __future__ import annotations

import numpy as np


def brute_force_kmeans(points: np.ndarray, k: int):
    """Exhaustive search over all k**n label assignments.

    Returns (best_labels, best_inertia). Vectorized so the 3**12 instance
    finishes in well under a second.
    """
    n = points.shape[0]
    n_assign = k**n
    assignments = np.empty((n_assign, n), dtype=np.int8)
    idx = np.arange(n_assign)
    for pos in range(n):
        assignments[:, pos] = (idx // (k ** (n - 1 - pos))) % k

    sq_norms = np.einsum("nd,nd->n", points, points)
    total = np.full(n_assign, sq_norms.sum())
    for label in range(k):
        mask = assignments == label  # (A, n)
        counts = mask.sum(axis=1)
        sums = mask.astype(np.float64) @ points  # (A, d)
        safe = np.maximum(counts, 1)[:, None]
        centroids = sums / safe
        # sum_{i in c} ||x_i - mu||^2 = sum ||x_i||^2 - count*||mu||^2
        total -= np.einsum("ad,ad->a", centroids, centroids) * counts

    best = int(total.argmin())
    return assignments[best].astype(int), float(total[best])


def partition_signature(labels) -> frozenset:
    """Label-renaming-invariant form of a clustering."""
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(i)
    return frozenset(frozenset(g) for g in groups.values())


def mp_gmm_log_likelihood(weights, means, variances, points, dps: int = 50):
    """Direct high-precision evaluation of sum_t log sum_k w_k N(x_t)."""
    from mpmath import mp, mpf, log, exp, pi, sqrt

    mp.dps = dps
    total = mpf(0)
    for x in points:
        density = mpf(0)
        for k in range(len(weights)):
            comp = mpf(float(weights[k]))  # mpf(float) is an exact binary conversion
            for d in range(len(x)):
                v = mpf(float(variances[k][d]))
                diff = mpf(float(x[d])) - mpf(float(means[k][d]))
                comp *= exp(-diff * diff / (2 * v)) / sqrt(2 * pi * v)
            density += comp
        total += log(density)
    return float(total)


def finite_difference_gmm_grads(model, points: np.ndarray, h: float = 1e-5):
    """Central-difference gradients of the summed log-likelihood.

    Perturbs each mean entry and each variance entry of ``model`` in turn.
    Returns (d ll / d mean, d ll / d variance) as (K, D) arrays.
    """
    from biaslens.features.gmm import GmmModel, gmm_log_likelihood

    k, d = model.means.shape
    grad_mean = np.zeros((k, d))
    grad_var = np.zeros((k, d))

    def ll(means, variances):
        return gmm_log_likelihood(
            GmmModel(model.weights, means, variances, train_seed=model.train_seed),
            points,
        )

    for i in range(k):
        for j in range(d):
            up = model.means.copy()
            down = model.means.copy()
            up[i, j] += h
            down[i, j] -= h
            grad_mean[i, j] = (ll(up, model.variances) - ll(down, model.variances)) / (2 * h)

            vup = model.variances.copy()
            vdown = model.variances.copy()
            vup[i, j] += h
            vdown[i, j] -= h
            grad_var[i, j] = (ll(model.means, vup) - ll(model.means, vdown)) / (2 * h)

    return grad_mean, grad_var


def make_blobs(centers, spread, per_blob, seed):
    """Gaussian blobs with known generating labels."""
    rng = np.random.default_rng(seed)
    points = []
    labels = []
    for i, c in enumerate(centers):
        pts = rng.normal(loc=c, scale=spread, size=(per_blob, len(c)))
        points.append(pts)
        labels.extend([i] * per_blob)
    return np.vstack(points), np.array(labels)
