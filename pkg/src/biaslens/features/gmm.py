"""Diagonal-covariance Gaussian mixture fit by expectation-maximization.

The mixture anchors the Fisher encoding: one model is trained per story on
the pooled descriptors of that story's images. Training is single-threaded
and fully determined by (data, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError, InsufficientSampleError
from ..seeding import kmeanspp_indices

DEFAULT_VARIANCE_FLOOR = 1e-4

_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class GmmModel:
    weights: np.ndarray    # (K,), simplex
    means: np.ndarray      # (K, D)
    variances: np.ndarray  # (K, D), elementwise >= variance_floor
    train_seed: int
    converged: bool = True
    n_iter: int = 0
    # Mean log-likelihood per point at each EM iteration, for monotonicity checks.
    ll_history: tuple = field(default=())

    @property
    def n_components(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    peak = np.max(a, axis=axis, keepdims=True)
    peak = np.where(np.isfinite(peak), peak, 0.0)
    return np.squeeze(peak, axis=axis) + np.log(
        np.sum(np.exp(a - peak), axis=axis)
    )


def _weighted_log_prob(model_or_params, x: np.ndarray) -> np.ndarray:
    """log(w_k) + log N(x_n | mu_k, diag v_k) as an (N, K) matrix."""
    weights, means, variances = (
        model_or_params.weights,
        model_or_params.means,
        model_or_params.variances,
    )
    d = means.shape[1]
    # sum_d (x-mu)^2/v expanded to three matrix products
    precisions = 1.0 / variances
    maha = (
        (x**2) @ precisions.T
        - 2.0 * x @ (means * precisions).T
        + np.sum(means**2 * precisions, axis=1)
    )
    log_det = np.sum(np.log(variances), axis=1)
    log_gauss = -0.5 * (d * _LOG_2PI + log_det + maha)
    with np.errstate(divide="ignore"):
        return log_gauss + np.log(weights)


def gmm_log_responsibilities(model: GmmModel, descriptors: np.ndarray):
    """Per-row component posteriors (log) and the summed log-likelihood."""
    x = _check_dims(model, descriptors)
    weighted = _weighted_log_prob(model, x)
    log_norm = _logsumexp(weighted, axis=1)
    return weighted - log_norm[:, None], float(log_norm.sum())


def gmm_log_likelihood(model: GmmModel, descriptors: np.ndarray) -> float:
    """Sum over rows of the log mixture density."""
    x = _check_dims(model, descriptors)
    return float(_logsumexp(_weighted_log_prob(model, x), axis=1).sum())


def _check_dims(model: GmmModel, descriptors: np.ndarray) -> np.ndarray:
    x = np.asarray(descriptors, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise DimensionMismatchError(
            f"descriptors of dim {x.shape[1] if x.ndim == 2 else '?'} "
            f"against model of dim {model.dim}"
        )
    return x


def train_gmm(
    descriptors: np.ndarray,
    n_components: int,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-6,
    variance_floor: float = DEFAULT_VARIANCE_FLOOR,
) -> GmmModel:
    """EM fit, initialized from k-means++ centers drawn with ``seed``.

    The mean log-likelihood is non-decreasing across iterations (up to tiny
    float slack); hitting ``max_iter`` without the gain dropping below ``tol``
    is not an error, the best-so-far model is returned with ``converged`` left
    False.
    """
    x = np.asarray(descriptors, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < n_components:
        raise InsufficientSampleError(
            f"need at least {n_components} descriptor rows, got {x.shape[0] if x.ndim == 2 else 0}"
        )
    if n_components < 1:
        raise ValueError("n_components must be >= 1")
    n, _ = x.shape
    rng = np.random.default_rng(seed)

    means = x[kmeanspp_indices(x, n_components, rng)].copy()
    weights = np.full(n_components, 1.0 / n_components)
    global_var = np.maximum(x.var(axis=0), variance_floor)
    variances = np.tile(global_var, (n_components, 1))

    params = GmmModel(weights, means, variances, train_seed=seed)
    history: list[float] = []
    converged = False
    n_iter = 0
    prev_mean_ll = -np.inf
    for n_iter in range(1, max_iter + 1):
        log_resp, total_ll = gmm_log_responsibilities(params, x)
        mean_ll = total_ll / n
        history.append(mean_ll)
        if mean_ll - prev_mean_ll < tol and np.isfinite(prev_mean_ll):
            converged = True
            break
        prev_mean_ll = mean_ll

        resp = np.exp(log_resp)
        nk = resp.sum(axis=0)
        nk_safe = np.maximum(nk, 10.0 * np.finfo(np.float64).tiny)
        new_weights = np.maximum(nk / n, 1e-12)
        new_weights /= new_weights.sum()
        new_means = (resp.T @ x) / nk_safe[:, None]
        new_vars = (resp.T @ (x**2)) / nk_safe[:, None] - new_means**2
        new_vars = np.maximum(new_vars, variance_floor)
        params = GmmModel(new_weights, new_means, new_vars, train_seed=seed)

    return GmmModel(
        weights=params.weights,
        means=params.means,
        variances=params.variances,
        train_seed=seed,
        converged=converged,
        n_iter=n_iter,
        ll_history=tuple(history),
    )
