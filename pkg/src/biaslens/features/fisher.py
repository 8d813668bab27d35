"""Fisher-vector encoding of a descriptor set under a trained GMM.

The vector stacks, component-major, the per-descriptor-averaged gradients of
the log-likelihood with respect to each component's mean and variance,
rescaled by the closed-form diagonal Fisher information. Optional
improved-FV normalization applies a signed square root followed by L2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError
from .descriptors import DescriptorSet
from .gmm import GmmModel, gmm_log_responsibilities


@dataclass(frozen=True)
class FisherVector:
    image_id: str
    values: np.ndarray  # (2 * K * D,): mean block then variance block
    normalized: bool

    def __len__(self) -> int:
        return self.values.shape[0]


def encode_fisher(dset: DescriptorSet, model: GmmModel, normalize: bool = True) -> FisherVector:
    if dset.descriptors.shape[1] != model.dim:
        raise DimensionMismatchError(
            f"descriptor dim {dset.descriptors.shape[1]} against model dim {model.dim}"
        )
    x = dset.descriptors
    t = x.shape[0]
    log_resp, _ = gmm_log_responsibilities(model, x)
    resp = np.exp(log_resp)  # (T, K)

    s0 = resp.sum(axis=0)          # (K,)
    s1 = resp.T @ x                # (K, D)
    s2 = resp.T @ (x**2)           # (K, D)

    w = model.weights[:, None]
    mu = model.means
    v = model.variances
    grad_mean = (s1 - mu * s0[:, None]) / (t * np.sqrt(w * v))
    grad_var = (s2 - 2.0 * mu * s1 + (mu**2 - v) * s0[:, None]) / (t * np.sqrt(2.0 * w) * v)

    values = np.concatenate([grad_mean.ravel(), grad_var.ravel()])
    if not normalize:
        return FisherVector(dset.image_id, values, normalized=False)

    values = np.sign(values) * np.sqrt(np.abs(values))
    norm = np.sqrt(values @ values)
    if norm == 0.0:
        # An exactly-zero raw vector has no direction to keep; leave it as is.
        return FisherVector(dset.image_id, values, normalized=False)
    return FisherVector(dset.image_id, values / norm, normalized=True)


def undo_fisher_scaling(values: np.ndarray, model: GmmModel, n_descriptors: int):
    """Recover raw log-likelihood gradients from unnormalized encoded values.

    Returns (d ll / d mean, d ll / d variance) as (K, D) matrices. Inverse of
    the averaging and Fisher rescaling applied by :func:`encode_fisher`; used
    to cross-check the encoding against numerical differentiation.
    """
    k, d = model.means.shape
    grad_mean = values[: k * d].reshape(k, d)
    grad_var = values[k * d :].reshape(k, d)
    w = model.weights[:, None]
    v = model.variances
    dll_dmean = grad_mean * n_descriptors * np.sqrt(w) / np.sqrt(v)
    dll_dvar = grad_var * n_descriptors * np.sqrt(2.0 * w) / (2.0 * v)
    return dll_dmean, dll_dvar
