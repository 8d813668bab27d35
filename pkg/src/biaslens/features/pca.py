"""PCA dimensionality reduction for patch descriptors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientSampleError


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray        # (in_dim,)
    components: np.ndarray  # (out_dim, in_dim), orthonormal rows

    @property
    def out_dim(self) -> int:
        return self.components.shape[0]

    @property
    def in_dim(self) -> int:
        return self.components.shape[1]

    def transform(self, rows: np.ndarray) -> np.ndarray:
        return (rows - self.mean) @ self.components.T

    def inverse_transform(self, reduced: np.ndarray) -> np.ndarray:
        return reduced @ self.components + self.mean


def train_pca(descriptor_sample: np.ndarray, out_dim: int) -> PcaModel:
    """Fit mean + top ``out_dim`` principal directions by SVD.

    Deterministic given the sample: component signs are fixed so the
    largest-magnitude entry of each row is positive.
    """
    sample = np.asarray(descriptor_sample, dtype=np.float64)
    if out_dim < 1:
        raise ValueError("out_dim must be >= 1")
    if sample.ndim != 2 or sample.shape[0] < out_dim:
        raise InsufficientSampleError(
            f"need at least {out_dim} sample rows, got {sample.shape[0] if sample.ndim == 2 else 0}"
        )
    mean = sample.mean(axis=0)
    _, _, vt = np.linalg.svd(sample - mean, full_matrices=False)
    components = vt[:out_dim].copy()
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0
    return PcaModel(mean=mean, components=components)
