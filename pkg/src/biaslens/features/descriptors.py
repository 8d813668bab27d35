"""Dense grayscale patch descriptors.

Each image becomes a set of local descriptors: square patches sampled on a
stride grid, flattened, DC-removed (each patch minus its own mean) and
projected down with a trained PCA. Patch extraction is pure and deterministic,
so it may run in parallel across images.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

# Images smaller than this on either side are scaled up before sampling so
# every image yields at least one full patch grid.
MIN_ANALYSIS_SIZE = 64

# Rec. 601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


@dataclass(frozen=True)
class PatchParams:
    patch_size: int = 8
    stride: int = 4
    reduced_dim: int = 16


@dataclass(frozen=True)
class DescriptorSet:
    """One row per sampled patch, already reduced to ``patch_params.reduced_dim``."""

    image_id: str
    descriptors: np.ndarray
    patch_params: PatchParams

    def __post_init__(self):
        if self.descriptors.ndim != 2:
            raise ValueError("descriptors must be a 2-D matrix")
        if self.descriptors.shape[1] != self.patch_params.reduced_dim:
            raise ValueError("descriptor width disagrees with patch_params.reduced_dim")


def to_grayscale(raster: np.ndarray) -> np.ndarray:
    """RGB uint8 raster (H, W, 3) -> float64 luma in [0, 1]."""
    if raster.ndim == 2:
        return raster.astype(np.float64) / 255.0
    return (raster[..., :3].astype(np.float64) @ _LUMA) / 255.0


def _ensure_min_size(raster: np.ndarray) -> np.ndarray:
    h, w = raster.shape[:2]
    if h >= MIN_ANALYSIS_SIZE and w >= MIN_ANALYSIS_SIZE:
        return raster
    scale = max(MIN_ANALYSIS_SIZE / h, MIN_ANALYSIS_SIZE / w)
    new_w = max(MIN_ANALYSIS_SIZE, int(round(w * scale)))
    new_h = max(MIN_ANALYSIS_SIZE, int(round(h * scale)))
    img = Image.fromarray(raster).resize((new_w, new_h), Image.BILINEAR)
    return np.asarray(img)


def raw_patches(raster: np.ndarray, patch_size: int = 8, stride: int = 4) -> np.ndarray:
    """Flattened DC-removed patches, one per grid position (N x patch_size**2)."""
    raster = _ensure_min_size(raster)
    gray = to_grayscale(raster)
    h, w = gray.shape
    rows = range(0, h - patch_size + 1, stride)
    cols = range(0, w - patch_size + 1, stride)
    patches = np.stack(
        [gray[r : r + patch_size, c : c + patch_size].ravel() for r in rows for c in cols]
    )
    return patches - patches.mean(axis=1, keepdims=True)


def extract_descriptors(image, params: PatchParams, pca) -> DescriptorSet:
    """Sample the patch grid of ``image`` and project it through ``pca``.

    ``image`` is anything with ``image_id`` and a decoded ``raster``. A
    constant-color image legitimately yields all-zero descriptors.
    """
    if pca.out_dim != params.reduced_dim:
        raise ValueError(
            f"pca out_dim {pca.out_dim} != patch_params.reduced_dim {params.reduced_dim}"
        )
    patches = raw_patches(image.raster, params.patch_size, params.stride)
    return DescriptorSet(
        image_id=image.image_id,
        descriptors=pca.transform(patches),
        patch_params=params,
    )
