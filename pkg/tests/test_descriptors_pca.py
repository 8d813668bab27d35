from types import SimpleNamespace

import numpy as np
import pytest

from biaslens.errors import InsufficientSampleError
from biaslens.features.descriptors import PatchParams, extract_descriptors, raw_patches
from biaslens.features.pca import train_pca


def _image(raster: np.ndarray, image_id: str = "img-01"):
    return SimpleNamespace(image_id=image_id, raster=raster)


def test_grid_patch_count_64px():
    raster = np.random.default_rng(0).integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
    patches = raw_patches(raster, patch_size=8, stride=4)
    assert patches.shape == (15 * 15, 64)


def test_constant_image_gives_zero_patches():
    raster = np.full((64, 64, 3), 137, dtype=np.uint8)
    patches = raw_patches(raster)
    np.testing.assert_allclose(patches, 0.0, atol=1e-12)


def test_small_image_resized_up():
    raster = np.random.default_rng(1).integers(0, 256, size=(20, 40, 3), dtype=np.uint8)
    patches = raw_patches(raster)
    assert patches.shape[0] >= 1


def test_extract_descriptors_deterministic():
    rng = np.random.default_rng(42)
    raster = rng.integers(0, 256, size=(96, 96, 3), dtype=np.uint8)
    sample = raw_patches(raster)
    pca = train_pca(sample, out_dim=16)
    params = PatchParams()
    a = extract_descriptors(_image(raster), params, pca)
    b = extract_descriptors(_image(raster.copy()), params, pca)
    assert a.descriptors.tobytes() == b.descriptors.tobytes()
    assert a.descriptors.shape[1] == params.reduced_dim


def test_pca_exact_subspace_reconstruction():
    rng = np.random.default_rng(3)
    basis = np.linalg.qr(rng.normal(size=(6, 6)))[0][:, :3]
    coords = rng.normal(size=(50, 3))
    data = coords @ basis.T + 0.7
    pca = train_pca(data, out_dim=3)
    recon = pca.inverse_transform(pca.transform(data))
    assert np.max(np.abs(recon - data)) < 1e-8


def test_pca_collinear_points_capture_variance():
    rng = np.random.default_rng(4)
    t = rng.normal(size=80)
    data = np.stack([2.0 * t + 1.0, -3.0 * t + 0.5], axis=1)
    pca = train_pca(data, out_dim=1)
    projected = pca.transform(data)
    total_var = data.var(axis=0).sum()
    captured = projected.var(axis=0).sum()
    assert captured / total_var >= 0.999


def test_pca_rows_orthonormal():
    rng = np.random.default_rng(5)
    data = rng.normal(size=(100, 10))
    pca = train_pca(data, out_dim=4)
    gram = pca.components @ pca.components.T
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-6)


def test_pca_insufficient_sample():
    with pytest.raises(InsufficientSampleError):
        train_pca(np.zeros((3, 8)), out_dim=5)
