import numpy as np
import pytest

from biaslens.errors import DimensionMismatchError, InsufficientSampleError
from biaslens.features.gmm import GmmModel, gmm_log_likelihood, train_gmm

from helpers import make_blobs, mp_gmm_log_likelihood


def test_single_component_closed_form():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(300, 4)) * 2.0 + 1.5
    model = train_gmm(x, n_components=1, seed=0)
    assert model.weights.shape == (1,)
    np.testing.assert_allclose(model.weights, [1.0], atol=1e-12)
    np.testing.assert_allclose(model.means[0], x.mean(axis=0), atol=1e-9)
    np.testing.assert_allclose(model.variances[0], x.var(axis=0), atol=1e-9)


def test_two_blobs_recovered():
    x, _ = make_blobs([[-5.0, -5.0], [5.0, 5.0]], spread=1.0, per_blob=200, seed=3)
    model = train_gmm(x, n_components=2, seed=1)
    order = np.argsort(model.means[:, 0])
    np.testing.assert_allclose(model.means[order][0], [-5.0, -5.0], atol=0.2)
    np.testing.assert_allclose(model.means[order][1], [5.0, 5.0], atol=0.2)
    assert np.all(model.weights >= 0.4) and np.all(model.weights <= 0.6)


def test_em_log_likelihood_monotone():
    x, _ = make_blobs([[0, 0], [4, 0], [0, 4]], spread=0.8, per_blob=60, seed=5)
    model = train_gmm(x, n_components=3, seed=2)
    history = np.array(model.ll_history)
    assert len(history) >= 2
    assert np.all(np.diff(history) >= -1e-9)


def test_weights_form_simplex_and_variances_floored():
    x, _ = make_blobs([[0.0], [1e-6]], spread=1e-9, per_blob=20, seed=0)
    model = train_gmm(x, n_components=2, seed=0, variance_floor=1e-4)
    assert abs(model.weights.sum() - 1.0) < 1e-9
    assert np.all(model.variances >= 1e-4)


def test_nonconvergence_flagged_not_fatal():
    x, _ = make_blobs([[0, 0], [6, 6]], spread=1.0, per_blob=50, seed=8)
    model = train_gmm(x, n_components=2, seed=0, max_iter=2, tol=1e-12)
    assert not model.converged
    assert model.n_iter == 2


def test_insufficient_data():
    with pytest.raises(InsufficientSampleError):
        train_gmm(np.zeros((2, 3)), n_components=5, seed=0)


def test_log_likelihood_standard_normal_point():
    model = GmmModel(
        weights=np.array([1.0]),
        means=np.array([[0.0]]),
        variances=np.array([[1.0]]),
        train_seed=0,
    )
    value = gmm_log_likelihood(model, np.array([[0.0]]))
    assert value == pytest.approx(np.log(1.0 / np.sqrt(2 * np.pi)), abs=1e-12)
    assert value == pytest.approx(-0.9189385332046727, abs=1e-10)


def test_log_likelihood_additive_over_rows():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(7, 3))
    model = train_gmm(x, n_components=2, seed=0, max_iter=5)
    single = gmm_log_likelihood(model, x)
    doubled = gmm_log_likelihood(model, np.vstack([x, x]))
    assert doubled == pytest.approx(2 * single, rel=1e-12)


def test_log_likelihood_matches_high_precision_oracle():
    rng = np.random.default_rng(17)
    points = rng.normal(size=(5, 3))
    model = GmmModel(
        weights=np.array([0.3, 0.7]),
        means=rng.normal(size=(2, 3)),
        variances=rng.uniform(0.5, 2.0, size=(2, 3)),
        train_seed=0,
    )
    expected = mp_gmm_log_likelihood(model.weights, model.means, model.variances, points)
    assert gmm_log_likelihood(model, points) == pytest.approx(expected, abs=1e-10)


def test_log_likelihood_dimension_mismatch():
    model = GmmModel(
        weights=np.array([1.0]),
        means=np.zeros((1, 3)),
        variances=np.ones((1, 3)),
        train_seed=0,
    )
    with pytest.raises(DimensionMismatchError):
        gmm_log_likelihood(model, np.zeros((4, 2)))
