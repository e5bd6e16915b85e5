import numpy as np
import pytest

from sidmetrics.cloud import EmbeddingCloud
from sidmetrics.errors import InsufficientSamplesError
from sidmetrics.stats import compute_stats


def cloud_of(rows):
    return EmbeddingCloud("s", np.array(rows, dtype=np.float64))


class TestComputeStats:
    def test_two_point_sample(self):
        stats = compute_stats(cloud_of([[0.0, 0.0], [2.0, 0.0]]))
        np.testing.assert_allclose(stats.mean, [1.0, 0.0])
        np.testing.assert_allclose(stats.covariance, [[2.0, 0.0], [0.0, 0.0]])
        assert stats.sigma_q == 2.0

    def test_hand_eigendecomposition(self):
        stats = compute_stats(cloud_of([[1.0, 0.0], [0.0, 1.0]]), with_eigen=True)
        np.testing.assert_allclose(stats.covariance, [[0.5, -0.5], [-0.5, 0.5]])
        np.testing.assert_allclose(stats.eigenvalues, [1.0, 0.0], atol=1e-12)

    def test_sigma_q_sampling_band(self):
        rng = np.random.default_rng(7)
        data = rng.standard_normal((500, 2)) * np.sqrt([4.0, 1.0])
        stats = compute_stats(EmbeddingCloud("g", data))
        assert 3.0 <= stats.sigma_q <= 5.0

    def test_needs_two_samples(self):
        with pytest.raises(InsufficientSamplesError):
            compute_stats(cloud_of([[1.0, 2.0]]))

    def test_eigen_empty_unless_requested(self):
        stats = compute_stats(cloud_of([[0.0], [1.0]]))
        assert stats.eigenvalues is None and stats.eigenvectors is None


class TestInvariants:
    @pytest.mark.parametrize("n", [2, 5, 16, 64])
    def test_reconstruction(self, n, rng):
        data = rng.standard_normal((3 * n, n)) @ rng.standard_normal((n, n))
        stats = compute_stats(EmbeddingCloud("r", data), with_eigen=True)
        rebuilt = stats.eigenvectors @ np.diag(stats.eigenvalues) @ stats.eigenvectors.T
        scale = max(1.0, np.abs(stats.covariance).max())
        assert np.abs(rebuilt - stats.covariance).max() <= 1e-8 * scale

    @pytest.mark.parametrize("n", [2, 8, 64])
    def test_orthonormal_eigenvectors(self, n, rng):
        data = rng.standard_normal((2 * n + 1, n))
        stats = compute_stats(EmbeddingCloud("o", data), with_eigen=True)
        gram = stats.eigenvectors.T @ stats.eigenvectors
        assert np.abs(gram - np.eye(n)).max() <= 1e-8

    def test_eigenvalues_sorted_descending(self, rng):
        data = rng.standard_normal((40, 12))
        stats = compute_stats(EmbeddingCloud("d", data), with_eigen=True)
        assert (np.diff(stats.eigenvalues) <= 1e-15).all()

    def test_translation_equivariance(self, rng):
        data = rng.standard_normal((30, 6))
        shift = rng.standard_normal(6) * 10
        a = compute_stats(EmbeddingCloud("a", data), with_eigen=True)
        b = compute_stats(EmbeddingCloud("b", data + shift), with_eigen=True)
        np.testing.assert_allclose(b.mean, a.mean + shift, atol=1e-12, rtol=0)
        np.testing.assert_allclose(b.covariance, a.covariance, atol=1e-12, rtol=0)
        assert abs(b.sigma_q - a.sigma_q) <= 1e-12
        np.testing.assert_allclose(b.eigenvalues, a.eigenvalues, atol=1e-12, rtol=0)

    def test_covariance_symmetric(self, rng):
        data = rng.standard_normal((25, 9))
        cov = compute_stats(EmbeddingCloud("s", data)).covariance
        assert np.array_equal(cov, cov.T)
