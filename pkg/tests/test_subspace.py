import math

import numpy as np
import pytest

from sidmetrics.cloud import EmbeddingCloud
from sidmetrics.errors import EmptyRangeError, ShapeError
from sidmetrics.stats import CloudStats
from sidmetrics.subspace import min_sin_theta, sin_theta_bound


def stats_from_diag(diag):
    """CloudStats for an exactly diagonal covariance with the given spectrum."""
    diag = np.asarray(diag, dtype=np.float64)
    order = np.argsort(diag)[::-1]
    return CloudStats(
        mean=np.zeros(len(diag)),
        covariance=np.diag(diag),
        sigma_q=float(diag.max()),
        eigenvalues=diag[order].copy(),
        eigenvectors=np.eye(len(diag))[:, order],
    )


def cloud_with_exact_diag_cov(diag, label):
    """2n rows (+-a_i e_i) whose sample covariance is exactly diag(diag)."""
    diag = np.asarray(diag, dtype=np.float64)
    n = len(diag)
    rows = 2 * n
    amp = np.sqrt((rows - 1) * diag / 2.0)
    data = np.zeros((rows, n))
    data[0::2] = np.diag(amp)
    data[1::2] = -np.diag(amp)
    return EmbeddingCloud(label, data)


class TestSinThetaBound:
    def test_zero_for_equal_covariances(self):
        s = stats_from_diag([5.0, 1.0, 0.25])
        for r in (1, 2, 3):
            for t in range(r, 4):
                assert sin_theta_bound(s, s, r, t) == 0.0

    def test_hand_case(self):
        p = stats_from_diag([5.0, 1.0, 0.25])
        q = stats_from_diag([4.0, 1.0, 0.25])
        assert sin_theta_bound(p, q, 1, 1) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_joint_coordinate_permutation_invariant(self):
        perm = [2, 0, 1]
        p = stats_from_diag([5.0, 1.0, 0.25])
        q = stats_from_diag([4.0, 1.0, 0.25])
        p2 = stats_from_diag(np.array([5.0, 1.0, 0.25])[perm])
        q2 = stats_from_diag(np.array([4.0, 1.0, 0.25])[perm])
        assert sin_theta_bound(p, q, 1, 1) == sin_theta_bound(p2, q2, 1, 1)

    def test_degenerate_gap_gives_inf(self):
        p = stats_from_diag([2.0, 1.0, 1.0])
        q = stats_from_diag([1.0, 1.0, 1.0])
        assert sin_theta_bound(p, q, 1, 1) == math.inf

    def test_range_validation(self):
        s = stats_from_diag([3.0, 2.0, 1.0])
        with pytest.raises(ValueError):
            sin_theta_bound(s, s, 2, 1)
        with pytest.raises(ValueError):
            sin_theta_bound(s, s, 0, 1)

    def test_non_negative(self, rng):
        for _ in range(20):
            p = stats_from_diag(np.sort(rng.random(6))[::-1] + 0.1)
            q = stats_from_diag(np.sort(rng.random(6))[::-1] + 0.1)
            b = sin_theta_bound(p, q, 1, int(rng.integers(1, 7)))
            assert b >= 0.0


class TestMinSinTheta:
    def test_identity(self, rng):
        c = EmbeddingCloud("c", rng.standard_normal((50, 30)))
        assert min_sin_theta(c, c).min_value == 0.0

    def test_range_and_exhaustive_min(self, rng):
        p = EmbeddingCloud("p", rng.standard_normal((80, 40)))
        q = EmbeddingCloud("q", rng.standard_normal((80, 40)) * 1.3)
        report = min_sin_theta(p, q)
        sizes = [s for s, _ in report.per_s]
        assert sizes == list(range(3, math.ceil(40 / 10) + 1))
        assert report.min_value == min(b for _, b in report.per_s)

    def test_planted_gap_3072(self):
        # spectra decay smoothly except for one huge gap at s = 50; the
        # minimum bound must isolate it and match the per-s oracle exactly
        n, gap_at = 3072, 50
        lam_q = np.concatenate(
            [np.linspace(2000.0, 1900.0, gap_at), np.linspace(100.0, 1.0, n - gap_at)]
        )
        lam_p = lam_q.copy()
        lam_p[0] += 100.0
        p = cloud_with_exact_diag_cov(lam_p, "p")
        q = cloud_with_exact_diag_cov(lam_q, "q")
        report = min_sin_theta(p, q)
        bounds = dict(report.per_s)
        assert min(bounds, key=bounds.get) == gap_at
        assert report.min_value == min(bounds.values())
        from sidmetrics.subspace import _stats_with_spectrum

        sp, sq = _stats_with_spectrum(p), _stats_with_spectrum(q)
        for s, bound in report.per_s[:5] + report.per_s[gap_at - 4 : gap_at - 1]:
            assert sin_theta_bound(sp, sq, 1, s) == bound

    def test_joint_scaling_invariance(self, rng):
        p = EmbeddingCloud("p", rng.standard_normal((60, 32)))
        q = EmbeddingCloud("q", rng.standard_normal((60, 32)) + 0.3)
        base = min_sin_theta(p, q)
        scaled = min_sin_theta(
            EmbeddingCloud("p", p.data * 3.7), EmbeddingCloud("q", q.data * 3.7)
        )
        for (s1, b1), (s2, b2) in zip(base.per_s, scaled.per_s):
            assert s1 == s2
            if math.isfinite(b1):
                assert b2 == pytest.approx(b1, rel=1e-9)
            else:
                assert math.isinf(b2)

    def test_all_degenerate_gaps_give_inf(self):
        p = cloud_with_exact_diag_cov(np.full(30, 2.0), "p")
        q = cloud_with_exact_diag_cov(np.ones(30), "q")
        assert min_sin_theta(p, q).min_value == math.inf

    def test_small_dimension_rejected(self, rng):
        c = EmbeddingCloud("c", rng.standard_normal((10, 20)))
        with pytest.raises(EmptyRangeError):
            min_sin_theta(c, c)

    def test_dim_mismatch(self, rng):
        a = EmbeddingCloud("a", rng.standard_normal((40, 30)))
        b = EmbeddingCloud("b", rng.standard_normal((40, 31)))
        with pytest.raises(ShapeError):
            min_sin_theta(a, b)
