import numpy as np
import pytest

from sidmetrics.errors import NumericError, UnknownNameError
from sidmetrics.scenarios import (
    PRESET_NAMES,
    GaussianMixtureSpec,
    preset_specs,
    sample_gmm,
    scenario,
)


class TestGaussianMixtureSpec:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            GaussianMixtureSpec(
                ((0.6, np.zeros(2), np.eye(2)), (0.6, np.ones(2), np.eye(2))), dim=2
            )

    def test_rejects_asymmetric_covariance(self):
        with pytest.raises(ValueError):
            GaussianMixtureSpec(((1.0, np.zeros(2), np.array([[1.0, 0.5], [0.2, 1.0]])),), dim=2)

    def test_diagonal_shorthand(self):
        spec = GaussianMixtureSpec(((1.0, np.zeros(2), np.array([2.0, 3.0])),), dim=2)
        np.testing.assert_array_equal(spec.components[0][2], [[2.0, 0.0], [0.0, 3.0]])

    def test_moments_of_two_point_mixture(self):
        spec = GaussianMixtureSpec(
            (
                (0.5, np.array([1.0, 0.0]), 0.0 * np.eye(2)),
                (0.5, np.array([-1.0, 0.0]), 0.0 * np.eye(2)),
            ),
            dim=2,
        )
        mu, cov = spec.moments()
        np.testing.assert_allclose(mu, [0.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(cov, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)


class TestSampleGmm:
    def test_single_component_moments(self):
        spec = GaussianMixtureSpec.single(np.zeros(2), np.eye(2))
        cloud = sample_gmm(spec, 10_000, 3)
        assert np.abs(cloud.data.mean(axis=0)).max() <= 0.05
        assert np.abs(np.cov(cloud.data.T) - np.eye(2)).max() <= 0.05

    def test_point_mass_component(self):
        spec = GaussianMixtureSpec.single(np.array([2.0, -1.0]), 1e-18 * np.eye(2))
        cloud = sample_gmm(spec, 100, 0)
        assert np.abs(cloud.data - [2.0, -1.0]).max() <= 1e-8

    def test_component_counts_binomial(self):
        spec = GaussianMixtureSpec(
            (
                (0.5, np.array([10.0, 10.0]), 1e-6 * np.eye(2)),
                (0.5, np.array([-10.0, -10.0]), 1e-6 * np.eye(2)),
            ),
            dim=2,
        )
        cloud = sample_gmm(spec, 10_000, 5)
        n_pos = int((cloud.data[:, 0] > 0).sum())
        sigma = np.sqrt(10_000 * 0.25)
        assert abs(n_pos - 5000) <= 3 * sigma

    def test_deterministic(self):
        spec = GaussianMixtureSpec.single(np.zeros(3), np.eye(3))
        a = sample_gmm(spec, 64, 9)
        b = sample_gmm(spec, 64, 9)
        assert a.data.tobytes() == b.data.tobytes()

    def test_non_psd_rejected(self):
        spec = GaussianMixtureSpec.single(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(NumericError):
            sample_gmm(spec, 10, 0)


class TestScenario:
    def test_all_presets_materialize(self):
        for name in PRESET_NAMES:
            source, target, tag = scenario(name, 0, count=50)
            assert source.count == target.count == 50
            assert source.dim == target.dim == 2
            assert tag

    def test_unknown_preset(self):
        with pytest.raises(UnknownNameError):
            scenario("fig9_nope", 0)

    def test_bitwise_determinism(self):
        a_src, a_tgt, _ = scenario("fig7_distinct_gmm", 4)
        b_src, b_tgt, _ = scenario("fig7_distinct_gmm", 4)
        assert a_src.data.tobytes() == b_src.data.tobytes()
        assert a_tgt.data.tobytes() == b_tgt.data.tobytes()

    def test_same_preset_has_identical_parameters(self):
        source_spec, target_spec, _ = preset_specs("fig5_same")
        (w1, m1, c1) = source_spec.components[0]
        (w2, m2, c2) = target_spec.components[0]
        assert w1 == w2
        assert np.array_equal(m1, m2) and np.array_equal(c1, c2)
        src, tgt, _ = scenario("fig5_same", 0)
        assert src.data.tobytes() != tgt.data.tobytes()  # different draws

    def test_expectation_tags(self):
        assert scenario("fig6_tight_01", 0, count=10)[2] == "negative-then-zero"
        assert scenario("fig7_mode_collapsed", 0, count=10)[2] == "nonzero-sd-low-fid"

    def test_fig5_family_parameters(self):
        far, _, _ = preset_specs("fig5_far")
        _, target, _ = preset_specs("fig5_mid")
        assert np.allclose(far.components[0][1], [0.0, 0.0])
        assert np.allclose(target.components[0][1], [5.5, 5.5])
        assert np.allclose(target.components[0][2], 0.75 * np.eye(2))

    def test_fig6_variances(self):
        for name, var in (("fig6_tight_01", 0.1), ("fig6_tight_025", 0.25), ("fig6_wide", 1.0)):
            source, target, _ = preset_specs(name)
            assert np.allclose(source.components[0][2], var * np.eye(2))
            assert np.allclose(source.components[0][1], [5.5, 5.5])
            assert np.allclose(target.components[0][2], 0.75 * np.eye(2))

    def test_mode_collapsed_support_is_target_subset(self):
        collapsed, target, _ = preset_specs("fig7_mode_collapsed")
        target_means = {tuple(m) for _, m, _ in target.components}
        collapsed_means = [tuple(m) for _, m, _ in collapsed.components]
        assert len(collapsed_means) == 4
        assert set(collapsed_means) <= target_means

    def test_moment_matched_matches_target_moments(self):
        matched, target, _ = preset_specs("fig7_moment_matched")
        mu_t, cov_t = target.moments()
        assert len(matched.components) == 1
        np.testing.assert_allclose(matched.components[0][1], mu_t, atol=1e-12)
        np.testing.assert_allclose(matched.components[0][2], cov_t, atol=1e-12)

    def test_fig7_target_modes_in_unit_square(self):
        _, target, _ = preset_specs("fig7_distinct_gmm")
        for _, mean, cov in target.components:
            assert (0 <= mean).all() and (mean <= 1).all()
            np.testing.assert_allclose(cov, 0.02 * np.eye(2), atol=1e-15)
