"""Seeded synthetic source/target pairs used by tests, demos and the CLI.

The presets cover three families of 2-D experiments:

* ``fig5_*``   same-spread Gaussians at decreasing mean distance;
* ``fig6_*``   same-mean Gaussians with tighter or wider spread;
* ``fig7_*``   an 8-component Gaussian-mixture target versus a moment-matched
  Gaussian, a different 8-component mixture, and a source collapsed onto 4 of
  the target's modes.

Mixture component means are drawn once from documented internal seeds
(TARGET_MEAN_SEED / DISTINCT_MEAN_SEED) so a preset always denotes the same
pair of distributions; the caller's seed only drives the sample draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cloud import EmbeddingCloud
from .errors import NumericError, UnknownNameError

DEFAULT_SAMPLES = 500

TARGET_MEAN_SEED = 7
DISTINCT_MEAN_SEED = 11
GMM_COMPONENTS = 8
GMM_COMPONENT_VAR = 0.02

PRESET_NAMES = (
    "fig5_far",
    "fig5_mid",
    "fig5_same",
    "fig6_tight_01",
    "fig6_tight_025",
    "fig6_wide",
    "fig7_moment_matched",
    "fig7_distinct_gmm",
    "fig7_mode_collapsed",
)


@dataclass(frozen=True, eq=False)
class GaussianMixtureSpec:
    """Weighted Gaussian components; weights must sum to one."""

    components: tuple[tuple[float, np.ndarray, np.ndarray], ...]
    dim: int

    def __post_init__(self):
        comps = []
        for weight, mean, cov in self.components:
            if weight <= 0:
                raise ValueError(f"component weight must be positive, got {weight}")
            mean = np.ascontiguousarray(mean, dtype=np.float64).reshape(-1)
            cov = np.asarray(cov, dtype=np.float64)
            if cov.ndim == 1:
                cov = np.diag(cov)
            if cov.shape != (self.dim, self.dim) or mean.shape != (self.dim,):
                raise ValueError("component mean/covariance shape mismatch")
            if not np.allclose(cov, cov.T, rtol=0, atol=1e-12 * max(1.0, abs(cov).max())):
                raise ValueError("component covariance must be symmetric")
            mean.setflags(write=False)
            cov.setflags(write=False)
            comps.append((float(weight), mean, cov))
        total = sum(w for w, _, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total}")
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def single(cls, mean: np.ndarray, cov: np.ndarray) -> "GaussianMixtureSpec":
        mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        return cls(((1.0, mean, cov),), dim=mean.shape[0])

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Analytic mean and covariance of the mixture."""
        mu = sum(w * m for w, m, _ in self.components)
        cov = sum(w * (c + np.outer(m, m)) for w, m, c in self.components)
        cov = cov - np.outer(mu, mu)
        return mu, (cov + cov.T) / 2.0


def sample_gmm(
    spec: GaussianMixtureSpec,
    count: int,
    seed: int | np.random.SeedSequence,
    label: str = "gmm",
) -> EmbeddingCloud:
    """Draw ``count`` samples: pick a component per weights, then mean + L z."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = np.random.default_rng(seed)
    weights = np.array([w for w, _, _ in spec.components])
    idx = rng.choice(len(spec.components), size=count, p=weights)
    z = rng.standard_normal((count, spec.dim))
    out = np.empty((count, spec.dim))
    for k, (_, mean, cov) in enumerate(spec.components):
        rows = idx == k
        if not rows.any():
            continue
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"component {k} covariance is not PSD: {exc}") from exc
        out[rows] = mean + z[rows] @ chol.T
    return EmbeddingCloud(label, out)


def _gmm_means(seed: int) -> np.ndarray:
    return np.random.default_rng(seed).random((GMM_COMPONENTS, 2))


def _equal_weight_gmm(means: np.ndarray) -> GaussianMixtureSpec:
    cov = GMM_COMPONENT_VAR * np.eye(2)
    comps = tuple((1.0 / len(means), m, cov) for m in means)
    return GaussianMixtureSpec(comps, dim=2)


def _moment_closest_subset(target: GaussianMixtureSpec, size: int) -> tuple[int, ...]:
    """The size-k component subset whose mixture moments best match the target.

    Collapsing onto approximately moment-matched modes is what makes the
    mode-collapse scenario invisible to moment-based distances.
    """
    mu_t, cov_t = target.moments()
    best = None
    best_score = np.inf
    for subset in combinations(range(len(target.components)), size):
        sub = GaussianMixtureSpec(
            tuple((1.0 / size, target.components[i][1], target.components[i][2]) for i in subset),
            dim=target.dim,
        )
        mu_s, cov_s = sub.moments()
        score = float(((mu_s - mu_t) ** 2).sum() + ((cov_s - cov_t) ** 2).sum())
        if score < best_score:
            best_score = score
            best = subset
    return best


def _fig7_target() -> GaussianMixtureSpec:
    return _equal_weight_gmm(_gmm_means(TARGET_MEAN_SEED))


def _fig7_sources() -> dict[str, GaussianMixtureSpec]:
    target = _fig7_target()
    mu, cov = target.moments()
    collapsed_idx = _moment_closest_subset(target, 4)
    collapsed = GaussianMixtureSpec(
        tuple(
            (0.25, target.components[i][1], target.components[i][2]) for i in collapsed_idx
        ),
        dim=2,
    )
    return {
        "fig7_moment_matched": GaussianMixtureSpec.single(mu, cov),
        "fig7_distinct_gmm": _equal_weight_gmm(_gmm_means(DISTINCT_MEAN_SEED)),
        "fig7_mode_collapsed": collapsed,
    }


def _gauss(mean_value: float, variance: float) -> GaussianMixtureSpec:
    return GaussianMixtureSpec.single(
        np.full(2, mean_value), variance * np.eye(2)
    )


def _fig56_target() -> GaussianMixtureSpec:
    return _gauss(5.5, 0.75)


_PRESETS: dict[str, tuple] = {
    "fig5_far": (lambda: _gauss(0.0, 0.75), "positive-then-zero"),
    "fig5_mid": (lambda: _gauss(2.5, 0.75), "positive-then-zero"),
    "fig5_same": (lambda: _gauss(5.5, 0.75), "zero-everywhere"),
    "fig6_tight_01": (lambda: _gauss(5.5, 0.1), "negative-then-zero"),
    "fig6_tight_025": (lambda: _gauss(5.5, 0.25), "negative-then-zero"),
    "fig6_wide": (lambda: _gauss(5.5, 1.0), "positive-then-zero"),
    "fig7_moment_matched": (None, "negative-csid"),
    "fig7_distinct_gmm": (None, "sign-flipping"),
    "fig7_mode_collapsed": (None, "nonzero-sd-low-fid"),
}


def preset_specs(name: str) -> tuple[GaussianMixtureSpec, GaussianMixtureSpec, str]:
    """(source distribution, target distribution, expectation tag) for a preset."""
    if name not in _PRESETS:
        raise UnknownNameError(f"unknown preset {name!r}; have {PRESET_NAMES}")
    source_fn, tag = _PRESETS[name]
    if name.startswith("fig7"):
        return _fig7_sources()[name], _fig7_target(), tag
    return source_fn(), _fig56_target(), tag


def scenario(
    name: str, seed: int, count: int = DEFAULT_SAMPLES
) -> tuple[EmbeddingCloud, EmbeddingCloud, str]:
    """Materialize a preset: seeded source and target clouds plus the tag.

    Source and target use independent child streams of ``seed``, so
    ``fig5_same`` yields parameter-identical distributions sampled with
    different draws.
    """
    source_spec, target_spec, tag = preset_specs(name)
    src_ss, tgt_ss = np.random.SeedSequence(seed).spawn(2)
    source = sample_gmm(source_spec, count, src_ss, label=f"{name}-source")
    target = sample_gmm(target_spec, count, tgt_ss, label=f"{name}-target")
    return source, target, tag
