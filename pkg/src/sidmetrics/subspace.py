"""Eigen-subspace perturbation score between two clouds.

The bound compares the leading eigen-subspaces of the two sample covariances:

    2 * min(sqrt(d) * linf, fro) / min(gap at r-1, gap at s)

with ``d = s - r + 1``, ``fro`` the Frobenius norm of the covariance
difference, ``linf`` the max absolute eigenvalue difference (the cheap
operator-norm surrogate), and the eigen-gaps taken from the *second* cloud's
spectrum, padded with ``lambda_0 = +inf`` and ``lambda_{n+1} = -inf``. The
neighbor score fixes ``r = 1`` and takes the minimum bound over
``s = 3 .. ceil(n/10)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .cloud import EmbeddingCloud
from .errors import EmptyRangeError, ShapeError
from .stats import CloudStats, compute_stats, eigvals_descending

GAP_EPS = 1e-12


@dataclass(frozen=True)
class SinThetaReport:
    """Per-size bounds and their minimum; ``math.inf`` marks degenerate gaps."""

    min_value: float
    per_s: tuple[tuple[int, float], ...]
    dim_n: int
    fixed_r: int = 1


def sin_theta_bound(stats_p: CloudStats, stats_q: CloudStats, r: int, s: int) -> float:
    """Subspace-distance bound for eigenvectors ``r..s``; gaps from ``stats_q``.

    Returns ``math.inf`` instead of raising when the eigen-gap denominator is
    degenerate, so full table sweeps survive repeated eigenvalues.
    """
    if stats_p.eigenvalues is None or stats_q.eigenvalues is None:
        raise ValueError("both stats must carry eigenvalues")
    lam_p = stats_p.eigenvalues
    lam_q = stats_q.eigenvalues
    n = lam_q.shape[0]
    if not 1 <= r <= s <= n:
        raise ValueError(f"need 1 <= r <= s <= n, got r={r}, s={s}, n={n}")
    d = s - r + 1
    fro = float(np.linalg.norm(stats_p.covariance - stats_q.covariance, "fro"))
    linf = float(np.max(np.abs(lam_p - lam_q)))
    numerator = 2.0 * min(math.sqrt(d) * linf, fro)
    upper = math.inf if r == 1 else float(lam_q[r - 2])
    lower = -math.inf if s == n else float(lam_q[s])
    denominator = min(upper - float(lam_q[r - 1]), float(lam_q[s - 1]) - lower)
    if denominator <= GAP_EPS:
        return math.inf
    return numerator / denominator


def min_sin_theta(cloud_p: EmbeddingCloud, cloud_q: EmbeddingCloud) -> SinThetaReport:
    """Minimum bound over subspace sizes ``s = 3 .. ceil(n/10)`` with ``r = 1``.

    Only the spectra are needed, so the eigenvalue-only solver is used instead
    of a full eigendecomposition.
    """
    if cloud_p.dim != cloud_q.dim:
        raise ShapeError(f"cloud dims differ: {cloud_p.dim} vs {cloud_q.dim}")
    n = cloud_p.dim
    s_max = math.ceil(n / 10)
    if s_max < 3:
        raise EmptyRangeError(
            f"dimension {n} gives an empty subspace-size range (need n >= 30)"
        )
    stats_p = _stats_with_spectrum(cloud_p)
    stats_q = _stats_with_spectrum(cloud_q)
    per_s = tuple((s, sin_theta_bound(stats_p, stats_q, 1, s)) for s in range(3, s_max + 1))
    finite = [bound for _, bound in per_s if math.isfinite(bound)]
    return SinThetaReport(min(finite) if finite else math.inf, per_s, dim_n=n)


def _stats_with_spectrum(cloud: EmbeddingCloud) -> CloudStats:
    base = compute_stats(cloud, with_eigen=False)
    return replace(base, eigenvalues=eigvals_descending(base.covariance))
