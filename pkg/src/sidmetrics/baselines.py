"""Baseline cloud distances: Frechet distance, kernel MMD^2 and image sharpness."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .cloud import EmbeddingCloud
from .errors import InsufficientSamplesError, NumericError, ShapeError
from .stats import compute_stats

FID_SAMPLE_CAP = 10_000
KID_SAMPLE_CAP = 5_000
KID_BLOCK = 1_000

LAPLACIAN = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])


@dataclass(frozen=True)
class FidReport:
    """Frechet distance between Gaussians fitted to two clouds."""

    value: float
    mean_term: float
    trace_term: float
    samples_used: tuple[int, int]


@dataclass(frozen=True)
class KidReport:
    """Unbiased squared MMD with the third-order polynomial kernel."""

    value: float
    block_count: int
    samples_used: tuple[int, int]


def _cap_cloud(cloud: EmbeddingCloud, cap: int, seed: int) -> EmbeddingCloud:
    if cloud.count <= cap:
        return cloud
    perm = np.random.default_rng(np.random.SeedSequence(seed)).permutation(cloud.count)
    return EmbeddingCloud(cloud.label, cloud.data[perm[:cap]], cloud.tags)


def _psd_sqrt(sym: np.ndarray, tol_scale: float) -> np.ndarray:
    w, v = np.linalg.eigh(sym)
    if w.min() < -1e-6 * tol_scale:
        raise NumericError(
            f"matrix square root hit eigenvalue {w.min():.3e}, below the "
            f"-1e-6 * {tol_scale:.3e} tolerance; covariance is not PSD"
        )
    np.clip(w, 0.0, None, out=w)
    return (v * np.sqrt(w)) @ v.T


def fid(a: EmbeddingCloud, b: EmbeddingCloud, seed: int = 0) -> FidReport:
    """Squared mean gap plus ``Tr(Sa + Sb - 2 (Sa Sb)^{1/2})``.

    The product square root is taken in the symmetric form
    ``Tr((Sa^{1/2} Sb Sa^{1/2})^{1/2})`` so the whole computation stays in
    real symmetric territory. Clouds above 10000 samples are subsampled with
    a seeded shuffle.
    """
    if a.dim != b.dim:
        raise ShapeError(f"cloud dims differ: {a.dim} vs {b.dim}")
    a = _cap_cloud(a, FID_SAMPLE_CAP, seed)
    b = _cap_cloud(b, FID_SAMPLE_CAP, seed)
    stats_a = compute_stats(a)
    stats_b = compute_stats(b)
    diff = stats_a.mean - stats_b.mean
    mean_term = float(diff @ diff)
    scale = max(
        float(np.abs(stats_a.covariance).max()),
        float(np.abs(stats_b.covariance).max()),
        1e-300,
    )
    root_a = _psd_sqrt(stats_a.covariance, scale)
    inner = root_a @ stats_b.covariance @ root_a
    inner = (inner + inner.T) / 2.0
    w = np.linalg.eigvalsh(inner)
    if w.min() < -1e-6 * max(float(np.abs(w).max()), 1e-300):
        raise NumericError(
            f"product square root hit eigenvalue {w.min():.3e} below tolerance"
        )
    np.clip(w, 0.0, None, out=w)
    tr_sqrt = float(np.sqrt(w).sum())
    trace_term = float(
        np.trace(stats_a.covariance) + np.trace(stats_b.covariance) - 2.0 * tr_sqrt
    )
    return FidReport(mean_term + trace_term, mean_term, trace_term, (a.count, b.count))


def _poly3(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return ((x @ y.T) / x.shape[1] + 1.0) ** 3


def _block_total(x: np.ndarray, y: np.ndarray, block: int) -> tuple[float, int]:
    total = 0.0
    blocks = 0
    for i in range(0, x.shape[0], block):
        for j in range(0, y.shape[0], block):
            total += float(_poly3(x[i : i + block], y[j : j + block]).sum())
            blocks += 1
    return total, blocks


def _canonical_order(a: EmbeddingCloud, b: EmbeddingCloud) -> bool:
    """True when (a, b) is already in canonical order; makes kid() exactly symmetric."""
    key_a = (a.count, a.label, hashlib.sha1(a.data.tobytes()).digest())
    key_b = (b.count, b.label, hashlib.sha1(b.data.tobytes()).digest())
    return key_a <= key_b


def kid(a: EmbeddingCloud, b: EmbeddingCloud, seed: int = 0) -> KidReport:
    """Unbiased squared MMD with kernel ``((x.y)/n + 1)^3``.

    A single estimator over min(count, 5000) samples per cloud, accumulated
    block-wise; the block partition does not change the result beyond float
    rounding, and the estimator is evaluated in a canonical cloud order so
    ``kid(a, b) == kid(b, a)`` exactly.
    """
    if a.dim != b.dim:
        raise ShapeError(f"cloud dims differ: {a.dim} vs {b.dim}")
    if a.count < 2 or b.count < 2:
        raise InsufficientSamplesError("kid needs at least 2 samples per cloud")
    a = _cap_cloud(a, KID_SAMPLE_CAP, seed)
    b = _cap_cloud(b, KID_SAMPLE_CAP, seed)
    if not _canonical_order(a, b):
        a, b = b, a
    x, y = a.data, b.data
    na, nb = x.shape[0], y.shape[0]
    total_xx, blocks_xx = _block_total(x, x, KID_BLOCK)
    total_yy, blocks_yy = _block_total(y, y, KID_BLOCK)
    total_xy, blocks_xy = _block_total(x, y, KID_BLOCK)
    diag_x = float(((np.einsum("ij,ij->i", x, x) / x.shape[1] + 1.0) ** 3).sum())
    diag_y = float(((np.einsum("ij,ij->i", y, y) / y.shape[1] + 1.0) ** 3).sum())
    term_a = (total_xx - diag_x) / (na * (na - 1))
    term_b = (total_yy - diag_y) / (nb * (nb - 1))
    cross = total_xy / (na * nb)
    value = term_a + term_b - 2.0 * cross
    return KidReport(value, blocks_xx + blocks_yy + blocks_xy, (na, nb))


def sharpness(images: list[np.ndarray]) -> float:
    """Mean, over images, of the variance of the 4-neighbor Laplacian edge map.

    Convolution is valid-mode, so images must be at least 3x3. Constant and
    linear-ramp images score exactly zero.
    """
    if not images:
        raise ValueError("sharpness needs at least one image")
    scores = []
    for idx, img in enumerate(images):
        arr = np.asarray(img, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 3 or arr.shape[1] < 3:
            raise ShapeError(
                f"image {idx} has shape {arr.shape}; need a 2-D matrix of at least 3x3"
            )
        edge = convolve2d(arr, LAPLACIAN, mode="valid")
        scores.append(float(edge.var()))
    return math.fsum(scores) / len(scores)
