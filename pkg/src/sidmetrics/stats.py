"""Per-cloud statistics consumed by every metric: mean, covariance, spread, spectrum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import EmbeddingCloud
from .errors import InsufficientSamplesError, NumericError


@dataclass(frozen=True, eq=False)
class CloudStats:
    """Mean, unbiased sample covariance, max diagonal variance and eigen-pairs.

    ``eigenvalues`` are sorted descending; ``eigenvectors`` holds the matching
    orthonormal columns. Both are None unless requested.
    """

    mean: np.ndarray
    covariance: np.ndarray
    sigma_q: float
    eigenvalues: np.ndarray | None = None
    eigenvectors: np.ndarray | None = None


def compute_stats(cloud: EmbeddingCloud, with_eigen: bool = False) -> CloudStats:
    """Arithmetic mean, (N-1)-normalized covariance and, optionally, its spectrum.

    The covariance is explicitly symmetrized before decomposition to guard
    against floating-point asymmetry.
    """
    if cloud.count < 2:
        raise InsufficientSamplesError(
            f"sample covariance needs at least 2 samples, cloud has {cloud.count}"
        )
    mean = cloud.data.mean(axis=0)
    centered = cloud.data - mean
    cov = centered.T @ centered / (cloud.count - 1)
    cov = (cov + cov.T) / 2.0
    sigma_q = float(np.max(np.diag(cov)))
    eigenvalues = eigenvectors = None
    if with_eigen:
        eigenvalues, eigenvectors = _eigh_descending(cov)
    mean.setflags(write=False)
    cov.setflags(write=False)
    return CloudStats(mean, cov, sigma_q, eigenvalues, eigenvectors)


def _eigh_descending(sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed to converge: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def eigvals_descending(sym: np.ndarray) -> np.ndarray:
    """Eigenvalues only (descending); cheaper than the full decomposition."""
    try:
        w = np.linalg.eigvalsh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed to converge: {exc}") from exc
    w = w[::-1].copy()
    w.setflags(write=False)
    return w
