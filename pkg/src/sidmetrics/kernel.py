"""Radial polyharmonic kernel: ``kappa * r^p``, with an ``ln r`` weight on one branch.

The exponent is ``p = 2m - n`` for order ``m`` in dimension ``n``. The
log-weighted branch applies exactly when ``p >= 0`` and ``n`` is even; every
other combination is a plain power law. A log-domain accumulation path keeps
sums representable when ``|p|`` is so large that direct evaluation leaves
float64 range.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .cloud import EmbeddingCloud
from .errors import KernelOverflowError, ShapeError, UnsupportedModeError

LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)
TINY_NORMAL = float(np.finfo(np.float64).tiny)


class Branch(enum.Enum):
    POWER = "power"
    LOG_WEIGHTED = "log-weighted"


class SumMode(enum.Enum):
    DIRECT = "direct"
    LOG_DOMAIN = "log-domain"


def _branch_for(exponent_p: int, dim_n: int) -> Branch:
    if exponent_p >= 0 and dim_n % 2 == 0:
        return Branch.LOG_WEIGHTED
    return Branch.POWER


@dataclass(frozen=True)
class KernelSpec:
    """Kernel parameters: order/dimension, derived exponent and branch."""

    dim_n: int
    exponent_p: int
    branch: Branch
    order_m: int | None = None
    kappa: float = 1.0
    radius_floor: float = 1e-12

    def __post_init__(self):
        if self.dim_n < 1:
            raise ValueError(f"dim_n must be positive, got {self.dim_n}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.radius_floor <= 0:
            raise ValueError(f"radius_floor must be positive, got {self.radius_floor}")
        if self.order_m is not None and self.order_m < 1:
            raise ValueError(f"order_m must be positive, got {self.order_m}")
        expected = _branch_for(self.exponent_p, self.dim_n)
        if self.branch is not expected:
            raise ValueError(
                f"branch {self.branch} inconsistent with p={self.exponent_p}, "
                f"n={self.dim_n}; expected {expected}"
            )

    @classmethod
    def from_order(
        cls, order_m: int, dim_n: int, kappa: float = 1.0, radius_floor: float = 1e-12
    ) -> "KernelSpec":
        p = 2 * order_m - dim_n
        return cls(dim_n, p, _branch_for(p, dim_n), order_m, kappa, radius_floor)

    @classmethod
    def from_exponent(
        cls, exponent_p: int, dim_n: int, kappa: float = 1.0, radius_floor: float = 1e-12
    ) -> "KernelSpec":
        """Build directly from the exponent; ``order_m`` is back-filled when integral."""
        m = (exponent_p + dim_n) // 2 if (exponent_p + dim_n) % 2 == 0 else None
        if m is not None and m < 1:
            m = None
        return cls(dim_n, exponent_p, _branch_for(exponent_p, dim_n), m, kappa, radius_floor)


@dataclass(frozen=True)
class KernelSumResult:
    """A kernel sum plus its extended-log representation.

    ``value`` is the best float64 rendering (0.0 once the true magnitude drops
    below subnormal range); ``log_magnitude`` and ``sign`` stay exact in that
    regime, and ``collapsed`` flags the mismatch.
    """

    value: float
    log_magnitude: float
    sign: int
    collapsed: bool = False

    def __float__(self) -> float:
        return self.value


def kernel_eval(spec: KernelSpec, distance: float) -> float:
    """Evaluate the kernel at one distance (floored at ``radius_floor``).

    Extreme exponents can saturate float64; :func:`kernel_sum` is the guarded
    path that turns saturation into errors/flags.
    """
    if not math.isfinite(distance) or distance < 0:
        raise ValueError(f"distance must be finite and non-negative, got {distance}")
    r = max(distance, spec.radius_floor)
    if spec.branch is Branch.LOG_WEIGHTED:
        return spec.kappa * r**spec.exponent_p * math.log(r)
    return spec.kappa * r**spec.exponent_p


def _as_center_matrix(centers: EmbeddingCloud | np.ndarray) -> np.ndarray:
    if isinstance(centers, EmbeddingCloud):
        return centers.data
    return np.ascontiguousarray(centers, dtype=np.float64)


def kernel_sum(
    spec: KernelSpec,
    query: np.ndarray,
    centers: EmbeddingCloud | np.ndarray,
    mode: SumMode = SumMode.DIRECT,
    chunk_size: int | None = None,
) -> KernelSumResult:
    """Sum the kernel between one query point and every center.

    Direct mode evaluates terms in float64; log-domain mode (power branch
    only) accumulates via log-sum-exp of ``p*ln(r) + ln(kappa)`` and only then
    exponentiates. Overflow raises :class:`KernelOverflowError`; underflow to
    zero/subnormal is reported through ``collapsed`` while ``log_magnitude``
    keeps the true scale.
    """
    cmat = _as_center_matrix(centers)
    q = np.ascontiguousarray(query, dtype=np.float64).reshape(1, -1)
    if q.shape[1] != cmat.shape[1] or q.shape[1] != spec.dim_n:
        raise ShapeError(
            f"query dim {q.shape[1]}, centers dim {cmat.shape[1]} and kernel dim "
            f"{spec.dim_n} must all agree"
        )
    if mode is SumMode.LOG_DOMAIN:
        if spec.branch is not Branch.POWER:
            raise UnsupportedModeError(
                "log-domain accumulation is defined for the power branch only"
            )
        lm = float(log_domain_potentials(q, cmat, spec, chunk_size)[0])
        if lm > LOG_FLOAT_MAX:
            raise KernelOverflowError(
                f"kernel sum overflows float64 (log magnitude {lm:.6g})",
                exponent_magnitude=lm,
            )
        value = math.exp(lm)
        return KernelSumResult(value, lm, 1, collapsed=value < TINY_NORMAL)
    total = float(direct_potentials(q, cmat, spec, chunk_size)[0])
    if not math.isfinite(total):
        worst = _worst_exponent(q, cmat, spec)
        raise KernelOverflowError(
            f"kernel sum overflows float64 (term exponent magnitude {worst:.6g})",
            exponent_magnitude=worst,
        )
    if spec.branch is Branch.POWER:
        # all terms are strictly positive, so an exact zero means collapse
        collapsed = abs(total) < TINY_NORMAL
        lm = math.log(abs(total)) if total != 0.0 else -math.inf
        return KernelSumResult(total, lm, 1 if total > 0 else 0, collapsed=collapsed)
    lm = math.log(abs(total)) if total != 0.0 else -math.inf
    sign = 0 if total == 0.0 else (1 if total > 0 else -1)
    return KernelSumResult(total, lm, sign)


def direct_potentials(
    x: np.ndarray,
    centers: np.ndarray,
    spec: KernelSpec,
    chunk_size: int | None = None,
) -> np.ndarray:
    """Direct kernel sums for a batch of query rows, chunked over centers."""
    impl = backend.get()
    fn = impl.power_sums if spec.branch is Branch.POWER else impl.logweighted_sums
    p, kappa, floor = float(spec.exponent_p), spec.kappa, spec.radius_floor
    n = centers.shape[0]
    if chunk_size is None or chunk_size >= n:
        return fn(x, centers, p, kappa, floor)
    acc = np.zeros(x.shape[0], dtype=np.float64)
    for start in range(0, n, chunk_size):
        acc += fn(x, centers[start : start + chunk_size], p, kappa, floor)
    return acc


def log_domain_potentials(
    x: np.ndarray,
    centers: np.ndarray,
    spec: KernelSpec,
    chunk_size: int | None = None,
) -> np.ndarray:
    """Log magnitudes of the kernel sums (power branch), chunked over centers."""
    impl = backend.get()
    p, kappa, floor = float(spec.exponent_p), spec.kappa, spec.radius_floor
    n = centers.shape[0]
    if chunk_size is None or chunk_size >= n:
        return impl.log_power_sums(x, centers, p, kappa, floor)
    acc = np.full(x.shape[0], -np.inf, dtype=np.float64)
    for start in range(0, n, chunk_size):
        part = impl.log_power_sums(x, centers[start : start + chunk_size], p, kappa, floor)
        acc = np.logaddexp(acc, part)
    return acc


def _worst_exponent(x: np.ndarray, centers: np.ndarray, spec: KernelSpec) -> float:
    lm = log_domain_potentials(x, centers, spec)
    return float(np.max(lm))
