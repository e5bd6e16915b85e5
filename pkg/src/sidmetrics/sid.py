"""Signed distance between point clouds, hypercube sweeps and the cumulative score.

The signed distance of a source cloud from a target cloud is the Monte-Carlo
average, over test points drawn uniformly in a hypercube around the target,
of (mean kernel potential of the target) minus (mean kernel potential of the
source). Negative values mean the source is more concentrated than the target
inside that cube; identical clouds give exactly zero.

The sweep evaluates cubes of side ``k * sigma_q`` for multipliers ``k`` on a
fixed grid, where ``sigma_q`` is the largest diagonal entry of the target
covariance; summing the curve yields the cumulative score.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cloud import EmbeddingCloud
from .errors import DegenerateTargetError, KernelOverflowError, ShapeError
from .kernel import KernelSpec, direct_potentials
from .stats import compute_stats

CURVE_CSV_HEADER = "multiplier,side_r,sd,stderr"


@dataclass(frozen=True, eq=False)
class HypercubeSpec:
    """Axis-aligned cube: coordinate i spans ``center_i +- side/2``."""

    center: np.ndarray
    side: float

    def __post_init__(self):
        center = np.ascontiguousarray(self.center, dtype=np.float64).reshape(-1)
        if not np.isfinite(center).all():
            raise ValueError("cube center must be finite")
        if not (math.isfinite(self.side) and self.side > 0):
            raise ValueError(f"cube side must be positive and finite, got {self.side}")
        center.setflags(write=False)
        object.__setattr__(self, "center", center)

    @property
    def dim(self) -> int:
        return self.center.shape[0]


@dataclass(frozen=True)
class SweepConfig:
    """Grid and sampling parameters for a hypercube sweep."""

    multiplier_start: float = 1.0
    multiplier_stop: float = 100.0
    multiplier_step: float = 0.5
    test_points_per_r: int = 128
    batch_size: int = 100
    max_samples_per_cloud: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.multiplier_start > self.multiplier_stop:
            raise ValueError("multiplier_start must not exceed multiplier_stop")
        if self.multiplier_step <= 0:
            raise ValueError("multiplier_step must be positive")
        for name in ("test_points_per_r", "batch_size", "max_samples_per_cloud"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def multipliers(self) -> np.ndarray:
        span = self.multiplier_stop - self.multiplier_start
        steps = int(math.floor(span / self.multiplier_step + 1e-9))
        return self.multiplier_start + self.multiplier_step * np.arange(steps + 1)


@dataclass(frozen=True)
class SidEntry:
    multiplier: float
    side_r: float
    sd: float
    stderr: float


@dataclass(frozen=True)
class SidCurve:
    """Signed-distance values over the multiplier grid, with MC error bars."""

    entries: tuple[SidEntry, ...]
    kernel: KernelSpec
    config: SweepConfig
    source_label: str
    target_label: str

    def sd_values(self) -> np.ndarray:
        return np.array([e.sd for e in self.entries])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CURVE_CSV_HEADER + "\n")
        for e in self.entries:
            buf.write(f"{e.multiplier!r},{e.side_r!r},{e.sd!r},{e.stderr!r}\n")
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


@dataclass(frozen=True)
class CsidValue:
    """Sum of a curve's signed distances; the single-number proximity score."""

    value: float
    curve: SidCurve = field(repr=False)


def sample_hypercube(
    cube: HypercubeSpec, count: int, rng_seed: int | np.random.SeedSequence
) -> np.ndarray:
    """``count`` points with coordinate i uniform in ``center_i +- side/2``."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = np.random.default_rng(rng_seed)
    u = rng.random((count, cube.dim))
    return cube.center + cube.side * (u - 0.5)


def _check_dims(source: EmbeddingCloud, target: EmbeddingCloud, kernel: KernelSpec) -> None:
    if not (source.dim == target.dim == kernel.dim_n):
        raise ShapeError(
            f"source dim {source.dim}, target dim {target.dim} and kernel dim "
            f"{kernel.dim_n} must all agree"
        )


def _mean_potentials(
    x: np.ndarray, cloud: EmbeddingCloud, kernel: KernelSpec, chunk_size: int | None
) -> np.ndarray:
    return direct_potentials(x, cloud.data, kernel, chunk_size) / cloud.count


def signed_distance(
    source: EmbeddingCloud,
    target: EmbeddingCloud,
    kernel: KernelSpec,
    cube: HypercubeSpec,
    test_points: int = 128,
    rng_seed: int | np.random.SeedSequence = 0,
    chunk_size: int | None = None,
) -> tuple[float, float]:
    """Monte-Carlo signed distance of ``source`` from ``target`` over one cube.

    Returns ``(sd, stderr)`` where ``stderr`` is the sample standard deviation
    of the per-test-point values divided by sqrt(test_points). Deterministic
    for a given seed; swapping the clouds at a fixed cube negates ``sd``
    exactly, and ``source is target`` data gives exactly zero.
    """
    _check_dims(source, target, kernel)
    if cube.dim != kernel.dim_n:
        raise ShapeError(f"cube dim {cube.dim} != kernel dim {kernel.dim_n}")
    x = sample_hypercube(cube, test_points, rng_seed)
    pot_target = _mean_potentials(x, target, kernel, chunk_size)
    pot_source = _mean_potentials(x, source, kernel, chunk_size)
    per_point = pot_target - pot_source
    if not np.isfinite(per_point).all():
        raise KernelOverflowError(
            "kernel potentials overflowed float64 during signed-distance evaluation",
            exponent_magnitude=math.inf,
        )
    sd = float(per_point.mean())
    if test_points > 1:
        stderr = float(per_point.std(ddof=1) / math.sqrt(test_points))
    else:
        stderr = 0.0
    return sd, stderr


def _subsample(
    cloud: EmbeddingCloud, cap: int, seed_seq: np.random.SeedSequence
) -> EmbeddingCloud:
    """First ``cap`` rows after a seeded shuffle; identity when small enough.

    The permutation depends only on the seed and the row count, never on the
    cloud's role, so a sweep of a cloud against itself stays exactly zero.
    """
    if cloud.count <= cap:
        return cloud
    perm = np.random.default_rng(seed_seq).permutation(cloud.count)[:cap]
    return EmbeddingCloud(cloud.label, cloud.data[perm], cloud.tags)


def sid_sweep(
    source: EmbeddingCloud,
    target: EmbeddingCloud,
    kernel: KernelSpec,
    config: SweepConfig,
    threads: int = 1,
) -> SidCurve:
    """Evaluate the signed distance over the whole multiplier grid.

    Each grid entry draws its test points from a seed stream derived from
    (config.seed, entry index), so the curve is bitwise identical regardless
    of thread count or scheduling.
    """
    _check_dims(source, target, kernel)
    mults = config.multipliers()
    children = np.random.SeedSequence(config.seed).spawn(len(mults) + 1)
    src = _subsample(source, config.max_samples_per_cloud, children[0])
    tgt = _subsample(target, config.max_samples_per_cloud, children[0])
    tgt_stats = compute_stats(tgt, with_eigen=False)
    sigma_q = tgt_stats.sigma_q
    if sigma_q <= 0:
        raise DegenerateTargetError(
            f"target {target.label!r} has zero spread (sigma_q={sigma_q}); "
            "cannot build a hypercube sweep"
        )

    def entry(i: int) -> SidEntry:
        mult = float(mults[i])
        side = mult * sigma_q
        cube = HypercubeSpec(tgt_stats.mean, side)
        sd, stderr = signed_distance(
            src,
            tgt,
            kernel,
            cube,
            test_points=config.test_points_per_r,
            rng_seed=children[i + 1],
            chunk_size=config.batch_size,
        )
        return SidEntry(mult, side, sd, stderr)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = tuple(pool.map(entry, range(len(mults))))
    else:
        entries = tuple(entry(i) for i in range(len(mults)))
    return SidCurve(entries, kernel, config, source.label, target.label)


def csid(curve: SidCurve) -> CsidValue:
    """Cumulative signed distance: the sum of the curve's sd values."""
    if not curve.entries:
        raise ValueError("curve has no entries")
    return CsidValue(math.fsum(e.sd for e in curve.entries), curve)
