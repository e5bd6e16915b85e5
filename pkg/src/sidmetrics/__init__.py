"""Proximity measures between embedding point clouds.

Signed kernel distances with a hypercube sweep and cumulative score, the
Frechet/kernel-MMD/sharpness baselines, an eigen-subspace perturbation score,
and a Borda-vote friendly-neighbor ranking engine, behind EMB1/CSV file
formats and a CLI.
"""

__version__ = "0.1.0"

from .backend import active_backend, available_backends
from .baselines import FidReport, KidReport, fid, kid, sharpness
from .cloud import EmbeddingCloud, read_cloud, write_cloud
from .kernel import Branch, KernelSpec, KernelSumResult, SumMode, kernel_eval, kernel_sum
from .ranking import (
    MetricTable,
    RankedSource,
    RankingResult,
    rank_single,
    rank_vote,
    read_metric_table,
)
from .scenarios import GaussianMixtureSpec, sample_gmm, scenario
from .sid import (
    CsidValue,
    HypercubeSpec,
    SidCurve,
    SidEntry,
    SweepConfig,
    csid,
    sample_hypercube,
    sid_sweep,
    signed_distance,
)
from .stats import CloudStats, compute_stats
from .subspace import SinThetaReport, min_sin_theta, sin_theta_bound

__all__ = [
    "__version__",
    "active_backend",
    "available_backends",
    "Branch",
    "CloudStats",
    "CsidValue",
    "EmbeddingCloud",
    "FidReport",
    "GaussianMixtureSpec",
    "HypercubeSpec",
    "KernelSpec",
    "KernelSumResult",
    "KidReport",
    "MetricTable",
    "RankedSource",
    "RankingResult",
    "SidCurve",
    "SidEntry",
    "SinThetaReport",
    "SumMode",
    "SweepConfig",
    "compute_stats",
    "csid",
    "fid",
    "kernel_eval",
    "kernel_sum",
    "kid",
    "min_sin_theta",
    "rank_single",
    "rank_vote",
    "read_cloud",
    "read_metric_table",
    "sample_gmm",
    "sample_hypercube",
    "scenario",
    "sharpness",
    "sid_sweep",
    "signed_distance",
    "sin_theta_bound",
    "write_cloud",
]
