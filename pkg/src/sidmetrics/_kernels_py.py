"""Pure-numpy twin of the compiled kernel core.

Same signatures and semantics as ``sidmetrics._kernels``; used when the
extension is not built or when SIDMETRICS_BACKEND=python forces it.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import logsumexp


def _floored_distances(x: np.ndarray, c: np.ndarray, floor: float) -> np.ndarray:
    d = cdist(x, c)
    np.maximum(d, floor, out=d)
    return d


def power_sums(x, c, p, kappa, floor):
    d = _floored_distances(x, c, floor)
    with np.errstate(over="ignore", under="ignore"):
        np.power(d, p, out=d)
        return kappa * d.sum(axis=1)


def logweighted_sums(x, c, p, kappa, floor):
    d = _floored_distances(x, c, floor)
    logs = np.log(d)
    with np.errstate(over="ignore", under="ignore"):
        np.power(d, p, out=d)
        d *= logs
        return kappa * d.sum(axis=1)


def log_power_sums(x, c, p, kappa, floor):
    d = _floored_distances(x, c, floor)
    np.log(d, out=d)
    d *= p
    d += math.log(kappa)
    return logsumexp(d, axis=1)
