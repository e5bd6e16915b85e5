# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: radial power / log-weighted sums over a set of centers.

Each function takes query points ``x`` (M, d) and centers ``c`` (N, d) and
returns one accumulated value per query point. Accumulation order is fixed
(center index ascending), so results are bitwise reproducible.
"""

from libc.math cimport exp, log, pow, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _int_pow(double r, int e) noexcept nogil:
    # e >= 0; exponentiation by squaring
    cdef double acc = 1.0
    cdef double base = r
    while e > 0:
        if e & 1:
            acc *= base
        base *= base
        e >>= 1
    return acc


cdef inline bint _is_small_int(double p) noexcept nogil:
    return p == <double><long long>p and -32.0 <= p <= 32.0


cdef inline double _sq_dist(const double[:, ::1] x, const double[:, ::1] c,
                            Py_ssize_t i, Py_ssize_t j, Py_ssize_t d) noexcept nogil:
    # four independent partial sums give the compiler ILP without
    # sacrificing a fixed, reproducible accumulation order
    cdef double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, diff
    cdef Py_ssize_t k = 0
    while k + 4 <= d:
        diff = x[i, k] - c[j, k]
        s0 += diff * diff
        diff = x[i, k + 1] - c[j, k + 1]
        s1 += diff * diff
        diff = x[i, k + 2] - c[j, k + 2]
        s2 += diff * diff
        diff = x[i, k + 3] - c[j, k + 3]
        s3 += diff * diff
        k += 4
    while k < d:
        diff = x[i, k] - c[j, k]
        s0 += diff * diff
        k += 1
    return (s0 + s1) + (s2 + s3)


def power_sums(const double[:, ::1] x, const double[:, ::1] c, double p, double kappa, double floor):
    """sum_j kappa * max(||x_i - c_j||, floor)^p for every query row i."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc, r
    cdef bint fast = _is_small_int(p)
    cdef int ip = <int>p if fast else 0
    cdef bint neg = ip < 0
    cdef int ae = -ip if neg else ip
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                r = sqrt(_sq_dist(x, c, i, j, d))
                if r < floor:
                    r = floor
                if fast:
                    acc += 1.0 / _int_pow(r, ae) if neg else _int_pow(r, ae)
                else:
                    acc += pow(r, p)
            out[i] = kappa * acc
    return out_arr


def logweighted_sums(const double[:, ::1] x, const double[:, ::1] c, double p, double kappa, double floor):
    """sum_j kappa * max(||x_i - c_j||, floor)^p * ln(max(||x_i - c_j||, floor))."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc, r
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                r = sqrt(_sq_dist(x, c, i, j, d))
                if r < floor:
                    r = floor
                acc += pow(r, p) * log(r)
            out[i] = kappa * acc
    return out_arr


def log_power_sums(const double[:, ::1] x, const double[:, ::1] c, double p, double kappa, double floor):
    """ln(sum_j kappa * r_ij^p) per query row, accumulated as a log-sum-exp."""
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    out_arr = np.empty(m, dtype=np.float64)
    scratch_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] scratch = scratch_arr
    cdef Py_ssize_t i, j
    cdef double r, amax, acc, log_kappa
    log_kappa = log(kappa)
    with nogil:
        for i in range(m):
            amax = -1e308
            for j in range(n):
                r = sqrt(_sq_dist(x, c, i, j, d))
                if r < floor:
                    r = floor
                scratch[j] = p * log(r) + log_kappa
                if scratch[j] > amax:
                    amax = scratch[j]
            acc = 0.0
            for j in range(n):
                acc += exp(scratch[j] - amax)
            out[i] = amax + log(acc)
    return out_arr
