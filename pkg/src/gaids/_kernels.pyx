# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance kernels.

Same API as _kernels_py; sequential summation in C. Ties resolve to the
lowest index (strict-less comparison), matching np.argmin.
"""

from libc.math cimport sqrt, INFINITY

import numpy as np

BACKEND = "compiled"


cdef inline double _sqdist(const double[::1] a, const double[:, ::1] m, Py_ssize_t row) noexcept nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0, diff
    for j in range(a.shape[0]):
        diff = a[j] - m[row, j]
        acc += diff * diff
    return acc


def distance(const double[::1] a, const double[::1] b):
    """Dimension-normalized Euclidean distance sqrt(sum((a-b)^2)/n)."""
    cdef Py_ssize_t j, n = a.shape[0]
    cdef double acc = 0.0, diff
    if b.shape[0] != n:
        raise ValueError("vector lengths differ")
    for j in range(n):
        diff = a[j] - b[j]
        acc += diff * diff
    return sqrt(acc / n)


def nearest_centroid(const double[::1] x, const double[:, ::1] centroids):
    """Index and distance of the row of `centroids` nearest to `x`."""
    cdef Py_ssize_t i, best = 0, k = centroids.shape[0]
    cdef double d2, best_d2 = INFINITY
    if centroids.shape[1] != x.shape[0]:
        raise ValueError("vector lengths differ")
    for i in range(k):
        d2 = _sqdist(x, centroids, i)
        if d2 < best_d2:
            best_d2 = d2
            best = i
    return best, sqrt(best_d2 / centroids.shape[1])


def batch_fitness(
    const double[:, ::1] genes,
    const double[:, ::1] centroids,
    const double[::1] spreads,
    double eps,
):
    """Spread-normalized nearest scan for a population.

    Returns (min values, argmin indices) as numpy arrays.
    """
    cdef Py_ssize_t i, j, p = genes.shape[0], k = centroids.shape[0]
    cdef Py_ssize_t n = centroids.shape[1]
    cdef double z, best_z
    cdef Py_ssize_t best
    if genes.shape[1] != n:
        raise ValueError("vector lengths differ")
    out_np = np.empty(p, dtype=np.float64)
    idx_np = np.empty(p, dtype=np.intp)
    cdef double[::1] out = out_np
    cdef Py_ssize_t[::1] idx = idx_np
    with nogil:
        for i in range(p):
            best = 0
            best_z = INFINITY
            for j in range(k):
                z = sqrt(_sqdist(genes[i], centroids, j) / n) / (spreads[j] + eps)
                if z < best_z:
                    best_z = z
                    best = j
            out[i] = best_z
            idx[i] = best
    return out_np, idx_np
