# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled nearest-codeword search under squared Euclidean distance."""
import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def nearest_sq(const double[:, ::1] points, const double[:, ::1] codebook):
    """Return (min squared distance, argmin index) for every row of ``points``."""
    cdef Py_ssize_t n_pts = points.shape[0]
    cdef Py_ssize_t n_code = codebook.shape[0]
    cdef Py_ssize_t dim = points.shape[1]
    cdef Py_ssize_t i, j, t
    cdef double best, acc, diff
    cdef Py_ssize_t best_j
    if codebook.shape[1] != dim:
        raise ValueError("points and codebook dimensions differ")
    if n_code == 0:
        raise ValueError("empty codebook")
    dist_arr = np.empty(n_pts, dtype=np.float64)
    idx_arr = np.empty(n_pts, dtype=np.int64)
    cdef double[::1] dist = dist_arr
    cdef long long[::1] idx = idx_arr
    with nogil:
        for i in range(n_pts):
            best = INFINITY
            best_j = 0
            for j in range(n_code):
                acc = 0.0
                for t in range(dim):
                    diff = points[i, t] - codebook[j, t]
                    acc = acc + diff * diff
                    if acc >= best:
                        break
                if acc < best:
                    best = acc
                    best_j = j
            dist[i] = best
            idx[i] = best_j
    return dist_arr, idx_arr


def cell_sums(const double[:, ::1] points, const long long[::1] labels, Py_ssize_t n_cells):
    """Per-cell coordinate sums and counts for a Lloyd update."""
    cdef Py_ssize_t n_pts = points.shape[0]
    cdef Py_ssize_t dim = points.shape[1]
    cdef Py_ssize_t i, t
    cdef long long lab
    sums_arr = np.zeros((n_cells, dim), dtype=np.float64)
    counts_arr = np.zeros(n_cells, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef long long[::1] counts = counts_arr
    with nogil:
        for i in range(n_pts):
            lab = labels[i]
            counts[lab] += 1
            for t in range(dim):
                sums[lab, t] += points[i, t]
    return sums_arr, counts_arr
