# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex inner-loop kernels; mirrors ``_kernels_py``."""

import numpy as np

cimport numpy as cnp

BACKEND_NAME = "cython"


def ftran_etas(cnp.int64_t[::1] eta_rows, double[:, ::1] eta_cols,
               Py_ssize_t k, double[::1] z):
    """Apply the k stored eta inverses to z in place (forward transform)."""
    cdef Py_ssize_t t, i, r
    cdef Py_ssize_t m = z.shape[0]
    cdef double piv
    for t in range(k):
        r = <Py_ssize_t> eta_rows[t]
        piv = z[r] / eta_cols[t, r]
        if piv != 0.0:
            for i in range(m):
                z[i] -= eta_cols[t, i] * piv
        z[r] = piv


def btran_etas(cnp.int64_t[::1] eta_rows, double[:, ::1] eta_cols,
               Py_ssize_t k, double[::1] z):
    """Apply the k stored eta inverse-transposes to z in place, newest first."""
    cdef Py_ssize_t t, i, r
    cdef Py_ssize_t m = z.shape[0]
    cdef double zr, rest
    for t in range(k - 1, -1, -1):
        r = <Py_ssize_t> eta_rows[t]
        zr = z[r]
        rest = 0.0
        for i in range(m):
            rest += eta_cols[t, i] * z[i]
        rest -= eta_cols[t, r] * zr
        z[r] = (zr - rest) / eta_cols[t, r]


def price_dantzig(double[::1] reduced, cnp.uint8_t[::1] eligible, double tol):
    """Most negative eligible reduced cost; first index on ties; -1 if none."""
    cdef Py_ssize_t j, best = -1
    cdef Py_ssize_t n = reduced.shape[0]
    cdef double best_val = -tol
    for j in range(n):
        if eligible[j] and reduced[j] < best_val:
            best_val = reduced[j]
            best = j
    return best


def price_bland(double[::1] reduced, cnp.uint8_t[::1] eligible, double tol):
    """Lowest-index eligible column with reduced cost below -tol; -1 if none."""
    cdef Py_ssize_t j
    cdef Py_ssize_t n = reduced.shape[0]
    for j in range(n):
        if eligible[j] and reduced[j] < -tol:
            return j
    return -1


def ratio_test(double[::1] x_basic, double[::1] direction,
               cnp.int64_t[::1] basis, double pivot_tol):
    """Smallest nonneg ratio x_basic/direction over direction > pivot_tol.

    Ties are broken toward the lowest basic column index.  Returns
    (row, theta), or (-1, 0.0) when no row limits the step (unbounded).
    """
    cdef Py_ssize_t i, row = -1
    cdef Py_ssize_t m = x_basic.shape[0]
    cdef double theta = np.inf
    cdef double xb, ratio
    cdef cnp.int64_t best_basis
    for i in range(m):
        if direction[i] > pivot_tol:
            xb = x_basic[i] if x_basic[i] > 0.0 else 0.0
            ratio = xb / direction[i]
            if ratio < theta:
                theta = ratio
    if theta == np.inf:
        return -1, 0.0
    best_basis = -1
    for i in range(m):
        if direction[i] > pivot_tol:
            xb = x_basic[i] if x_basic[i] > 0.0 else 0.0
            ratio = xb / direction[i]
            if ratio == theta and (best_basis < 0 or basis[i] < best_basis):
                best_basis = basis[i]
                row = i
    return row, theta


def update_basics(double[::1] x_basic, double[::1] direction,
                  Py_ssize_t row, double theta):
    """Step the basic values: x_B -= theta * d, entering value at row."""
    cdef Py_ssize_t i
    cdef Py_ssize_t m = x_basic.shape[0]
    if theta != 0.0:
        for i in range(m):
            x_basic[i] -= theta * direction[i]
    x_basic[row] = theta
