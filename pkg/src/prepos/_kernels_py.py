"""NumPy implementations of the simplex inner-loop kernels.

These are the fallback twins of the compiled kernels in ``_speedups``;
both expose the same signatures and figure in the same iteration loop.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def ftran_etas(eta_rows, eta_cols, k, z):
    """Apply the k stored eta inverses to z in place (forward transform)."""
    for t in range(k):
        r = int(eta_rows[t])
        d = eta_cols[t]
        piv = z[r] / d[r]
        if piv != 0.0:
            z -= d * piv
        z[r] = piv


def btran_etas(eta_rows, eta_cols, k, z):
    """Apply the k stored eta inverse-transposes to z in place, newest first."""
    for t in range(k - 1, -1, -1):
        r = int(eta_rows[t])
        d = eta_cols[t]
        zr = z[r]
        rest = float(np.dot(d, z)) - d[r] * zr
        z[r] = (zr - rest) / d[r]


def price_dantzig(reduced, eligible, tol):
    """Most negative eligible reduced cost; first index on ties; -1 if none."""
    cand = np.where(eligible, reduced, np.inf)
    j = int(np.argmin(cand))
    if cand[j] < -tol:
        return j
    return -1


def price_bland(reduced, eligible, tol):
    """Lowest-index eligible column with reduced cost below -tol; -1 if none."""
    hits = np.flatnonzero(eligible & (reduced < -tol))
    return int(hits[0]) if hits.size else -1


def ratio_test(x_basic, direction, basis, pivot_tol):
    """Smallest nonneg ratio x_basic/direction over direction > pivot_tol.

    Ties are broken toward the lowest basic column index.  Returns
    (row, theta), or (-1, 0.0) when no row limits the step (unbounded).
    """
    elig = direction > pivot_tol
    if not elig.any():
        return -1, 0.0
    xb = np.where(x_basic > 0.0, x_basic, 0.0)
    safe = np.where(elig, direction, 1.0)
    ratios = np.where(elig, xb / safe, np.inf)
    theta = float(ratios.min())
    ties = np.flatnonzero(ratios == theta)
    if ties.size == 1:
        row = int(ties[0])
    else:
        row = int(ties[np.argmin(basis[ties])])
    return row, theta


def update_basics(x_basic, direction, row, theta):
    """Step the basic values: x_B -= theta * d, entering value at row."""
    if theta != 0.0:
        x_basic -= theta * direction
    x_basic[row] = theta
