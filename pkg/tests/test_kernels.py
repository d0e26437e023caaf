"""Parity between the compiled kernels and the NumPy fallbacks."""

import numpy as np
import pytest

from prepos import _kernels_py

try:
    from prepos import _speedups
except ImportError:
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None,
                               reason="compiled kernels not built")


def _random_etas(rng, k, m):
    rows = rng.integers(0, m, size=k).astype(np.int64)
    cols = rng.uniform(-2.0, 2.0, size=(8, m))
    for t in range(k):
        # keep pivots well away from zero
        cols[t, rows[t]] = rng.uniform(0.5, 2.0) * (1 if rng.random() < 0.5 else -1)
    return rows, cols


@needs_ext
def test_ftran_parity():
    rng = np.random.default_rng(1)
    for _ in range(50):
        m, k = 40, int(rng.integers(0, 8))
        rows, cols = _random_etas(rng, k, m)
        z = rng.uniform(-5.0, 5.0, m)
        z1, z2 = z.copy(), z.copy()
        _kernels_py.ftran_etas(rows, cols, k, z1)
        _speedups.ftran_etas(rows, cols, k, z2)
        assert np.array_equal(z1, z2)


@needs_ext
def test_btran_parity():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m, k = 40, int(rng.integers(0, 8))
        rows, cols = _random_etas(rng, k, m)
        z = rng.uniform(-5.0, 5.0, m)
        z1, z2 = z.copy(), z.copy()
        _kernels_py.btran_etas(rows, cols, k, z1)
        _speedups.btran_etas(rows, cols, k, z2)
        # dot-product association differs between BLAS and the C loop
        assert np.allclose(z1, z2, rtol=1e-12, atol=1e-12)


@needs_ext
def test_pricing_parity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        reduced = rng.uniform(-1.0, 1.0, n)
        eligible = (rng.random(n) < 0.7)
        tol = 1e-7
        view = eligible.view(np.uint8)
        assert (_kernels_py.price_dantzig(reduced, eligible, tol)
                == _speedups.price_dantzig(reduced, view, tol))
        assert (_kernels_py.price_bland(reduced, eligible, tol)
                == _speedups.price_bland(reduced, view, tol))


@needs_ext
def test_ratio_test_parity():
    rng = np.random.default_rng(4)
    for _ in range(200):
        m = int(rng.integers(1, 50))
        xb = rng.uniform(-0.1, 5.0, m)
        d = rng.uniform(-1.0, 1.0, m)
        basis = rng.permutation(m).astype(np.int64)
        row1, theta1 = _kernels_py.ratio_test(xb, d, basis, 1e-9)
        row2, theta2 = _speedups.ratio_test(xb, d, basis, 1e-9)
        assert row1 == row2
        assert theta1 == theta2


@needs_ext
def test_ratio_test_tie_breaks_lowest_basis_index():
    xb = np.array([2.0, 2.0, 2.0])
    d = np.array([1.0, 1.0, 1.0])
    basis = np.array([7, 3, 5], dtype=np.int64)
    for impl in (_kernels_py, _speedups):
        row, theta = impl.ratio_test(xb, d, basis, 1e-9)
        assert row == 1  # basis index 3 is the lowest among the ties
        assert theta == 2.0


@needs_ext
def test_update_parity():
    rng = np.random.default_rng(5)
    for _ in range(50):
        m = int(rng.integers(1, 50))
        xb = rng.uniform(0.0, 5.0, m)
        d = rng.uniform(-1.0, 1.0, m)
        row = int(rng.integers(0, m))
        theta = float(rng.uniform(0.0, 2.0))
        a, b = xb.copy(), xb.copy()
        _kernels_py.update_basics(a, d, row, theta)
        _speedups.update_basics(b, d, row, theta)
        assert np.array_equal(a, b)


@needs_ext
def test_backends_reach_same_objective():
    from prepos import build_lp, solve
    from _factories import hand_instance, random_instance
    for build in [hand_instance] + [lambda s=s: random_instance(s) for s in range(6)]:
        lp = build_lp(build())
        a = solve(lp, kernels=_kernels_py)
        b = solve(lp, kernels=_speedups)
        assert a.status == b.status == "optimal"
        assert a.objective == pytest.approx(b.objective, rel=1e-9, abs=1e-9)
