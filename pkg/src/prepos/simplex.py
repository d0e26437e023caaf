"""Revised primal simplex for the pre-positioning LPs.

Standard-form problems (equalities plus slacks on <= rows, all variables
nonnegative) are solved with Dantzig pricing, a Bland's-rule fallback once
degenerate pivots stall progress, and ratio-test ties broken toward the
lowest basic column index, so runs are fully deterministic.

The basis is held as a sparse LU factorization (SuperLU) refreshed every
few dozen pivots, with product-form eta updates in between.  A triangular
crash basis is attempted first; the LPs produced by ``build_lp`` admit one
whose basic point is feasible, so they skip phase 1 entirely.  All other
problems go through a Big-M-free phase 1 over artificial columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from ._backend import kernels as _default_kernels
from .formulation import LinearProgram, VariableKey

_REFACTOR_EVERY = 64
_PIVOT_TOL = 1e-9
_STALL_LIMIT = 1000
_DEGENERATE_STEP = 1e-11
_CLEANUP_ROUNDS = 10

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class SolveOptions:
    feasibility_tolerance: float = 1e-7
    optimality_tolerance: float = 1e-7
    max_iterations: int = 10_000_000

    def __post_init__(self):
        if self.feasibility_tolerance <= 0 or self.optimality_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class Solution:
    status: str
    objective: float
    values: dict[VariableKey, float] = field(default_factory=dict)
    iterations: int = 0


class _Engine:
    """Simplex state over one standard-form matrix (artificials included)."""

    def __init__(self, A: sparse.csc_matrix, b: np.ndarray, fixed: np.ndarray,
                 first_artificial: int, opts: SolveOptions, kernels) -> None:
        self.A = A
        self.AT = A.T.tocsr()
        self.b = b
        self.m = A.shape[0]
        self.n_total = A.shape[1]
        self.first_artificial = first_artificial
        self.opts = opts
        self.K = kernels
        self.enterable = ~fixed
        self.enterable[first_artificial:] = False

        self.basis = np.zeros(self.m, dtype=np.int64)
        self.in_basis = np.zeros(self.n_total, dtype=bool)
        self.x_basic = np.zeros(self.m)
        self.eta_rows = np.zeros(_REFACTOR_EVERY, dtype=np.int64)
        self.eta_cols = np.zeros((_REFACTOR_EVERY, self.m))
        self.n_eta = 0
        self.lu = None
        self.iterations = 0
        self.stalled = 0
        self.bland = False
        self.just_refactored = False

        self.cost = np.zeros(self.n_total)
        self._work = np.zeros(self.m)
        self._reduced = np.zeros(self.n_total)
        self._not_basis = np.zeros(self.n_total, dtype=bool)
        self._eligible = np.zeros(self.n_total, dtype=bool)

    def set_basis(self, columns: np.ndarray) -> None:
        self.basis[:] = columns
        self.in_basis[:] = False
        self.in_basis[columns] = True
        self.n_eta = 0
        self.lu = None

    def refactor(self) -> None:
        basis_matrix = self.A[:, self.basis]
        self.lu = sparse_linalg.splu(basis_matrix.tocsc())
        self.n_eta = 0
        self.x_basic = self.lu.solve(self.b)
        self.just_refactored = True

    def btran(self, z: np.ndarray) -> np.ndarray:
        self.K.btran_etas(self.eta_rows, self.eta_cols, self.n_eta, z)
        return self.lu.solve(z, trans="T")

    def ftran_column(self, col: int) -> np.ndarray:
        self._work[:] = 0.0
        lo, hi = self.A.indptr[col], self.A.indptr[col + 1]
        self._work[self.A.indices[lo:hi]] = self.A.data[lo:hi]
        direction = self.lu.solve(self._work)
        self.K.ftran_etas(self.eta_rows, self.eta_cols, self.n_eta, direction)
        return direction

    def push_eta(self, row: int, direction: np.ndarray) -> None:
        self.eta_rows[self.n_eta] = row
        self.eta_cols[self.n_eta, :] = direction
        self.n_eta += 1

    def reduced_costs(self) -> np.ndarray:
        z = self.cost[self.basis].astype(float)
        y = self.btran(z)
        np.subtract(self.cost, self.AT @ y, out=self._reduced)
        return self._reduced

    def eligible_mask(self) -> np.ndarray:
        np.logical_not(self.in_basis, out=self._not_basis)
        np.logical_and(self.enterable, self._not_basis, out=self._eligible)
        return self._eligible

    def run(self, cost: np.ndarray, allow_unbounded: bool) -> str:
        """Iterate to optimality for the given cost vector."""
        self.cost[:] = cost
        self.stalled = 0
        self.bland = False
        if self.lu is None:
            self.refactor()
        tol = self.opts.optimality_tolerance
        while True:
            if self.iterations >= self.opts.max_iterations:
                return ITERATION_LIMIT
            if self.n_eta >= _REFACTOR_EVERY:
                self.refactor()
            reduced = self.reduced_costs()
            eligible = self.eligible_mask().view(np.uint8)
            if self.bland:
                entering = self.K.price_bland(reduced, eligible, tol)
            else:
                entering = self.K.price_dantzig(reduced, eligible, tol)
            if entering < 0:
                # re-verify optimality against a fresh factorization
                if self.just_refactored and self.n_eta == 0:
                    return OPTIMAL
                self.refactor()
                continue
            direction = self.ftran_column(entering)
            row, theta = self.K.ratio_test(self.x_basic, direction,
                                           self.basis, _PIVOT_TOL)
            if row < 0:
                if not allow_unbounded:
                    raise RuntimeError("phase-1 subproblem reported unbounded")
                return UNBOUNDED
            self.pivot(entering, row, theta, direction)

    def pivot(self, entering: int, row: int, theta: float,
              direction: np.ndarray) -> None:
        self.K.update_basics(self.x_basic, direction, row, theta)
        leaving = int(self.basis[row])
        self.in_basis[leaving] = False
        self.basis[row] = entering
        self.in_basis[entering] = True
        self.push_eta(row, direction)
        self.iterations += 1
        self.just_refactored = False
        if theta <= _DEGENERATE_STEP:
            self.stalled += 1
            if self.stalled >= _STALL_LIMIT:
                self.bland = True
        else:
            self.stalled = 0
            self.bland = False

    def drive_out_artificials(self) -> None:
        """Degenerate-pivot basic artificials out wherever a real column can
        replace them; rows where none can are redundant and keep their
        artificial at level ~0 (it is barred from re-entering)."""
        for row in range(self.m):
            if self.basis[row] < self.first_artificial:
                continue
            unit = np.zeros(self.m)
            unit[row] = 1.0
            rho = self.btran(unit)
            alpha = self.AT @ rho
            mask = self.eligible_mask() & (np.abs(alpha) > 1e-7)
            candidates = np.flatnonzero(mask)
            if candidates.size == 0:
                continue
            entering = int(candidates[0])
            direction = self.ftran_column(entering)
            if abs(direction[row]) <= 1e-9:
                continue
            theta = self.x_basic[row] / direction[row]
            self.pivot(entering, row, theta, direction)
            if self.n_eta >= _REFACTOR_EVERY:
                self.refactor()

    def extract(self) -> np.ndarray:
        x = np.zeros(self.n_total)
        x[self.basis] = self.x_basic
        return x


def _standard_form(lp: LinearProgram):
    """Equality system with rhs >= 0: slack columns appended on <= rows."""
    m, n = lp.n_rows, lp.n_columns
    coo = lp.A.tocoo()
    row_sign = np.where(lp.rhs < 0.0, -1.0, 1.0)
    slack_rows = np.flatnonzero(~lp.is_equality)
    rows = np.concatenate([coo.row, slack_rows])
    cols = np.concatenate([coo.col, n + np.arange(len(slack_rows))])
    vals = np.concatenate([coo.data * row_sign[coo.row], row_sign[slack_rows]])
    n_std = n + len(slack_rows)
    A = sparse.csc_matrix((vals, (rows, cols)), shape=(m, n_std))
    A.sort_indices()
    b = lp.rhs * row_sign
    fixed = np.concatenate([lp.fixed_zero, np.zeros(len(slack_rows), dtype=bool)])
    return A, b, fixed


def _crash_basis(A: sparse.csc_matrix, fixed: np.ndarray) -> np.ndarray | None:
    """Deterministic triangular crash: pick, per row, the lowest column whose
    first nonzero sits in that row.  Succeeds iff every row is covered."""
    m = A.shape[0]
    indptr, indices = A.indptr, A.indices
    if len(indices) == 0:
        return None
    has_entries = indptr[1:] > indptr[:-1]
    first_entry = indices[np.minimum(indptr[:-1], len(indices) - 1)]
    min_row = np.where(has_entries, first_entry, -1)
    valid = (min_row >= 0) & ~fixed
    rows_v = min_row[valid]
    cols_v = np.flatnonzero(valid)
    covered, first = np.unique(rows_v, return_index=True)
    if covered.size != m:
        return None
    return cols_v[first].astype(np.int64)


def solve(lp: LinearProgram, opts: SolveOptions | None = None,
          kernels=None) -> Solution:
    """Solve to proven optimality; deterministic for identical input."""
    opts = opts or SolveOptions()
    K = kernels if kernels is not None else _default_kernels

    n = lp.n_columns
    if lp.n_rows == 0:
        free_negative = (lp.objective < 0.0) & ~lp.fixed_zero
        if free_negative.any():
            return Solution(UNBOUNDED, float("nan"))
        values = {key: 0.0 for key in lp.columns}
        return Solution(OPTIMAL, 0.0, values)

    A, b, fixed = _standard_form(lp)
    m = A.shape[0]
    feas_tol = opts.feasibility_tolerance
    scale = max(1.0, float(np.abs(b).max()))

    crash = _crash_basis(A, fixed)
    engine = None
    if crash is not None:
        engine = _Engine(A, b, fixed, A.shape[1], opts, K)
        engine.set_basis(crash)
        engine.refactor()
        if engine.x_basic.min() < -feas_tol * scale:
            engine = None

    if engine is None:
        # phase 1: artificial columns on every row a nonnegative slack
        # cannot seed, minimizing their sum
        seeds = {}
        slack_ordinal = lp.n_columns
        for r in np.flatnonzero(~lp.is_equality):
            if lp.rhs[r] >= 0.0:
                seeds[int(r)] = slack_ordinal
            slack_ordinal += 1
        art_rows = [r for r in range(m) if r not in seeds]
        n_std = A.shape[1]
        art = sparse.csc_matrix(
            (np.ones(len(art_rows)), (art_rows, np.arange(len(art_rows)))),
            shape=(m, len(art_rows)))
        A_art = sparse.hstack([A, art], format="csc")
        A_art.sort_indices()
        fixed_art = np.concatenate([fixed, np.zeros(len(art_rows), dtype=bool)])
        engine = _Engine(A_art, b, fixed_art, n_std, opts, K)
        basis0 = np.zeros(m, dtype=np.int64)
        next_art = n_std
        for r in range(m):
            if r in seeds:
                basis0[r] = seeds[r]
            else:
                basis0[r] = next_art
                next_art += 1
        engine.set_basis(basis0)
        phase1_cost = np.zeros(A_art.shape[1])
        phase1_cost[n_std:] = 1.0
        status = engine.run(phase1_cost, allow_unbounded=False)
        if status == ITERATION_LIMIT:
            return Solution(ITERATION_LIMIT, float("nan"),
                            iterations=engine.iterations)
        engine.refactor()
        artificial_level = float(
            engine.x_basic[engine.basis >= n_std].sum()) if m else 0.0
        if artificial_level > feas_tol * scale:
            return Solution(INFEASIBLE, float("nan"),
                            iterations=engine.iterations)
        engine.drive_out_artificials()

    phase2_cost = np.zeros(engine.n_total)
    phase2_cost[:n] = lp.objective
    for _ in range(_CLEANUP_ROUNDS):
        status = engine.run(phase2_cost, allow_unbounded=True)
        if status != OPTIMAL:
            return Solution(status, float("nan"), iterations=engine.iterations)
        engine.refactor()
        x = engine.extract()
        residual = np.abs(engine.A @ x - b).max() if m else 0.0
        artificial = x[engine.first_artificial:]
        artificial_level = float(artificial.max()) if artificial.size else 0.0
        if (engine.x_basic.min() >= -feas_tol * scale
                and residual <= feas_tol * scale
                and artificial_level <= feas_tol * scale):
            break
    else:
        raise RuntimeError("simplex failed to reach a clean optimal basis")

    x_struct = x[:n].copy()
    tiny = (x_struct < 0.0) & (x_struct >= -feas_tol * scale)
    x_struct[tiny] = 0.0
    objective = float(lp.objective @ x_struct)
    values = {key: float(x_struct[k]) for k, key in enumerate(lp.columns)}
    return Solution(OPTIMAL, objective, values, engine.iterations)
