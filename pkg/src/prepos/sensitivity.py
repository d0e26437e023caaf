"""Cost-parameter sweeps: re-solve under multiplied unit costs and report
percentage changes of each cost component."""

from __future__ import annotations

import csv
import dataclasses
import io
from dataclasses import dataclass
from typing import Sequence

from .formulation import CostBreakdown, build_lp, decompose_costs
from .instance import Instance
from .simplex import OPTIMAL, SolveOptions, solve

SWEEP_PARAMETERS = ("holding", "penalty", "removal")

_PARAMETER_FIELD = {
    "holding": "holding_cost",
    "penalty": "penalty_cost",
    "removal": "removal_cost",
}

COMPONENT_ORDER = ("Q", "O", "U", "V", "R", "total")

REPORT_HEADER = ["multiplier", "Q", "O", "U", "V", "R", "total",
                 "dQ", "dO", "dU", "dV", "dR", "dTotal"]

FIGURE_HEADER = ["multiplier", "economic_cost", "total_penalty_cost"]

# small slack on the theoretical monotonicity of the optimum, since each
# sweep point is an independent solve at finite tolerance
_MONOTONE_SLACK = 1e-6


class SweepError(RuntimeError):
    """Raised when a sweep point cannot be solved to optimality."""


@dataclass(frozen=True)
class SweepRow:
    multiplier: float
    breakdown: CostBreakdown
    deltas: dict[str, float | None]  # None marks an undefined (base 0) change


@dataclass(frozen=True)
class SweepReport:
    parameter: str
    baseline: CostBreakdown
    rows: tuple[SweepRow, ...]


def percentage_change(base: float, new: float) -> float | None:
    """100 * (new - base) / base, or None (n/a) when base is zero."""
    if new == base:
        return 0.0
    if base == 0.0:
        return None
    return 100.0 * (new - base) / base


def scale_costs(inst: Instance, parameter: str, multiplier: float) -> Instance:
    """Uniformly scale one unit-cost parameter across every commodity."""
    if parameter not in _PARAMETER_FIELD:
        raise ValueError(f"unknown sweep parameter {parameter!r}")
    if multiplier <= 0.0:
        raise ValueError(f"multiplier must be > 0, got {multiplier}")
    name = _PARAMETER_FIELD[parameter]
    commodities = tuple(
        dataclasses.replace(com, **{name: getattr(com, name) * multiplier})
        for com in inst.commodities)
    return dataclasses.replace(inst, commodities=commodities)


def _solve_breakdown(inst: Instance, opts: SolveOptions,
                     multiplier: float) -> CostBreakdown:
    lp = build_lp(inst)
    sol = solve(lp, opts)
    if sol.status != OPTIMAL:
        raise SweepError(f"solve at multiplier {multiplier:g} ended with "
                         f"status {sol.status}")
    return decompose_costs(lp, sol.values)


def run_sweep(inst: Instance, parameter: str, multipliers: Sequence[float],
              opts: SolveOptions | None = None) -> SweepReport:
    """Baseline solve plus one independent cold solve per multiplier.

    Rows come back ordered by multiplier.  The optimal total must be
    nondecreasing in the multiplier (the feasible region never changes and
    all scaled coefficients are nonnegative); a violation beyond numerical
    slack means a solver defect and aborts the sweep.
    """
    opts = opts or SolveOptions()
    mults = [float(m) for m in multipliers]
    if any(m <= 0.0 for m in mults):
        raise ValueError("multipliers must be > 0")
    baseline = _solve_breakdown(inst, opts, 1.0)
    rows = []
    for mult in sorted(mults):
        if mult == 1.0:
            breakdown = baseline
        else:
            breakdown = _solve_breakdown(scale_costs(inst, parameter, mult),
                                         opts, mult)
        base_map = baseline.as_dict()
        new_map = breakdown.as_dict()
        deltas = {comp: percentage_change(base_map[comp], new_map[comp])
                  for comp in COMPONENT_ORDER}
        rows.append(SweepRow(mult, breakdown, deltas))

    totals = [baseline.total] + [r.breakdown.total for r in rows]
    order = [1.0] + [r.multiplier for r in rows]
    paired = sorted(zip(order, totals))
    for (m_lo, t_lo), (m_hi, t_hi) in zip(paired, paired[1:]):
        if t_hi < t_lo - _MONOTONE_SLACK * max(1.0, abs(t_lo)):
            raise SweepError(
                f"optimal total decreased from {t_lo} at x{m_lo:g} to "
                f"{t_hi} at x{m_hi:g}; the solver missed an optimum")
    return SweepReport(parameter, baseline, tuple(rows))


def _row_cells(multiplier: float, breakdown: CostBreakdown,
               deltas: dict[str, float | None]) -> list[str]:
    cells = [repr(multiplier)]
    cells += [repr(breakdown.as_dict()[comp]) for comp in COMPONENT_ORDER]
    for comp in COMPONENT_ORDER:
        delta = deltas[comp]
        cells.append("" if delta is None else repr(delta))
    return cells


def report_to_csv(report: SweepReport) -> str:
    """Spec CSV layout: baseline first as the multiplier-1.0 row, n/a deltas
    as empty cells, floats via repr so the report round-trips exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    zero = {comp: 0.0 for comp in COMPONENT_ORDER}
    writer.writerow(_row_cells(1.0, report.baseline, zero))
    for row in report.rows:
        writer.writerow(_row_cells(row.multiplier, row.breakdown, row.deltas))
    return buf.getvalue()


def report_from_csv(text: str, parameter: str) -> SweepReport:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != REPORT_HEADER:
        raise ValueError(f"unexpected report header {header}")
    baseline: CostBreakdown | None = None
    rows = []
    for cells in reader:
        mult = float(cells[0])
        comps = [float(c) for c in cells[1:7]]
        breakdown = CostBreakdown(*comps)
        deltas = {comp: (None if cells[7 + k] == "" else float(cells[7 + k]))
                  for k, comp in enumerate(COMPONENT_ORDER)}
        if baseline is None:
            baseline = breakdown
            continue
        rows.append(SweepRow(mult, breakdown, deltas))
    if baseline is None:
        raise ValueError("report CSV has no baseline row")
    return SweepReport(parameter, baseline, tuple(rows))


def figure_to_csv(report: SweepReport) -> str:
    """Plot data: economic cost (Q+O+U+R) and penalty cost (V) per multiplier."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIGURE_HEADER)
    points = [(1.0, report.baseline)]
    points += [(row.multiplier, row.breakdown) for row in report.rows]
    for mult, bd in points:
        economic = bd.Q + bd.O + bd.U + bd.R
        writer.writerow([repr(mult), repr(economic), repr(bd.V)])
    return buf.getvalue()
