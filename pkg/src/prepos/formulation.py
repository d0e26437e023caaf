"""Extensive-form LP of the pre-positioning model, plus cost accounting.

One copy of every decision variable exists per scenario node:

* ``X(c, i, s)``      procurement at facility i,
* ``Y(c, i, j, t, s)`` shipment of age-t stock from i to demand point j,
* ``G(c, j, s)``      shortage at demand point j,
* ``H(c, i, t, s)``   inventory of age t held at facility i.

Age t counts remaining-lifetime periods: t=1 is fresh stock, t equal to the
commodity lifetime is expired stock (it carries the removal charge).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import sparse

from .instance import Instance, transport_cost, validate_instance

KINDS = ("X", "Y", "G", "H")
COST_COMPONENTS = ("Q", "O", "U", "V", "R")
ROW_TAGS = ("eq2", "eq3", "eq4", "eq6", "eq7")


class FormulationError(ValueError):
    """Raised when an instance fails validation at LP build time."""


@dataclass(frozen=True, slots=True)
class VariableKey:
    """Structured identity of one LP column."""

    kind: str
    commodity: str
    facility: str | None = None
    demand_point: str | None = None
    period: int | None = None
    scenario: int = 1

    def __post_init__(self):
        wants = {"X": (True, False, False), "Y": (True, True, True),
                 "G": (False, True, False), "H": (True, False, True)}
        if self.kind not in wants:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        need_i, need_j, need_t = wants[self.kind]
        if need_i != (self.facility is not None) \
                or need_j != (self.demand_point is not None) \
                or need_t != (self.period is not None):
            raise ValueError(f"bad index signature for kind {self.kind}: {self}")

    @staticmethod
    def x(c: str, i: str, s: int) -> "VariableKey":
        return VariableKey("X", c, facility=i, scenario=s)

    @staticmethod
    def y(c: str, i: str, j: str, t: int, s: int) -> "VariableKey":
        return VariableKey("Y", c, facility=i, demand_point=j, period=t, scenario=s)

    @staticmethod
    def g(c: str, j: str, s: int) -> "VariableKey":
        return VariableKey("G", c, demand_point=j, scenario=s)

    @staticmethod
    def h(c: str, i: str, t: int, s: int) -> "VariableKey":
        return VariableKey("H", c, facility=i, period=t, scenario=s)

    def encode(self) -> str:
        """Deterministic text name, e.g. ``H_c1_i1_t2_s5``."""
        if self.kind == "X":
            return f"X_{self.commodity}_{self.facility}_s{self.scenario}"
        if self.kind == "Y":
            return (f"Y_{self.commodity}_{self.facility}_{self.demand_point}"
                    f"_t{self.period}_s{self.scenario}")
        if self.kind == "G":
            return f"G_{self.commodity}_{self.demand_point}_s{self.scenario}"
        return f"H_{self.commodity}_{self.facility}_t{self.period}_s{self.scenario}"


@dataclass(frozen=True)
class Row:
    """One constraint row: sparse coefficients, sense, rhs, provenance tag."""

    coeffs: dict[int, float]
    sense: str  # "=" or "<="
    rhs: float
    tag: str


@dataclass(frozen=True)
class CostBreakdown:
    """The five objective components and their total, all in dollars."""

    Q: float  # acquisition
    O: float  # transport
    U: float  # holding
    V: float  # shortage penalty
    R: float  # removal
    total: float

    def __post_init__(self):
        parts = self.Q + self.O + self.U + self.V + self.R
        if abs(parts - self.total) > 1e-9 * max(1.0, abs(self.total)):
            raise ValueError(f"components sum to {parts}, not {self.total}")

    @classmethod
    def from_parts(cls, Q: float, O: float, U: float, V: float, R: float,
                   total: float | None = None) -> "CostBreakdown":
        if total is None:
            total = Q + O + U + V + R
        return cls(Q, O, U, V, R, total)

    def as_dict(self) -> dict[str, float]:
        return {"Q": self.Q, "O": self.O, "U": self.U, "V": self.V,
                "R": self.R, "total": self.total}


class LinearProgram:
    """Sparse LP with a bidirectional column <-> VariableKey map.

    All columns have lower bound 0; ``fixed_zero`` flags columns pinned to
    exactly zero.  ``objective_terms`` (when present) splits the objective
    vector into the five cost components so solutions can be decomposed.
    """

    def __init__(self, columns: Sequence[VariableKey],
                 objective: Mapping[VariableKey, float] | np.ndarray,
                 rows: Sequence[Row],
                 fixed_zero: np.ndarray | None = None,
                 objective_terms: dict[str, np.ndarray] | None = None) -> None:
        self.columns = list(columns)
        self.column_index = {key: i for i, key in enumerate(self.columns)}
        if len(self.column_index) != len(self.columns):
            raise ValueError("duplicate variable keys")
        n = len(self.columns)
        if isinstance(objective, np.ndarray):
            obj = np.asarray(objective, dtype=float)
            if obj.shape != (n,):
                raise ValueError("objective length mismatch")
        else:
            obj = np.zeros(n)
            for key, coef in objective.items():
                obj[self.column_index[key]] = float(coef)
        self.objective = obj
        self.rows = list(rows)
        for k, row in enumerate(self.rows):
            for col in row.coeffs:
                if not 0 <= col < n:
                    raise ValueError(f"row {k} references unknown column {col}")
        if fixed_zero is None:
            fixed_zero = np.zeros(n, dtype=bool)
        self.fixed_zero = np.asarray(fixed_zero, dtype=bool)
        self.objective_terms = objective_terms
        self._assemble()

    def _assemble(self) -> None:
        m, n = len(self.rows), len(self.columns)
        rix, cix, data = [], [], []
        rhs = np.zeros(m)
        is_eq = np.zeros(m, dtype=bool)
        for k, row in enumerate(self.rows):
            rhs[k] = row.rhs
            is_eq[k] = row.sense == "="
            for col, coef in row.coeffs.items():
                if coef != 0.0:
                    rix.append(k)
                    cix.append(col)
                    data.append(coef)
        self.A = sparse.csr_matrix((data, (rix, cix)), shape=(m, n))
        self.rhs = rhs
        self.is_equality = is_eq

    @property
    def n_columns(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)


def build_lp(inst: Instance, forbid_ship_at_expiry: bool = False) -> LinearProgram:
    """Materialize the extensive-form LP over a validated instance.

    Freshly procured stock cannot ship in its purchase period, so every
    shipment column at age t=1 is fixed to zero; ``forbid_ship_at_expiry``
    additionally pins shipments of expired (t = lifetime) stock.
    """
    problems = validate_instance(inst)
    problems += [f"tree: {v}" for v in inst.tree.validate()]
    if problems:
        raise FormulationError("invalid instance:\n" + "\n".join(problems))

    cids = sorted(c.id for c in inst.commodities)
    fids = sorted(f.id for f in inst.facilities)
    jids = sorted(d.id for d in inst.demand_points)
    scenarios = [n.id for n in inst.tree.nodes]
    prob = {n.id: n.probability for n in inst.tree.nodes}
    lifetime = {c.id: c.lifetime_periods for c in inst.commodities}

    columns: list[VariableKey] = []
    for c in cids:
        for i in fids:
            for s in scenarios:
                columns.append(VariableKey.x(c, i, s))
    for c in cids:
        for i in fids:
            for j in jids:
                for t in range(1, lifetime[c] + 1):
                    for s in scenarios:
                        columns.append(VariableKey.y(c, i, j, t, s))
    for c in cids:
        for j in jids:
            for s in scenarios:
                columns.append(VariableKey.g(c, j, s))
    for c in cids:
        for i in fids:
            for t in range(1, lifetime[c] + 1):
                for s in scenarios:
                    columns.append(VariableKey.h(c, i, t, s))

    index = {key: k for k, key in enumerate(columns)}
    n = len(columns)
    terms = {comp: np.zeros(n) for comp in COST_COMPONENTS}
    fixed = np.zeros(n, dtype=bool)

    for key, k in index.items():
        p = prob[key.scenario]
        com = inst.commodity(key.commodity)
        if key.kind == "X":
            terms["Q"][k] = p * com.acquisition_cost
        elif key.kind == "Y":
            terms["O"][k] = p * transport_cost(inst, key.commodity, key.facility,
                                               key.demand_point)
            if key.period == 1:
                fixed[k] = True
            if forbid_ship_at_expiry and key.period == com.lifetime_periods:
                fixed[k] = True
        elif key.kind == "G":
            terms["V"][k] = p * com.penalty_cost
        else:
            terms["U"][k] = p * com.holding_cost
            if key.period == com.lifetime_periods:
                terms["R"][k] = p * com.removal_cost
    objective = terms["Q"] + terms["O"] + terms["U"] + terms["V"] + terms["R"]

    rows: list[Row] = []
    # No aged stock can exist at the root, and with no parent inventory the
    # root cannot ship aged stock either; folding the root's aging balance
    # into these rows pins both (all terms are nonnegative).
    for c in cids:
        for i in fids:
            for t in range(2, lifetime[c] + 1):
                coeffs = {index[VariableKey.h(c, i, t, 1)]: 1.0}
                for j in jids:
                    coeffs[index[VariableKey.y(c, i, j, t, 1)]] = 1.0
                rows.append(Row(coeffs, "=", 0.0, "eq2"))
    # fresh inventory equals procurement: H(c,i,1,s) = X(c,i,s)
    for c in cids:
        for i in fids:
            for s in scenarios:
                rows.append(Row({index[VariableKey.h(c, i, 1, s)]: 1.0,
                                 index[VariableKey.x(c, i, s)]: -1.0}, "=", 0.0, "eq3"))
    # aging dynamics: H(c,i,t,s) = H(c,i,t-1,parent(s)) - sum_j Y(c,i,j,t,s)
    for c in cids:
        for i in fids:
            for t in range(2, lifetime[c] + 1):
                for node in inst.tree.nodes:
                    if node.is_root:
                        continue
                    coeffs = {index[VariableKey.h(c, i, t, node.id)]: 1.0,
                              index[VariableKey.h(c, i, t - 1, node.parent)]: -1.0}
                    for j in jids:
                        coeffs[index[VariableKey.y(c, i, j, t, node.id)]] = 1.0
                    rows.append(Row(coeffs, "=", 0.0, "eq4"))
    # shortage accounting: G(c,j,s) = d - sum_{i,t} Y(c,i,j,t,s)
    for c in cids:
        for j in jids:
            for node in inst.tree.nodes:
                coeffs = {index[VariableKey.g(c, j, node.id)]: 1.0}
                for i in fids:
                    for t in range(1, lifetime[c] + 1):
                        coeffs[index[VariableKey.y(c, i, j, t, node.id)]] = 1.0
                rows.append(Row(coeffs, "=", node.demand.get((c, j), 0.0), "eq7"))
    # storage capacity: sum_{c,t} b_c H(c,i,t,s) <= M_i
    for i in fids:
        cap = inst.facility(i).capacity
        for s in scenarios:
            coeffs = {}
            for c in cids:
                b = inst.commodity(c).unit_space
                for t in range(1, lifetime[c] + 1):
                    coeffs[index[VariableKey.h(c, i, t, s)]] = b
            rows.append(Row(coeffs, "<=", cap, "eq6"))

    return LinearProgram(columns, objective, rows, fixed, terms)


def _dense_values(lp: LinearProgram,
                  values: Mapping[VariableKey, float] | np.ndarray) -> np.ndarray:
    if isinstance(values, np.ndarray):
        if values.shape != (lp.n_columns,):
            raise ValueError("values length mismatch")
        return np.asarray(values, dtype=float)
    out = np.zeros(lp.n_columns)
    for k, key in enumerate(lp.columns):
        if lp.fixed_zero[k] and key not in values:
            continue
        out[k] = values[key]  # KeyError on a missing non-fixed column
    return out


def decompose_costs(lp: LinearProgram,
                    values: Mapping[VariableKey, float] | np.ndarray) -> CostBreakdown:
    """Split an assignment's objective value into the five cost terms.

    The reported total is the LP objective at ``values``, which equals
    Q+O+U+V+R up to floating-point reassociation.
    """
    if lp.objective_terms is None:
        raise ValueError("this LP carries no cost-component metadata")
    x = _dense_values(lp, values)
    parts = {comp: float(lp.objective_terms[comp] @ x) for comp in COST_COMPONENTS}
    total = float(lp.objective @ x)
    return CostBreakdown(parts["Q"], parts["O"], parts["U"], parts["V"],
                         parts["R"], total)


def expired_inventory(inst: Instance,
                      values: Mapping[VariableKey, float],
                      tol: float = 1e-9) -> dict[tuple[str, str, int], float]:
    """Units sitting at zero remaining lifetime, the stock charged removal cost.

    Keys are (commodity, facility, scenario); entries at or below ``tol``
    are dropped, so a clean solution yields an empty mapping.
    """
    out: dict[tuple[str, str, int], float] = {}
    for com in inst.commodities:
        for fac in inst.facilities:
            for node in inst.tree.nodes:
                units = values[VariableKey.h(com.id, fac.id, com.lifetime_periods, node.id)]
                if units > tol:
                    out[(com.id, fac.id, node.id)] = units
    return out
