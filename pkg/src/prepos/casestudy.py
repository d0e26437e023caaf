"""Mainland-US case study: 4 FEMA facilities, 49 state demand points,
water and food commodities, and seeded uniform demand draws."""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping

from .instance import Commodity, DemandPoint, DistanceMatrix, Facility, Instance
from .tree import ScenarioTree


class ImpactLevel(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


DISASTERS = ("hurricane", "flood", "earthquake")

# uniform demand intervals per (disaster, impact level), in commodity units
DEMAND_INTERVALS: dict[tuple[str, ImpactLevel], tuple[float, float]] = {
    ("hurricane", ImpactLevel.LOW): (100.0, 200.0),
    ("hurricane", ImpactLevel.MEDIUM): (200.0, 400.0),
    ("hurricane", ImpactLevel.HIGH): (900.0, 1000.0),
    ("flood", ImpactLevel.LOW): (100.0, 200.0),
    ("flood", ImpactLevel.MEDIUM): (200.0, 400.0),
    ("flood", ImpactLevel.HIGH): (900.0, 1000.0),
    ("earthquake", ImpactLevel.LOW): (1000.0, 2000.0),
    ("earthquake", ImpactLevel.MEDIUM): (2000.0, 4000.0),
    ("earthquake", ImpactLevel.HIGH): (9000.0, 10000.0),
}

# water is 1,000 gallons per unit, food is 1,000 MREs per unit
TABLE2_COMMODITIES = (
    # (id, unit_space b, acquisition q, holding u, penalty v, removal r, rate)
    ("water", 144.6, 647.7, 161.925, 6477.0, 259.08, 0.3),
    ("food", 83.33, 5420.0, 1355.0, 54200.0, 2168.0, 0.04),
)

LIFETIME_PERIODS = 4

# FEMA distribution-center states and their floor areas in sq. ft
FACILITY_AREAS = {"TX": 1_600_000.0, "CA": 110_000.0, "GA": 407_000.0, "MD": 68_023.0}

# Illustrative hazard exposure; the ranked-occurrence source behind the
# original list is unavailable, so this default only aims at a plausible
# geography with aggregate demand inside the facilities' storage range.
DEFAULT_IMPACT_ASSIGNMENT: dict[tuple[str, str], ImpactLevel] = {
    ("FL", "hurricane"): ImpactLevel.HIGH,
    ("TX", "hurricane"): ImpactLevel.MEDIUM,
    ("LA", "hurricane"): ImpactLevel.MEDIUM,
    ("NC", "hurricane"): ImpactLevel.LOW,
    ("SC", "hurricane"): ImpactLevel.LOW,
    ("GA", "hurricane"): ImpactLevel.LOW,
    ("AL", "hurricane"): ImpactLevel.LOW,
    ("MS", "hurricane"): ImpactLevel.LOW,
    ("VA", "hurricane"): ImpactLevel.LOW,
    ("NY", "hurricane"): ImpactLevel.LOW,
    ("MO", "flood"): ImpactLevel.MEDIUM,
    ("LA", "flood"): ImpactLevel.LOW,
    ("TX", "flood"): ImpactLevel.LOW,
    ("MS", "flood"): ImpactLevel.LOW,
    ("IA", "flood"): ImpactLevel.LOW,
    ("IL", "flood"): ImpactLevel.LOW,
    ("KY", "flood"): ImpactLevel.LOW,
    ("TN", "flood"): ImpactLevel.LOW,
    ("WV", "flood"): ImpactLevel.LOW,
    ("ND", "flood"): ImpactLevel.LOW,
    ("CA", "earthquake"): ImpactLevel.MEDIUM,
    ("WA", "earthquake"): ImpactLevel.LOW,
}


class CaseStudyError(ValueError):
    """Raised for unusable case-study configuration or data files."""


@dataclass(frozen=True)
class CaseStudyConfig:
    """Knobs for the seeded generator.

    ``branch_probabilities`` (len == branching) sets each parent's
    conditional split; None means equal branches.  ``occurrence`` is the
    per-node chance that an assigned (state, disaster) actually strikes;
    at 1.0 every assigned disaster draws a demand at every node.
    """

    seed: int
    stages: int = 4
    branching: int = 3
    states_file: str | Path | None = None
    stacking_height: float = 1.0
    impact_assignment: Mapping[tuple[str, str], ImpactLevel | str] = field(
        default_factory=lambda: dict(DEFAULT_IMPACT_ASSIGNMENT))
    branch_probabilities: tuple[float, ...] | None = None
    occurrence: float = 1.0

    def __post_init__(self):
        if self.stages < 2:
            raise CaseStudyError("stages must be >= 2")
        if self.branching < 1:
            raise CaseStudyError("branching must be >= 1")
        if self.stacking_height <= 0:
            raise CaseStudyError("stacking height must be > 0")
        if not 0.0 < self.occurrence <= 1.0:
            raise CaseStudyError("occurrence must be in (0, 1]")
        if self.branch_probabilities is not None:
            probs = self.branch_probabilities
            if len(probs) != self.branching:
                raise CaseStudyError("branch_probabilities length must equal branching")
            if any(p <= 0.0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
                raise CaseStudyError("branch probabilities must be positive and sum to 1")


def sample_demand(disaster: str, level: ImpactLevel, rng: random.Random) -> float:
    """One uniform draw from the interval assigned to (disaster, level)."""
    try:
        lo, hi = DEMAND_INTERVALS[(disaster, level)]
    except KeyError:
        raise CaseStudyError(f"no demand interval for {disaster!r}/{level!r}") from None
    return rng.uniform(lo, hi)


def load_states(path: str | Path | None = None) -> dict[str, tuple[float, float]]:
    """Read the state -> most-populous-city coordinate table."""
    if path is None:
        source = resources.files("prepos").joinpath("data/states.csv")
        text = source.read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CaseStudyError(f"cannot read states file {path}: {exc}") from exc
    reader = csv.DictReader(text.splitlines())
    required = {"state", "city", "lat", "lon"}
    if reader.fieldnames is None or not required.issubset(reader.fieldnames):
        raise CaseStudyError(f"states file must have columns {sorted(required)}")
    coords: dict[str, tuple[float, float]] = {}
    for row in reader:
        state = row["state"].strip()
        if state in coords:
            raise CaseStudyError(f"duplicate state {state!r} in states file")
        coords[state] = (float(row["lat"]), float(row["lon"]))
    if not coords:
        raise CaseStudyError("states file is empty")
    return coords


def table2_commodities() -> tuple[Commodity, ...]:
    """The two relief commodities with their published unit costs.

    The holding, penalty and removal costs are fixed fractions of the
    acquisition cost (25%, 10x, 40%); the identities hold exactly in
    decimal arithmetic and are asserted here.
    """
    out = []
    for cid, b, q, u, v, r, rate in TABLE2_COMMODITIES:
        dq = Decimal(str(q))
        assert Decimal(str(u)) == Decimal("0.25") * dq, cid
        assert Decimal(str(v)) == Decimal("10") * dq, cid
        assert Decimal(str(r)) == Decimal("0.4") * dq, cid
        out.append(Commodity(cid, LIFETIME_PERIODS, q, u, v, r, b, rate))
    return tuple(out)


def _normalize_assignment(
        assignment: Mapping[tuple[str, str], ImpactLevel | str],
        states: dict[str, tuple[float, float]]) -> dict[tuple[str, str], ImpactLevel]:
    clean: dict[tuple[str, str], ImpactLevel] = {}
    for (state, disaster), level in assignment.items():
        if isinstance(level, str):
            if level == "none":
                continue
            level = ImpactLevel(level)
        if disaster not in DISASTERS:
            raise CaseStudyError(f"unknown disaster type {disaster!r}")
        if state not in states:
            raise CaseStudyError(f"state {state!r} in impact assignment has no "
                                 "coordinates in the states file")
        clean[(state, disaster)] = level
    return clean


def build_case_study(cfg: CaseStudyConfig) -> Instance:
    """Generate the seeded case-study instance.

    The scenario tree is balanced with cfg.branching children per node and
    equal branch probabilities; each non-root node independently redraws
    every assigned (state, disaster) demand, and both commodities share the
    same per-state totals.  Facility capacities are floor area times the
    stacking height.
    """
    states = load_states(cfg.states_file)
    assignment = _normalize_assignment(cfg.impact_assignment, states)
    for fac_state in FACILITY_AREAS:
        if fac_state not in states:
            raise CaseStudyError(f"facility state {fac_state!r} missing from states file")

    commodities = table2_commodities()
    facilities = tuple(Facility(state, state, area * cfg.stacking_height)
                       for state, area in sorted(FACILITY_AREAS.items()))
    demand_points = tuple(DemandPoint(state, state) for state in sorted(states))
    distances = DistanceMatrix.from_coordinates(states)

    rng = random.Random(cfg.seed)
    splits = cfg.branch_probabilities or tuple(
        1.0 / cfg.branching for _ in range(cfg.branching))
    tree = ScenarioTree()
    root = tree.add_node(None, 1.0)
    frontier = [root]
    for _ in range(2, cfg.stages + 1):
        next_frontier = []
        for parent in frontier:
            parent_p = tree.node(parent).probability
            for conditional in splits:
                demand = _draw_node_demand(assignment, commodities,
                                           cfg.occurrence, rng)
                next_frontier.append(
                    tree.add_node(parent, parent_p * conditional, demand))
        frontier = next_frontier
    return Instance(commodities, facilities, demand_points, distances, tree)


def _draw_node_demand(assignment: dict[tuple[str, str], ImpactLevel],
                      commodities: tuple[Commodity, ...],
                      occurrence: float,
                      rng: random.Random) -> dict[tuple[str, str], float]:
    by_state: dict[str, float] = {}
    for state in sorted({s for s, _ in assignment}):
        total = 0.0
        for disaster in DISASTERS:
            level = assignment.get((state, disaster))
            if level is None:
                continue
            if occurrence < 1.0 and rng.random() >= occurrence:
                continue
            total += sample_demand(disaster, level, rng)
        if total > 0.0:
            by_state[state] = total
    demand: dict[tuple[str, str], float] = {}
    for com in commodities:
        for state, units in by_state.items():
            demand[(com.id, state)] = units
    return demand
