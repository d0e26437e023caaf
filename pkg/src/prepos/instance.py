"""Deterministic problem data: commodities, facilities, demand points, distances."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .tree import ScenarioTree

EARTH_RADIUS_MILES = 3958.8


@dataclass(frozen=True)
class Commodity:
    """One relief item type with its lifetime and unit costs.

    Costs are per unit: acquisition, holding per period, shortage penalty,
    removal at expiry; ``unit_space`` is storage volume per unit and
    ``transport_rate`` is $ per unit-mile.
    """

    id: str
    lifetime_periods: int
    acquisition_cost: float
    holding_cost: float
    penalty_cost: float
    removal_cost: float
    unit_space: float
    transport_rate: float


@dataclass(frozen=True)
class Facility:
    id: str
    location: str
    capacity: float


@dataclass(frozen=True)
class DemandPoint:
    id: str
    location: str


class DistanceMatrix:
    """Symmetric node-to-node distances in miles.

    Stored under canonical (sorted) key pairs; the diagonal defaults to 0.
    """

    def __init__(self, nodes: Iterable[str],
                 distances: Mapping[tuple[str, str], float] | None = None) -> None:
        self._nodes = frozenset(str(n) for n in nodes)
        self._dist: dict[tuple[str, str], float] = {}
        for (a, b), miles in (distances or {}).items():
            key = (a, b) if a <= b else (b, a)
            miles = float(miles)
            if key in self._dist and self._dist[key] != miles:
                raise ValueError(f"conflicting distances for pair {key}")
            self._dist[key] = miles

    @classmethod
    def from_coordinates(cls, coords: Mapping[str, tuple[float, float]]) -> "DistanceMatrix":
        """Build the full matrix from lat/lon degrees via great-circle miles."""
        names = sorted(coords)
        dist = {}
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                dist[(a, b)] = great_circle_distance(coords[a], coords[b])
        return cls(names, dist)

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    def pairs(self) -> dict[tuple[str, str], float]:
        return dict(self._dist)

    def distance(self, a: str, b: str) -> float:
        if a not in self._nodes or b not in self._nodes:
            raise KeyError(f"unknown node in pair ({a!r}, {b!r})")
        if a == b:
            return self._dist.get((a, b), 0.0)
        key = (a, b) if a <= b else (b, a)
        try:
            return self._dist[key]
        except KeyError:
            raise KeyError(f"no distance between {a!r} and {b!r}") from None


def great_circle_distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Haversine distance in miles between (lat, lon) points in degrees."""
    for lat, lon in (a, b):
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise ValueError(f"longitude {lon} outside [-180, 180]")
    lat1, lon1 = math.radians(a[0]), math.radians(a[1])
    lat2, lon2 = math.radians(b[0]), math.radians(b[1])
    h = (math.sin((lat2 - lat1) / 2.0) ** 2
         + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2)
    return 2.0 * EARTH_RADIUS_MILES * math.asin(math.sqrt(h))


@dataclass(frozen=True)
class Instance:
    """Everything needed to materialize the extensive-form LP."""

    commodities: tuple[Commodity, ...]
    facilities: tuple[Facility, ...]
    demand_points: tuple[DemandPoint, ...]
    distances: DistanceMatrix
    tree: ScenarioTree
    _by_id: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        lookup = {
            "commodity": {c.id: c for c in self.commodities},
            "facility": {f.id: f for f in self.facilities},
            "demand_point": {d.id: d for d in self.demand_points},
        }
        object.__setattr__(self, "_by_id", lookup)

    def commodity(self, cid: str) -> Commodity:
        try:
            return self._by_id["commodity"][cid]
        except KeyError:
            raise KeyError(f"unknown commodity {cid!r}") from None

    def facility(self, fid: str) -> Facility:
        try:
            return self._by_id["facility"][fid]
        except KeyError:
            raise KeyError(f"unknown facility {fid!r}") from None

    def demand_point(self, jid: str) -> DemandPoint:
        try:
            return self._by_id["demand_point"][jid]
        except KeyError:
            raise KeyError(f"unknown demand point {jid!r}") from None


def transport_cost(inst: Instance, commodity: str, facility: str, demand_point: str) -> float:
    """Unit cost of moving one unit from a facility to a demand point."""
    com = inst.commodity(commodity)
    fac = inst.facility(facility)
    dp = inst.demand_point(demand_point)
    return com.transport_rate * inst.distances.distance(fac.location, dp.location)


def validate_instance(inst: Instance) -> list[str]:
    """Return every violated data invariant (empty list iff sound)."""
    violations: list[str] = []

    seen: set[str] = set()
    for com in inst.commodities:
        if com.id in seen:
            violations.append(f"duplicate commodity id {com.id!r}")
        seen.add(com.id)
        if com.lifetime_periods < 1:
            violations.append(f"commodity {com.id!r}: lifetime_periods < 1")
        for name in ("acquisition_cost", "holding_cost", "penalty_cost",
                     "removal_cost", "unit_space", "transport_rate"):
            if getattr(com, name) <= 0.0:
                violations.append(f"commodity {com.id!r}: {name} must be > 0")

    seen = set()
    for fac in inst.facilities:
        if fac.id in seen:
            violations.append(f"duplicate facility id {fac.id!r}")
        seen.add(fac.id)
        if fac.capacity <= 0.0:
            violations.append(f"facility {fac.id!r}: capacity must be > 0")
        if fac.location not in inst.distances.nodes:
            violations.append(f"facility {fac.id!r}: location {fac.location!r} "
                              "missing from distance matrix")

    seen = set()
    for dp in inst.demand_points:
        if dp.id in seen:
            violations.append(f"duplicate demand point id {dp.id!r}")
        seen.add(dp.id)
        if dp.location not in inst.distances.nodes:
            violations.append(f"demand point {dp.id!r}: location {dp.location!r} "
                              "missing from distance matrix")

    for node in inst.distances.nodes:
        if inst.distances.distance(node, node) != 0.0:
            violations.append(f"distance matrix: d({node!r}, {node!r}) != 0")
    for pair, miles in inst.distances.pairs().items():
        if miles < 0.0:
            violations.append(f"distance matrix: negative distance for {pair}")

    for fac in inst.facilities:
        for dp in inst.demand_points:
            try:
                inst.distances.distance(fac.location, dp.location)
            except KeyError:
                violations.append(f"no distance between facility {fac.id!r} "
                                  f"and demand point {dp.id!r}")

    commodity_ids = {c.id for c in inst.commodities}
    dp_ids = {d.id for d in inst.demand_points}
    for node in inst.tree.nodes:
        for cid, jid in node.demand:
            if cid not in commodity_ids:
                violations.append(f"node {node.id}: demand for undeclared "
                                  f"commodity {cid!r}")
            if jid not in dp_ids:
                violations.append(f"node {node.id}: demand at undeclared "
                                  f"demand point {jid!r}")
    return violations
