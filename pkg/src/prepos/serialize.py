"""Instance and solution JSON, plus atomic file writes.

Commodity cost fields travel as decimal strings so values like 161.925
survive round-trips verbatim; everything else is plain JSON floats.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .formulation import CostBreakdown, LinearProgram
from .instance import Commodity, DemandPoint, DistanceMatrix, Facility, Instance
from .simplex import Solution
from .tree import ScenarioTree

_COST_FIELDS = ("acquisition_cost", "holding_cost", "penalty_cost",
                "removal_cost", "unit_space", "transport_rate")


class SerializationError(ValueError):
    """Raised for malformed instance or solution documents."""


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a same-directory temp file and rename, so a failed run
    never leaves a truncated artifact behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."),
                               prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def instance_to_json(inst: Instance) -> str:
    commodities = []
    for com in sorted(inst.commodities, key=lambda c: c.id):
        entry: dict = {"id": com.id, "lifetime_periods": com.lifetime_periods}
        for name in _COST_FIELDS:
            entry[name] = repr(getattr(com, name))
        commodities.append(entry)
    facilities = [{"id": f.id, "location": f.location, "capacity": f.capacity}
                  for f in sorted(inst.facilities, key=lambda f: f.id)]
    demand_points = [{"id": d.id, "location": d.location}
                     for d in sorted(inst.demand_points, key=lambda d: d.id)]
    pairs = [[a, b, miles] for (a, b), miles in sorted(inst.distances.pairs().items())]
    nodes = []
    for node in inst.tree.nodes:
        demand: dict[str, dict[str, float]] = {}
        for (cid, jid), units in node.demand.items():
            demand.setdefault(cid, {})[jid] = units
        nodes.append({"id": node.id, "parent": node.parent,
                      "probability": node.probability, "demand": demand})
    doc = {
        "commodities": commodities,
        "facilities": facilities,
        "demand_points": demand_points,
        "distances": {"nodes": sorted(inst.distances.nodes), "pairs": pairs},
        "tree": {"nodes": nodes},
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def instance_from_json(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid instance JSON: {exc}") from exc
    try:
        commodities = tuple(
            Commodity(entry["id"], int(entry["lifetime_periods"]),
                      *(float(entry[name]) for name in _COST_FIELDS))
            for entry in doc["commodities"])
        facilities = tuple(Facility(e["id"], e["location"], float(e["capacity"]))
                           for e in doc["facilities"])
        demand_points = tuple(DemandPoint(e["id"], e["location"])
                              for e in doc["demand_points"])
        dist = doc["distances"]
        distances = DistanceMatrix(
            dist["nodes"],
            {(a, b): float(miles) for a, b, miles in dist["pairs"]})
        tree = ScenarioTree()
        for entry in sorted(doc["tree"]["nodes"], key=lambda e: e["id"]):
            demand = {(cid, jid): float(units)
                      for cid, by_point in entry["demand"].items()
                      for jid, units in by_point.items()}
            parent = entry["parent"]
            got = tree.add_node(None if parent is None else int(parent),
                                float(entry["probability"]), demand)
            if got != int(entry["id"]):
                raise SerializationError(
                    f"tree node ids are not dense: expected {got}, "
                    f"file says {entry['id']}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SerializationError):
            raise
        raise SerializationError(f"malformed instance document: {exc}") from exc
    return Instance(commodities, facilities, demand_points, distances, tree)


def save_instance(inst: Instance, path: str | Path) -> None:
    write_text_atomic(path, instance_to_json(inst))


def load_instance(path: str | Path) -> Instance:
    return instance_from_json(Path(path).read_text(encoding="utf-8"))


def solution_to_json(lp: LinearProgram, sol: Solution,
                     breakdown: CostBreakdown | None = None) -> str:
    """Solution document with only the nonzero variable values."""
    values = {key.encode(): val for key, val in sol.values.items() if val != 0.0}
    doc = {
        "status": sol.status,
        "objective": sol.objective,
        "iterations": sol.iterations,
        "values": values,
    }
    if breakdown is not None:
        doc["costs"] = breakdown.as_dict()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
