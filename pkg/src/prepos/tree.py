"""Scenario trees over which the stochastic pre-positioning program is defined.

Nodes carry *unconditional* probabilities, so the probabilities of all nodes
at any given stage sum to one in a consistent tree, and a parent's
probability equals the sum of its children's.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

PROBABILITY_TOLERANCE = 1e-9

# demand keys are (commodity id, demand point id)
DemandMap = Mapping[tuple[str, str], float]


class TreeError(ValueError):
    """Raised for structurally invalid tree construction or queries."""


@dataclass(frozen=True)
class ScenarioNode:
    id: int
    parent: int | None
    stage: int
    probability: float
    demand: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def is_root(self) -> bool:
        return self.parent is None


class ScenarioTree:
    """Append-only scenario tree with dense 1-based node ids (root is 1)."""

    def __init__(self) -> None:
        self._nodes: list[ScenarioNode] = []
        self._children: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    @property
    def nodes(self) -> tuple[ScenarioNode, ...]:
        return tuple(self._nodes)

    @property
    def horizon(self) -> int:
        """Number of stages (the stage of the deepest node)."""
        if not self._nodes:
            return 0
        return max(n.stage for n in self._nodes)

    def node(self, node_id: int) -> ScenarioNode:
        if not 1 <= node_id <= len(self._nodes):
            raise TreeError(f"unknown node id {node_id}")
        return self._nodes[node_id - 1]

    def children(self, node_id: int) -> list[int]:
        self.node(node_id)
        return list(self._children.get(node_id, []))

    def leaves(self) -> list[int]:
        return [n.id for n in self._nodes if not self._children.get(n.id)]

    def add_node(self, parent: int | None, probability: float,
                 demand: DemandMap | None = None) -> int:
        """Append a node and return its id.

        The root (parent=None) must be added first and must have
        probability 1; children get stage = parent stage + 1.
        """
        if parent is None:
            if self._nodes:
                raise TreeError("tree already has a root")
            if probability != 1.0:
                raise TreeError(f"root probability must be 1.0, got {probability}")
            stage = 1
        else:
            stage = self.node(parent).stage + 1
            if not 0.0 < probability <= 1.0:
                raise TreeError(f"probability {probability} outside (0, 1]")
        clean: dict[tuple[str, str], float] = {}
        for key, units in (demand or {}).items():
            units = float(units)
            if units < 0.0:
                raise TreeError(f"negative demand {units} for {key}")
            clean[(str(key[0]), str(key[1]))] = units
        node_id = len(self._nodes) + 1
        self._nodes.append(ScenarioNode(node_id, parent, stage, float(probability), clean))
        if parent is not None:
            self._children.setdefault(parent, []).append(node_id)
        return node_id

    def path_to_root(self, node_id: int) -> list[int]:
        """[node, parent, ..., root]; its length equals the node's stage."""
        node = self.node(node_id)
        path = [node.id]
        while node.parent is not None:
            node = self.node(node.parent)
            path.append(node.id)
        return path

    def nodes_at_stage(self, stage: int) -> list[int]:
        if not 1 <= stage <= self.horizon:
            raise TreeError(f"stage {stage} outside 1..{self.horizon}")
        return [n.id for n in self._nodes if n.stage == stage]

    def validate(self) -> list[str]:
        """Return all violated tree invariants (empty list iff valid).

        Checks stage probability sums, parent/children probability
        consistency, and horizon balance.  Nonzero demand at the root is
        legal but useless (shipping is barred in the purchase period), so
        it only triggers a warning.
        """
        if not self._nodes:
            raise TreeError("tree is empty")
        violations: list[str] = []
        horizon = self.horizon
        for stage in range(1, horizon + 1):
            total = sum(self._nodes[i - 1].probability for i in self.nodes_at_stage(stage))
            if abs(total - 1.0) > PROBABILITY_TOLERANCE:
                violations.append(f"stage {stage} sums to {total:g}")
        for node in self._nodes:
            kids = self._children.get(node.id)
            if kids:
                child_sum = sum(self._nodes[k - 1].probability for k in kids)
                if abs(child_sum - node.probability) > PROBABILITY_TOLERANCE:
                    violations.append(
                        f"node {node.id} probability {node.probability:g} "
                        f"!= children sum {child_sum:g}")
        leaf_stages = {self._nodes[i - 1].stage for i in self.leaves()}
        if len(leaf_stages) > 1:
            violations.append(
                "unbalanced horizon: leaves at stages "
                + ", ".join(str(s) for s in sorted(leaf_stages)))
        root = self._nodes[0]
        if any(v > 0.0 for v in root.demand.values()):
            warnings.warn("root demand is nonzero; it can only be met as shortage "
                          "because shipments are fixed to zero in the purchase period",
                          stacklevel=2)
        return violations
