"""Pre-positioning of perishable relief supplies under demand uncertainty.

Builds scenario trees, materializes the extensive-form stochastic LP,
solves it with an embedded revised simplex, and runs the case-study and
sensitivity tooling around it.
"""

from ._backend import BACKEND
from .formulation import (CostBreakdown, FormulationError, LinearProgram, Row,
                          VariableKey, build_lp, decompose_costs,
                          expired_inventory)
from .instance import (Commodity, DemandPoint, DistanceMatrix, Facility,
                       Instance, great_circle_distance, transport_cost,
                       validate_instance)
from .mps import export_mps
from .simplex import Solution, SolveOptions, solve
from .tree import ScenarioNode, ScenarioTree, TreeError

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Commodity",
    "CostBreakdown",
    "DemandPoint",
    "DistanceMatrix",
    "Facility",
    "FormulationError",
    "Instance",
    "LinearProgram",
    "Row",
    "ScenarioNode",
    "ScenarioTree",
    "Solution",
    "SolveOptions",
    "TreeError",
    "VariableKey",
    "build_lp",
    "decompose_costs",
    "expired_inventory",
    "export_mps",
    "great_circle_distance",
    "solve",
    "transport_cost",
    "validate_instance",
]
