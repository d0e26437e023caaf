"""Shared instance builders for the test suite."""

from __future__ import annotations

import random

from prepos import (Commodity, DemandPoint, DistanceMatrix, Facility, Instance,
                    ScenarioTree)


def hand_instance() -> Instance:
    """Single commodity, two lifetime periods, one facility/demand point,
    root plus two equally likely leaves (demand 100 at one of them).

    A one-dimensional grid search over root procurement with greedy
    recourse pins the optimum at X=100, objective 162.5 (see test_simplex).
    """
    tree = ScenarioTree()
    root = tree.add_node(None, 1.0)
    tree.add_node(root, 0.5, {("relief", "D"): 100.0})
    tree.add_node(root, 0.5)
    return Instance(
        commodities=(Commodity("relief", 2, 1.0, 0.25, 10.0, 0.4, 1.0, 0.1),),
        facilities=(Facility("F", "fnode", 1000.0),),
        demand_points=(DemandPoint("D", "dnode"),),
        distances=DistanceMatrix(["fnode", "dnode"], {("fnode", "dnode"): 1.0}),
        tree=tree,
    )


def fig1_tree() -> ScenarioTree:
    """Ten-node balanced 4-stage tree containing the chain 1 -> 2 -> 5 -> 9."""
    tree = ScenarioTree()
    n1 = tree.add_node(None, 1.0)
    n2 = tree.add_node(n1, 0.5)
    n3 = tree.add_node(n1, 0.5)
    n4 = tree.add_node(n2, 0.25)
    n5 = tree.add_node(n2, 0.25)
    n6 = tree.add_node(n3, 0.5)
    tree.add_node(n4, 0.125)
    tree.add_node(n4, 0.125)
    tree.add_node(n5, 0.25)
    tree.add_node(n6, 0.5)
    return tree


def chain_instance(stages: int = 4) -> Instance:
    """One commodity with lifetime == horizon over a single-path tree."""
    tree = ScenarioTree()
    node = tree.add_node(None, 1.0)
    for _ in range(stages - 1):
        node = tree.add_node(node, 1.0)
    return Instance(
        commodities=(Commodity("c1", stages, 2.0, 0.5, 20.0, 0.8, 1.0, 0.05),),
        facilities=(Facility("i1", "a", 500.0),),
        demand_points=(DemandPoint("j1", "b"),),
        distances=DistanceMatrix(["a", "b"], {("a", "b"): 10.0}),
        tree=tree,
    )


def random_instance(seed: int) -> Instance:
    """Small random-but-valid instance: at most 2 commodities, 2 facilities,
    2 demand points, 3 lifetime periods, and 7 scenarios."""
    rng = random.Random(seed)
    n_com = rng.randint(1, 2)
    n_fac = rng.randint(1, 2)
    n_dp = rng.randint(1, 2)

    commodities = []
    for k in range(n_com):
        q = rng.uniform(0.5, 10.0)
        commodities.append(Commodity(
            id=f"c{k + 1}",
            lifetime_periods=rng.randint(1, 3),
            acquisition_cost=q,
            holding_cost=rng.uniform(0.05, 0.6) * q,
            penalty_cost=rng.uniform(1.5, 12.0) * q,
            removal_cost=rng.uniform(0.1, 0.8) * q,
            unit_space=rng.uniform(0.5, 3.0),
            transport_rate=rng.uniform(0.01, 0.5),
        ))

    nodes = [f"n{k + 1}" for k in range(n_fac + n_dp)]
    dist = {}
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            dist[(nodes[a], nodes[b])] = rng.uniform(0.0, 10.0)
    facilities = tuple(Facility(f"i{k + 1}", nodes[k], rng.uniform(50.0, 500.0))
                       for k in range(n_fac))
    demand_points = tuple(DemandPoint(f"j{k + 1}", nodes[n_fac + k])
                          for k in range(n_dp))

    stages, branching = rng.choice([(1, 1), (2, 1), (2, 2), (2, 3), (2, 6),
                                    (3, 1), (3, 2)])
    tree = ScenarioTree()
    frontier = [tree.add_node(None, 1.0)]
    for _ in range(stages - 1):
        next_frontier = []
        for parent in frontier:
            parent_p = tree.node(parent).probability
            weights = [rng.uniform(0.2, 1.0) for _ in range(branching)]
            total = sum(weights)
            for w in weights:
                demand = {}
                for com in commodities:
                    for dp in demand_points:
                        if rng.random() < 0.7:
                            demand[(com.id, dp.id)] = rng.uniform(0.0, 60.0)
                next_frontier.append(
                    tree.add_node(parent, parent_p * w / total, demand))
        frontier = next_frontier
    return Instance(tuple(commodities), facilities, demand_points,
                    DistanceMatrix(nodes, dist), tree)
