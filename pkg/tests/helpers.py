"""Shared fixtures and random-instance builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from roundmatch.instance import (
    AgentSpec,
    CompatibilityGraph,
    ResourceSpec,
    RestrictionEdge,
    RestrictionsGraph,
    derive_compatibility,
    label_free,
)


def supplement_example() -> RestrictionsGraph:
    """Worked three-round fixture: agents need (1, 2, 2) rounds on 2 resources."""
    return label_free(
        [
            AgentSpec("x1", 1, {1, 2, 3}),
            AgentSpec("x2", 2, {1, 2, 3}),
            AgentSpec("x3", 2, {1, 2, 3}),
        ],
        [ResourceSpec("y1"), ResourceSpec("y2")],
        3,
        [("x1", "y1"), ("x2", "y1"), ("x2", "y2"), ("x3", "y2")],
    )


def lab_example() -> RestrictionsGraph:
    """Four lab members sharing rooms over a week; x4 is blocked until it
    relaxes a preference within budget."""
    agents = [
        AgentSpec("x1", 2, {1, 2, 3, 4, 5}),
        AgentSpec("x2", 1, {1, 2, 3, 4, 5}),
        AgentSpec(
            "x3", 2, {1, 2, 3, 4, 5},
            budget=Fraction(2), labels={"big3": Fraction(2)},
        ),
        AgentSpec(
            "x4", 1, {1, 2, 3, 4, 5},
            budget=Fraction(1),
            labels={"noise4": Fraction(1), "far4": Fraction(2)},
        ),
    ]
    resources = [ResourceSpec("y1"), ResourceSpec("y2"), ResourceSpec("y3")]
    edges = [
        RestrictionEdge("x1", "y1"),
        RestrictionEdge("x2", "y1"),
        RestrictionEdge("x3", "y1", frozenset({"big3"})),
        RestrictionEdge("x3", "y2"),
        RestrictionEdge("x4", "y2", frozenset({"noise4"})),
        RestrictionEdge("x4", "y3", frozenset({"far4"})),
    ]
    return RestrictionsGraph(tuple(agents), tuple(resources), 5, tuple(edges))


def random_compat(
    rng: random.Random,
    max_agents: int = 4,
    max_resources: int = 3,
    max_k: int = 3,
    edge_prob: float = 0.5,
    allow_capacity: bool = False,
    min_rho: int = 0,
) -> CompatibilityGraph:
    n = rng.randint(1, max_agents)
    m = rng.randint(1, max_resources)
    k = rng.randint(1, max_k)
    agents = []
    for i in range(n):
        rounds = frozenset(t for t in range(1, k + 1) if rng.random() < 0.7)
        if not rounds:
            rounds = frozenset({rng.randint(1, k)})
        rho = rng.randint(min(min_rho, len(rounds)), len(rounds))
        agents.append(AgentSpec(f"x{i}", rho, rounds))
    resources = [
        ResourceSpec(
            f"y{j}",
            capacity=rng.choice([1, 1, 1, 2]) if allow_capacity else 1,
        )
        for j in range(m)
    ]
    pairs = [
        (a.id, r.id)
        for a in agents
        for r in resources
        if rng.random() < edge_prob
    ]
    return derive_compatibility(label_free(agents, resources, k, pairs))


def random_restrictions(
    rng: random.Random,
    max_agents: int = 3,
    max_resources: int = 2,
    max_k: int = 2,
    max_labels: int = 3,
    max_budget: int = 4,
) -> RestrictionsGraph:
    n = rng.randint(1, max_agents)
    m = rng.randint(1, max_resources)
    k = rng.randint(1, max_k)
    agents = []
    for i in range(n):
        rounds = frozenset(t for t in range(1, k + 1) if rng.random() < 0.8)
        if not rounds:
            rounds = frozenset({1})
        rho = rng.randint(1, len(rounds))
        n_labels = rng.randint(0, max_labels)
        labels = {f"c{t}": Fraction(rng.randint(1, 3)) for t in range(n_labels)}
        budget = Fraction(rng.randint(0, max_budget))
        agents.append(AgentSpec(f"x{i}", rho, rounds, budget, labels))
    resources = [ResourceSpec(f"y{j}") for j in range(m)]
    edges = []
    for a in agents:
        pool = sorted(a.labels)
        for r in resources:
            if rng.random() < 0.7:
                size = rng.randint(0, len(pool))
                edges.append(
                    RestrictionEdge(a.id, r.id, frozenset(rng.sample(pool, size)))
                )
    return RestrictionsGraph(tuple(agents), tuple(resources), k, tuple(edges))
