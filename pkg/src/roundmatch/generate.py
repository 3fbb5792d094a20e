"""Instance generators: random synthetic graphs, attribute-driven
restrictions graphs, and hardness-gadget instances derived from vertex-cover
and set-cover inputs.  All generation is deterministic per seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputValidationError
from .instance import (
    AgentSpec,
    ResourceSpec,
    RestrictionEdge,
    RestrictionsGraph,
)


@dataclass(frozen=True)
class GenParams:
    n: int
    m: int
    k: int
    labels_per_agent: int = 10
    cost_lo: int = 1
    cost_hi: int = 4
    max_edge_labels: int = 5
    rho_lo: int = 1
    rho_hi: Optional[int] = None  # defaults to min(5, k)
    round_prob: float = 0.5
    budget: Fraction = Fraction(0)
    twin_capacity: int = 0  # this many resources get capacity 2

    def __post_init__(self):
        if min(self.n, self.m, self.k) < 1:
            raise InputValidationError("n, m and k must all be >= 1")
        if self.rho_hi is None:
            object.__setattr__(self, "rho_hi", min(5, self.k))
        if self.cost_lo > self.cost_hi or self.rho_lo > self.rho_hi:
            raise InputValidationError("empty cost or rho range")
        if self.rho_lo < 1 or self.rho_hi > self.k:
            raise InputValidationError("rho range must lie within 1..k")
        if not 0 <= self.round_prob <= 1:
            raise InputValidationError("round probability outside [0, 1]")
        if self.labels_per_agent < self.max_edge_labels:
            raise InputValidationError(
                "per-edge label subsets cannot exceed the agent's pool"
            )


# Shapes used in the published experiments: a complete bipartite benchmark, a
# 31-member/14-office sharing scenario (six double offices), and a
# 142-course/144-room scheduling scenario.
PRESETS: Mapping[str, GenParams] = {
    "paper-synthetic": GenParams(n=50, m=50, k=5),
    "lab-space-like": GenParams(
        n=31, m=14, k=5, labels_per_agent=7, cost_lo=1, cost_hi=5,
        max_edge_labels=3, twin_capacity=6,
    ),
    "course-classroom-like": GenParams(
        n=142, m=144, k=5, labels_per_agent=4, cost_lo=1, cost_hi=3,
        max_edge_labels=2, rho_lo=1, rho_hi=3,
    ),
}


def sample_rounds(rng: random.Random, rho: int, k: int, prob: float) -> frozenset[int]:
    """rho rounds sampled uniformly, then each remaining round with ``prob``."""
    chosen = set(rng.sample(range(1, k + 1), rho))
    for t in range(1, k + 1):
        if t not in chosen and rng.random() < prob:
            chosen.add(t)
    return frozenset(chosen)


def gen_synthetic(p: GenParams, seed: int) -> RestrictionsGraph:
    """Complete bipartite restrictions graph with random labels and rounds."""
    rng = random.Random(seed)
    agents = []
    label_names = [f"c{t + 1:02d}" for t in range(p.labels_per_agent)]
    for i in range(p.n):
        costs = {
            lab: Fraction(rng.randint(p.cost_lo, p.cost_hi)) for lab in label_names
        }
        rho = rng.randint(p.rho_lo, p.rho_hi)
        agents.append(
            AgentSpec(
                id=f"x{i + 1:03d}",
                rho=rho,
                allowed_rounds=sample_rounds(rng, rho, p.k, p.round_prob),
                budget=Fraction(p.budget),
                labels=costs,
            )
        )
    resources = [
        ResourceSpec(id=f"y{j + 1:03d}", capacity=2 if j < p.twin_capacity else 1)
        for j in range(p.m)
    ]
    edges = []
    for a in agents:
        for r in resources:
            size = rng.randint(0, p.max_edge_labels)
            chosen = frozenset(rng.sample(label_names, size))
            edges.append(RestrictionEdge(a.id, r.id, chosen))
    return RestrictionsGraph(
        agents=tuple(agents), resources=tuple(resources), k=p.k,
        edges=tuple(edges),
    )


# -- attribute-driven generation ---------------------------------------------

@dataclass(frozen=True)
class AttributeRule:
    kind: str  # "binary", "ordinal" or "quantitative"
    step: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "step", Fraction(self.step))
        if self.kind not in ("binary", "ordinal", "quantitative"):
            raise InputValidationError(f"unknown attribute kind {self.kind!r}")
        if self.kind == "quantitative" and self.step <= 0:
            raise InputValidationError("quantitative step must be positive")


@dataclass(frozen=True)
class ScenarioResource:
    id: str
    values: Mapping[str, object]
    capacity: int = 1


@dataclass(frozen=True)
class ScenarioAgent:
    id: str
    rho: int
    budget: Fraction
    prefs: Mapping[str, object]
    allowed_rounds: Optional[frozenset[int]] = None


@dataclass(frozen=True)
class AttributeScenario:
    k: int
    rules: Mapping[str, AttributeRule]
    resources: tuple[ScenarioResource, ...]
    agents: tuple[ScenarioAgent, ...]
    round_prob: float = 0.5


def _mismatch_labels(
    attr: str, rule: AttributeRule, pref, value
) -> list[tuple[str, Fraction]]:
    """Labels (with costs) an agent must remove to accept ``value``.

    Costs grow with the distance from the preferred value: the label for the
    preference itself costs 1, the next step 2, and so on.
    """
    if rule.kind == "binary":
        return [] if pref == value else [(attr, Fraction(1))]
    if rule.kind == "quantitative":
        pref = Fraction(pref)
        value = Fraction(value)
        labels = []
        w = pref
        rank = 1
        while w > value:
            labels.append((f"{attr}:{w}", Fraction(rank)))
            w -= rule.step
            rank += 1
        return labels
    # ordinal
    order = list(pref)
    if len(set(order)) != len(order):
        raise InputValidationError(
            f"attribute {attr}: preference order has duplicates"
        )
    if value in order:
        idx = order.index(value)
    else:
        idx = len(order)  # worse than everything listed
    return [
        (f"{attr}:{order[pos]}", Fraction(pos + 1)) for pos in range(idx)
    ]


def gen_attribute_instance(
    scenario: AttributeScenario, seed: int
) -> RestrictionsGraph:
    """Restrictions induced by the mismatch between preferences and attributes."""
    rng = random.Random(seed)
    agents = []
    edges = []
    for sa in scenario.agents:
        pool: dict[str, Fraction] = {}
        agent_edges = []
        for sr in scenario.resources:
            restriction = set()
            for attr, pref in sorted(sa.prefs.items()):
                if attr not in scenario.rules:
                    raise InputValidationError(
                        f"agent {sa.id}: preference for unknown attribute {attr}"
                    )
                if attr not in sr.values:
                    raise InputValidationError(
                        f"resource {sr.id}: missing attribute {attr}"
                    )
                for label, cost in _mismatch_labels(
                    attr, scenario.rules[attr], pref, sr.values[attr]
                ):
                    pool[label] = cost
                    restriction.add(label)
            agent_edges.append(
                RestrictionEdge(sa.id, sr.id, frozenset(restriction))
            )
        rounds = sa.allowed_rounds
        if rounds is None:
            rounds = sample_rounds(rng, sa.rho, scenario.k, scenario.round_prob)
        agents.append(
            AgentSpec(
                id=sa.id,
                rho=sa.rho,
                allowed_rounds=rounds,
                budget=Fraction(sa.budget),
                labels=pool,
            )
        )
        edges.extend(agent_edges)
    resources = tuple(
        ResourceSpec(id=sr.id, capacity=sr.capacity) for sr in scenario.resources
    )
    return RestrictionsGraph(
        agents=tuple(agents), resources=resources, k=scenario.k,
        edges=tuple(edges),
    )


# -- hardness gadgets ---------------------------------------------------------

CUBIC_GRAPHS: Mapping[str, tuple[tuple[str, str], ...]] = {
    "k4": (
        ("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d"),
    ),
    "k33": (
        ("a1", "b1"), ("a1", "b2"), ("a1", "b3"),
        ("a2", "b1"), ("a2", "b2"), ("a2", "b3"),
        ("a3", "b1"), ("a3", "b2"), ("a3", "b3"),
    ),
}


def reduce_from_vertex_cover(
    edges: Sequence[tuple[str, str]], bound: int
) -> tuple[RestrictionsGraph, int]:
    """Three-round gadget from a cubic graph; returns (instance, Q).

    One resource and two single-round agents per source edge, one three-round
    agent per source node.  Q = 2|E| + |V| - bound is the satisfied count
    that corresponds to a vertex cover of size ``bound``.
    """
    edges = [tuple(e) for e in edges]
    degree: dict[str, int] = {}
    for u, v in edges:
        if u == v:
            raise InputValidationError(f"self-loop at node {u}")
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    for node in sorted(degree):
        if degree[node] != 3:
            raise InputValidationError(
                f"node {node} has degree {degree[node]}, need a cubic graph"
            )
    rounds = frozenset({1, 2, 3})
    agents = []
    resources = []
    pairs = []
    for node in sorted(degree):
        agents.append(AgentSpec(id=f"v_{node}", rho=3, allowed_rounds=rounds))
    for j, (u, v) in enumerate(sorted(edges)):
        rid = f"e{j:02d}"
        resources.append(ResourceSpec(id=rid))
        for copy in (1, 2):
            aid = f"e{j:02d}s{copy}"
            agents.append(AgentSpec(id=aid, rho=1, allowed_rounds=rounds))
            pairs.append((aid, rid))
        pairs.append((f"v_{u}", rid))
        pairs.append((f"v_{v}", rid))
    graph = RestrictionsGraph(
        agents=tuple(agents),
        resources=tuple(resources),
        k=3,
        edges=tuple(RestrictionEdge(a, r) for a, r in pairs),
    )
    q = 2 * len(edges) + len(degree) - bound
    return graph, q


def reduce_from_set_cover(
    universe: Sequence[str],
    subsets: Sequence[Iterable[str]],
    alpha: int,
) -> RestrictionsGraph:
    """Advice gadget from a set-cover instance.

    The special agent needs one round per universe element and can only reach
    a resource after paying for the label of the subset that owns it; all
    filler agents are label-free with zero budget.
    """
    universe = list(universe)
    pools = [set(s) for s in subsets]
    t = len(universe)
    if t == 0:
        raise InputValidationError("universe must be non-empty")
    covered = set().union(*pools) if pools else set()
    missing = [z for z in universe if z not in covered]
    if missing:
        raise InputValidationError(
            f"universe element {missing[0]} is not covered by any subset"
        )
    rounds = frozenset(range(1, t + 1))
    resources = []
    agents = []
    edges = []
    star_labels: dict[str, Fraction] = {}
    star_edges = []
    for j, z in enumerate(universe):
        owners = [h for h, pool in enumerate(pools) if z in pool]
        for h in owners:
            rid = f"y{j:02d}_{h:02d}"
            resources.append(ResourceSpec(id=rid))
            star_labels[f"c{h:02d}"] = Fraction(1)
            star_edges.append(
                RestrictionEdge("xstar", rid, frozenset({f"c{h:02d}"}))
            )
        fillers = t * len(owners) - 1
        for idx in range(fillers):
            aid = f"x{j:02d}_{idx:03d}"
            agents.append(AgentSpec(id=aid, rho=1, allowed_rounds=rounds))
            for h in owners:
                edges.append(RestrictionEdge(aid, f"y{j:02d}_{h:02d}"))
    agents.append(
        AgentSpec(
            id="xstar",
            rho=t,
            allowed_rounds=rounds,
            budget=Fraction(alpha),
            labels=star_labels,
        )
    )
    edges.extend(star_edges)
    return RestrictionsGraph(
        agents=tuple(agents), resources=tuple(resources), k=t,
        edges=tuple(edges),
    )
