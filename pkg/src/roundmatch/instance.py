"""Problem data model shared by every solver.

Agents want to be matched to resources in a chosen number of rounds.  A
restrictions graph carries labeled edges (labels are removable restrictions
with costs); the compatibility graph is the label-free subgraph on which the
actual matchings are computed.  Resources with capacity c are expanded into c
unit-capacity copies before solving; solutions are always expressed in terms
of the original resource ids.

All types are immutable after construction and safe to share across
concurrent solver runs.  Iteration order is deterministic everywhere
(sorted ids).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import InputValidationError

# Resource copies are identified by (resource_id, copy_index).
CopyId = tuple[str, int]


@dataclass(frozen=True)
class AgentSpec:
    """One agent: required rounds, permissible rounds, budget and labels."""

    id: str
    rho: int
    allowed_rounds: frozenset[int]
    budget: Fraction = Fraction(0)
    labels: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "allowed_rounds", frozenset(self.allowed_rounds))
        object.__setattr__(self, "budget", Fraction(self.budget))
        object.__setattr__(
            self, "labels", {str(l): Fraction(c) for l, c in self.labels.items()}
        )
        if self.rho < 0:
            raise InputValidationError(f"agent {self.id}: rho must be >= 0")
        if self.rho > len(self.allowed_rounds):
            raise InputValidationError(
                f"agent {self.id}: rho={self.rho} exceeds |allowed_rounds|="
                f"{len(self.allowed_rounds)}"
            )
        if self.budget < 0:
            raise InputValidationError(f"agent {self.id}: budget must be >= 0")
        for label, cost in self.labels.items():
            if cost <= 0:
                raise InputValidationError(
                    f"agent {self.id}: label {label} has non-positive cost {cost}"
                )


@dataclass(frozen=True)
class ResourceSpec:
    """One resource; capacity is the number of simultaneous agents per round."""

    id: str
    capacity: int = 1

    def __post_init__(self):
        if self.capacity < 1:
            raise InputValidationError(
                f"resource {self.id}: capacity must be >= 1, got {self.capacity}"
            )


@dataclass(frozen=True)
class RestrictionEdge:
    """A labeled edge of the restrictions graph."""

    agent: str
    resource: str
    restrictions: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "restrictions", frozenset(self.restrictions))


@dataclass(frozen=True)
class RestrictionsGraph:
    """Bipartite agent/resource graph with removable restriction labels."""

    agents: tuple[AgentSpec, ...]
    resources: tuple[ResourceSpec, ...]
    k: int
    edges: tuple[RestrictionEdge, ...]

    def __post_init__(self):
        agents = tuple(sorted(self.agents, key=lambda a: a.id))
        resources = tuple(sorted(self.resources, key=lambda r: r.id))
        edges = tuple(sorted(self.edges, key=lambda e: (e.agent, e.resource)))
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "resources", resources)
        object.__setattr__(self, "edges", edges)
        if self.k < 1:
            raise InputValidationError(f"k must be >= 1, got {self.k}")
        agent_ids = [a.id for a in agents]
        if len(set(agent_ids)) != len(agent_ids):
            raise InputValidationError("duplicate agent ids")
        resource_ids = [r.id for r in resources]
        if len(set(resource_ids)) != len(resource_ids):
            raise InputValidationError("duplicate resource ids")
        by_agent = {a.id: a for a in agents}
        known_resources = set(resource_ids)
        for a in agents:
            bad = [t for t in a.allowed_rounds if not 1 <= t <= self.k]
            if bad:
                raise InputValidationError(
                    f"agent {a.id}: allowed round {min(bad)} outside 1..{self.k}"
                )
        seen_pairs = set()
        for e in edges:
            if e.agent not in by_agent:
                raise InputValidationError(f"edge references unknown agent {e.agent}")
            if e.resource not in known_resources:
                raise InputValidationError(
                    f"edge references unknown resource {e.resource}"
                )
            if (e.agent, e.resource) in seen_pairs:
                raise InputValidationError(
                    f"more than one edge for pair ({e.agent}, {e.resource})"
                )
            seen_pairs.add((e.agent, e.resource))
            unknown = e.restrictions - set(by_agent[e.agent].labels)
            if unknown:
                raise InputValidationError(
                    f"edge ({e.agent}, {e.resource}): restriction "
                    f"{min(unknown)} is not a label of agent {e.agent}"
                )

    def agent(self, agent_id: str) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise InputValidationError(f"unknown agent {agent_id}")

    def resource(self, resource_id: str) -> ResourceSpec:
        for r in self.resources:
            if r.id == resource_id:
                return r
        raise InputValidationError(f"unknown resource {resource_id}")

    def edges_of(self, agent_id: str) -> tuple[RestrictionEdge, ...]:
        return tuple(e for e in self.edges if e.agent == agent_id)


@dataclass(frozen=True)
class CompatibilityGraph:
    """Label-free subgraph on which matchings are computed.

    ``edges`` is the original-level (agent, resource) pair set; ``unit_edges``
    is the same set expanded over unit-capacity resource copies for the
    reduction-based solvers.
    """

    agents: tuple[AgentSpec, ...]
    resources: tuple[ResourceSpec, ...]
    k: int
    edges: frozenset[tuple[str, str]]
    unit_edges: tuple[tuple[str, CopyId], ...]
    copy_to_resource: Mapping[CopyId, str]

    @property
    def copies(self) -> tuple[CopyId, ...]:
        return tuple(sorted(self.copy_to_resource))

    def agent(self, agent_id: str) -> AgentSpec:
        for a in self.agents:
            if a.id == agent_id:
                return a
        raise InputValidationError(f"unknown agent {agent_id}")

    def capacity(self, resource_id: str) -> int:
        for r in self.resources:
            if r.id == resource_id:
                return r.capacity
        raise InputValidationError(f"unknown resource {resource_id}")

    def neighbours(self, agent_id: str) -> tuple[str, ...]:
        """Original resources compatible with the agent, sorted."""
        return tuple(sorted(r for a, r in self.edges if a == agent_id))


def derive_compatibility(
    g: RestrictionsGraph, removals: Mapping[str, Iterable[str]] | None = None
) -> CompatibilityGraph:
    """Apply label removals and expand resource capacities.

    An edge survives iff its restriction set is contained in the incident
    agent's removed labels.  Agents missing from ``removals`` remove nothing.
    """
    removals = dict(removals or {})
    by_agent = {a.id: a for a in g.agents}
    removed: dict[str, frozenset[str]] = {}
    for agent_id, labels in removals.items():
        if agent_id not in by_agent:
            raise InputValidationError(f"removals reference unknown agent {agent_id}")
        labels = frozenset(labels)
        unknown = labels - set(by_agent[agent_id].labels)
        if unknown:
            raise InputValidationError(
                f"removals for agent {agent_id} reference unknown label "
                f"{min(unknown)}"
            )
        removed[agent_id] = labels
    kept = frozenset(
        (e.agent, e.resource)
        for e in g.edges
        if e.restrictions <= removed.get(e.agent, frozenset())
    )
    copy_to_resource: dict[CopyId, str] = {}
    for r in g.resources:
        for c in range(r.capacity):
            copy_to_resource[(r.id, c)] = r.id
    unit_edges = tuple(
        sorted(
            (a, copy)
            for (a, rid) in kept
            for copy in ((rid, c) for c in range(g.resource(rid).capacity))
        )
    )
    return CompatibilityGraph(
        agents=g.agents,
        resources=g.resources,
        k=g.k,
        edges=kept,
        unit_edges=unit_edges,
        copy_to_resource=copy_to_resource,
    )


@dataclass(frozen=True)
class MultiRoundSolution:
    """k matchings plus the per-agent matched-round counts."""

    rounds: tuple[frozenset[tuple[str, str]], ...]
    gamma: Mapping[str, int]

    @staticmethod
    def from_rounds(
        rounds: Iterable[Iterable[tuple[str, str]]], agent_ids: Iterable[str]
    ) -> "MultiRoundSolution":
        frozen = tuple(frozenset((a, r) for a, r in rnd) for rnd in rounds)
        gamma = {aid: 0 for aid in agent_ids}
        for rnd in frozen:
            for a, _ in rnd:
                gamma[a] = gamma.get(a, 0) + 1
        return MultiRoundSolution(rounds=frozen, gamma=gamma)


def validate_solution(s: MultiRoundSolution, g: CompatibilityGraph) -> list[str]:
    """Report every violated solution invariant; empty list iff valid."""
    problems: list[str] = []
    by_agent = {a.id: a for a in g.agents}
    capacities = {r.id: r.capacity for r in g.resources}
    if len(s.rounds) != g.k:
        problems.append(f"solution has {len(s.rounds)} rounds, expected {g.k}")
    counted: dict[str, int] = {a.id: 0 for a in g.agents}
    for t, rnd in enumerate(s.rounds, start=1):
        agent_seen: set[str] = set()
        load: dict[str, int] = {}
        for a, r in sorted(rnd):
            if a not in by_agent:
                problems.append(f"round {t}: unknown agent {a}")
                continue
            if r not in capacities:
                problems.append(f"round {t}: unknown resource {r}")
                continue
            if a in agent_seen:
                problems.append(f"round {t}: agent {a} matched more than once")
            agent_seen.add(a)
            load[r] = load.get(r, 0) + 1
            if t not in by_agent[a].allowed_rounds:
                problems.append(
                    f"round {t}: agent {a} matched outside its allowed rounds"
                )
            if (a, r) not in g.edges:
                problems.append(f"round {t}: pair ({a}, {r}) is not a compatible edge")
            counted[a] = counted.get(a, 0) + 1
        for r, n in sorted(load.items()):
            if n > capacities[r]:
                problems.append(
                    f"round {t}: resource {r} used {n} times, capacity {capacities[r]}"
                )
    for aid in sorted(set(s.gamma) | set(counted)):
        if s.gamma.get(aid, 0) != counted.get(aid, 0):
            problems.append(
                f"gamma[{aid}]={s.gamma.get(aid, 0)} but {counted.get(aid, 0)} "
                "matched rounds found"
            )
    return problems


def satisfaction(
    s: MultiRoundSolution, agents: Iterable[AgentSpec]
) -> dict[str, bool]:
    """True per agent iff it was matched in at least rho rounds."""
    return {a.id: s.gamma.get(a.id, 0) >= a.rho for a in agents}


def total_assignments(s: MultiRoundSolution) -> int:
    return sum(len(rnd) for rnd in s.rounds)


def min_satisfaction_ratio(
    s: MultiRoundSolution, agents: Iterable[AgentSpec]
) -> Fraction:
    """Exact minimum of gamma_i / rho_i over agents with rho_i >= 1.

    Agents with rho_i = 0 are vacuously satisfied and excluded; with no
    requiring agents at all the ratio is 1.
    """
    ratios = [
        Fraction(s.gamma.get(a.id, 0), a.rho) for a in agents if a.rho >= 1
    ]
    return min(ratios) if ratios else Fraction(1)


def label_free(
    agents: Iterable[AgentSpec],
    resources: Iterable[ResourceSpec],
    k: int,
    pairs: Iterable[tuple[str, str]],
) -> RestrictionsGraph:
    """Convenience constructor for a restrictions graph with no labels."""
    return RestrictionsGraph(
        agents=tuple(agents),
        resources=tuple(resources),
        k=k,
        edges=tuple(RestrictionEdge(a, r) for a, r in pairs),
    )
