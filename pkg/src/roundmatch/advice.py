"""Budgeted advice generation over restrictions graphs.

For each agent, enumerate the within-budget label sets worth considering:
only maximal sets survive (no affordable label can still be added), sets
whose unlocked edges are contained in another candidate's are dropped, and
sets unlocking identical edges collapse to the cheapest.  An explicit
empty-relaxation sentinel is always available.  A plan picks one candidate
per agent; plans are valued by inducing the compatibility graph and counting
fully satisfied agents.  Search is simulated annealing (geometric cooling
with a revert-to-best stall rule) or an exhaustive cross-product baseline.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .benefits import profiles_for
from .errors import CapExceededError
from .instance import (
    CompatibilityGraph,
    MultiRoundSolution,
    RestrictionsGraph,
    derive_compatibility,
)
from .maxsa import solve_maxsa_exact
from .maxtb import solve_maxtb

DEFAULT_LABEL_CAP = 20
DEFAULT_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class RelaxationCandidate:
    agent: str
    labels: frozenset[str]
    cost: Fraction
    unlocked: frozenset[tuple[str, str]]
    sentinel: bool = False


@dataclass(frozen=True)
class AdvicePlan:
    choices: Mapping[str, RelaxationCandidate]
    graph: CompatibilityGraph
    solution: MultiRoundSolution
    satisfied: int

    @property
    def removals(self) -> dict[str, frozenset[str]]:
        return {aid: c.labels for aid, c in self.choices.items()}

    @property
    def costs(self) -> dict[str, Fraction]:
        return {aid: c.cost for aid, c in self.choices.items()}


@dataclass(frozen=True)
class AnnealConfig:
    seed: int
    t0: Fraction = Fraction(100)
    factor: Fraction = Fraction(99, 100)
    floor: Fraction = Fraction(1, 100)
    iterations: int = 1000
    stall: int = 40

    def __post_init__(self):
        if not 0 < self.factor < 1:
            raise ValueError("cooling factor must lie in (0, 1)")
        if self.floor <= 0:
            raise ValueError("temperature floor must be positive")


def candidate_relaxations(
    g: RestrictionsGraph, agent_id: str, label_cap: int = DEFAULT_LABEL_CAP
) -> list[RelaxationCandidate]:
    """Pruned per-agent relaxation choices; the sentinel is always first."""
    agent = g.agent(agent_id)
    labels = sorted(agent.labels)
    if len(labels) > label_cap:
        raise CapExceededError(
            f"agent {agent_id} has {len(labels)} labels, enumeration cap is "
            f"{label_cap}"
        )
    agent_edges = g.edges_of(agent_id)
    base_free = frozenset(
        (e.agent, e.resource) for e in agent_edges if not e.restrictions
    )

    def unlocked_by(chosen: frozenset[str]) -> frozenset[tuple[str, str]]:
        return (
            frozenset(
                (e.agent, e.resource)
                for e in agent_edges
                if e.restrictions <= chosen
            )
            - base_free
        )

    sentinel = RelaxationCandidate(
        agent=agent_id,
        labels=frozenset(),
        cost=Fraction(0),
        unlocked=frozenset(),
        sentinel=True,
    )

    maximal: list[tuple[frozenset[str], Fraction]] = []
    for size in range(len(labels), -1, -1):
        for combo in itertools.combinations(labels, size):
            chosen = frozenset(combo)
            cost = sum((agent.labels[l] for l in chosen), Fraction(0))
            if cost > agent.budget:
                continue
            addable = any(
                cost + agent.labels[l] <= agent.budget
                for l in labels
                if l not in chosen
            )
            if not addable:
                maximal.append((chosen, cost))

    # Cheapest candidate per distinct unlocked edge set, then drop candidates
    # whose unlocked set is strictly contained in another's.
    by_edges: dict[frozenset, tuple[frozenset[str], Fraction]] = {}
    for chosen, cost in sorted(maximal, key=lambda p: (p[1], sorted(p[0]))):
        edges = unlocked_by(chosen)
        if edges not in by_edges:
            by_edges[edges] = (chosen, cost)
    survivors = []
    for edges, (chosen, cost) in by_edges.items():
        if any(edges < other for other in by_edges if other != edges):
            continue
        if not edges:
            continue  # unlocks nothing; the sentinel already covers this
        survivors.append(
            RelaxationCandidate(
                agent=agent_id, labels=chosen, cost=cost, unlocked=edges
            )
        )
    survivors.sort(key=lambda c: (c.cost, sorted(c.labels)))
    return [sentinel] + survivors


def evaluate_plan(
    g: RestrictionsGraph, choices: Mapping[str, RelaxationCandidate]
) -> tuple[int, MultiRoundSolution, CompatibilityGraph]:
    """Induce the compatibility graph and count fully satisfied agents."""
    removals = {aid: c.labels for aid, c in choices.items()}
    compat = derive_compatibility(g, removals)
    solution, _ = solve_maxtb(compat, profiles_for(compat, "utilitarian"))
    satisfied = sum(
        1 for a in compat.agents if solution.gamma.get(a.id, 0) >= a.rho
    )
    return satisfied, solution, compat


def _plan_from(
    g: RestrictionsGraph, choices: Mapping[str, RelaxationCandidate]
) -> AdvicePlan:
    satisfied, solution, compat = evaluate_plan(g, choices)
    return AdvicePlan(
        choices=dict(choices), graph=compat, solution=solution,
        satisfied=satisfied,
    )


def anneal_advice(
    g: RestrictionsGraph,
    cfg: AnnealConfig,
    label_cap: int = DEFAULT_LABEL_CAP,
) -> AdvicePlan:
    """Simulated-annealing search over per-agent candidate choices.

    State: one candidate index per agent, starting from all-empty.  A move
    re-draws one uniformly random agent's candidate uniformly; acceptance is
    Metropolis on energy = -satisfied count.  Cooling is geometric with a
    floor, and the walk reverts to the best state seen after ``stall``
    non-improving iterations.  Deterministic for a fixed seed.
    """
    agent_ids = [a.id for a in g.agents]
    candidates = {aid: candidate_relaxations(g, aid, label_cap) for aid in agent_ids}
    rng = random.Random(cfg.seed)
    value_cache: dict[tuple[int, ...], int] = {}

    def value(state: tuple[int, ...]) -> int:
        if state not in value_cache:
            chosen = {
                aid: candidates[aid][i] for aid, i in zip(agent_ids, state)
            }
            value_cache[state] = evaluate_plan(g, chosen)[0]
        return value_cache[state]

    state = tuple(0 for _ in agent_ids)
    best_state, best_value = state, value(state)
    current_value = best_value
    temperature = Fraction(cfg.t0)
    since_improvement = 0

    for _ in range(cfg.iterations):
        if not agent_ids:
            break
        pick = rng.randrange(len(agent_ids))
        pool = candidates[agent_ids[pick]]
        proposal = list(state)
        proposal[pick] = rng.randrange(len(pool))
        proposal = tuple(proposal)
        new_value = value(proposal)
        delta_energy = current_value - new_value  # energy = -satisfied
        if delta_energy <= 0 or rng.random() < math.exp(
            -delta_energy / float(temperature)
        ):
            state, current_value = proposal, new_value
        if current_value > best_value:
            best_state, best_value = state, current_value
            since_improvement = 0
        else:
            since_improvement += 1
            if since_improvement >= cfg.stall:
                state, current_value = best_state, best_value
                since_improvement = 0
        temperature = max(Fraction(cfg.floor), temperature * Fraction(cfg.factor))

    chosen = {aid: candidates[aid][i] for aid, i in zip(agent_ids, best_state)}
    return _plan_from(g, chosen)


def exact_advice(
    g: RestrictionsGraph,
    limit: int = DEFAULT_NODE_BUDGET,
    label_cap: int = DEFAULT_LABEL_CAP,
    stop_at: Optional[int] = None,
) -> AdvicePlan:
    """Exhaustive cross-product baseline, each choice solved exactly."""
    agent_ids = [a.id for a in g.agents]
    candidates = [candidate_relaxations(g, aid, label_cap) for aid in agent_ids]
    best: Optional[tuple[int, dict]] = None
    evaluations = 0
    for combo in itertools.product(*candidates):
        evaluations += 1
        if evaluations > limit:
            incumbent = None
            if best is not None:
                incumbent = _exact_plan(g, best[1], best[2])
            raise CapExceededError(
                f"advice search exceeded {limit} evaluations", incumbent=incumbent
            )
        choices = {aid: c for aid, c in zip(agent_ids, combo)}
        compat = derive_compatibility(
            g, {aid: c.labels for aid, c in choices.items()}
        )
        result = solve_maxsa_exact(compat, limit=limit, stop_at=stop_at)
        if best is None or len(result.satisfied) > best[0]:
            best = (len(result.satisfied), choices, result)
        if stop_at is not None and best[0] >= stop_at:
            break
        if best[0] == len(agent_ids):
            break
    if best is None:  # no agents at all
        return _plan_from(g, {})
    return _exact_plan(g, best[1], best[2])


def _exact_plan(g, choices, result) -> AdvicePlan:
    compat = derive_compatibility(
        g, {aid: c.labels for aid, c in choices.items()}
    )
    return AdvicePlan(
        choices=dict(choices),
        graph=compat,
        solution=result.solution,
        satisfied=len(result.satisfied),
    )


def agmrm_feasible(
    g: RestrictionsGraph,
    limit: int = DEFAULT_NODE_BUDGET,
    label_cap: int = DEFAULT_LABEL_CAP,
) -> Optional[AdvicePlan]:
    """A within-budget plan satisfying every agent, or None."""
    plan = exact_advice(g, limit=limit, label_cap=label_cap, stop_at=len(g.agents))
    return plan if plan.satisfied == len(g.agents) else None
