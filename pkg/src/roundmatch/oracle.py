"""Independent brute-force ground truth for all solvers at tiny scale.

The enumeration shares only the instance data types with the solvers (no
matching code), so agreement between the two paths is meaningful.  It walks
every assignment of agents to (round, resource) cells with per-agent counts
capped at rho, computing all objectives in one pass.  A configurable state
cap guards against accidentally large inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .benefits import BenefitProfile
from .errors import CapExceededError
from .instance import (
    CompatibilityGraph,
    MultiRoundSolution,
    RestrictionsGraph,
    derive_compatibility,
)

DEFAULT_STATE_CAP = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    feasibility: bool
    best_satisfied: int
    best_min_ratio: Fraction
    best_total_benefit: Optional[Fraction]
    witness_satisfied: MultiRoundSolution
    witness_min_ratio: MultiRoundSolution
    witness_benefit: Optional[MultiRoundSolution]
    maximal_count: Optional[int] = None  # only when requested


class _Search:
    def __init__(self, g: CompatibilityGraph, cap: int):
        self.g = g
        self.cap = cap
        self.states = 0
        self.agents = [a for a in g.agents if a.rho >= 1]
        self.rho = {a.id: a.rho for a in self.agents}
        self.neighbours = {a.id: g.neighbours(a.id) for a in self.agents}
        # One cell per (round, agent) in deterministic order.
        self.cells = [
            (t, a.id)
            for t in range(1, g.k + 1)
            for a in self.agents
            if t in a.allowed_rounds
        ]
        self.remaining_after = self._suffix_counts()
        self.capacity = {r.id: r.capacity for r in g.resources}

    def _suffix_counts(self) -> list[dict[str, int]]:
        counts: list[dict[str, int]] = [dict() for _ in range(len(self.cells) + 1)]
        acc: dict[str, int] = {a.id: 0 for a in self.agents}
        for i in range(len(self.cells) - 1, -1, -1):
            _, aid = self.cells[i]
            acc = dict(acc)
            acc[aid] += 1
            counts[i] = acc
        return counts

    def tick(self):
        self.states += 1
        if self.states > self.cap:
            raise CapExceededError(
                f"oracle enumeration exceeded {self.cap} states"
            )


def _solution_from(assign: dict[tuple[int, str], str], g: CompatibilityGraph):
    rounds = [set() for _ in range(g.k)]
    for (t, aid), rid in assign.items():
        rounds[t - 1].add((aid, rid))
    return MultiRoundSolution.from_rounds(rounds, (a.id for a in g.agents))


def feasible(g: CompatibilityGraph, cap: int = DEFAULT_STATE_CAP) -> bool:
    """Early-exit search for a solution matching every agent exactly rho times."""
    s = _Search(g, cap)
    gamma = {a.id: 0 for a in s.agents}
    load: dict[tuple[int, str], int] = {}

    def walk(i: int) -> bool:
        s.tick()
        if i == len(s.cells):
            return all(gamma[aid] == s.rho[aid] for aid in gamma)
        t, aid = s.cells[i]
        deficit = s.rho[aid] - gamma[aid]
        left_for_agent = s.remaining_after[i][aid]
        if deficit > left_for_agent:
            return False
        if deficit == 0 or deficit < left_for_agent:
            # Skipping this cell still leaves enough later opportunities.
            if walk(i + 1):
                return True
        if deficit >= 1:
            for rid in s.neighbours[aid]:
                if load.get((t, rid), 0) < s.capacity[rid]:
                    load[(t, rid)] = load.get((t, rid), 0) + 1
                    gamma[aid] += 1
                    ok = walk(i + 1)
                    gamma[aid] -= 1
                    load[(t, rid)] -= 1
                    if ok:
                        return True
        return False

    return walk(0)


def enumerate_solutions(
    g: CompatibilityGraph,
    profiles: Optional[Mapping[str, BenefitProfile]] = None,
    cap: int = DEFAULT_STATE_CAP,
    count_maximal: bool = False,
) -> OracleResult:
    """Exhaust all valid solutions with gamma <= rho; track every objective."""
    s = _Search(g, cap)
    gamma = {a.id: 0 for a in s.agents}
    load: dict[tuple[int, str], int] = {}
    assign: dict[tuple[int, str], str] = {}
    rho_zero = [a.id for a in g.agents if a.rho == 0]

    best = {
        "satisfied": (-1, None),
        "ratio": (Fraction(-1), None),
        "benefit": (Fraction(-1), None),
    }
    found_full = False
    maximal = 0

    def is_maximal() -> bool:
        for t, aid in s.cells:
            if (t, aid) in assign or gamma[aid] >= s.rho[aid]:
                continue
            for rid in s.neighbours[aid]:
                if load.get((t, rid), 0) < s.capacity[rid]:
                    return False
        return True

    def evaluate():
        nonlocal found_full, maximal
        if count_maximal and is_maximal():
            maximal += 1
        satisfied = len(rho_zero) + sum(
            1 for aid in gamma if gamma[aid] == s.rho[aid]
        )
        if all(gamma[aid] == s.rho[aid] for aid in gamma):
            found_full = True
        if s.rho:
            ratio = min(Fraction(gamma[aid], s.rho[aid]) for aid in gamma)
        else:
            ratio = Fraction(1)
        snapshot = None
        if satisfied > best["satisfied"][0]:
            snapshot = dict(assign)
            best["satisfied"] = (satisfied, snapshot)
        if ratio > best["ratio"][0]:
            snapshot = snapshot or dict(assign)
            best["ratio"] = (ratio, snapshot)
        if profiles is not None:
            benefit = sum(
                (profiles[aid].mu(gamma[aid]) for aid in gamma), Fraction(0)
            )
            if benefit > best["benefit"][0]:
                snapshot = snapshot or dict(assign)
                best["benefit"] = (benefit, snapshot)

    def walk(i: int):
        s.tick()
        if i == len(s.cells):
            evaluate()
            return
        t, aid = s.cells[i]
        walk(i + 1)
        if gamma[aid] < s.rho[aid]:
            for rid in s.neighbours[aid]:
                if load.get((t, rid), 0) < s.capacity[rid]:
                    load[(t, rid)] = load.get((t, rid), 0) + 1
                    gamma[aid] += 1
                    assign[(t, aid)] = rid
                    walk(i + 1)
                    del assign[(t, aid)]
                    gamma[aid] -= 1
                    load[(t, rid)] -= 1

    walk(0)
    sat_count, sat_assign = best["satisfied"]
    ratio_val, ratio_assign = best["ratio"]
    benefit_val, benefit_assign = best["benefit"]
    return OracleResult(
        feasibility=found_full,
        best_satisfied=sat_count,
        best_min_ratio=ratio_val,
        best_total_benefit=benefit_val if profiles is not None else None,
        witness_satisfied=_solution_from(sat_assign, g),
        witness_min_ratio=_solution_from(ratio_assign, g),
        witness_benefit=(
            _solution_from(benefit_assign, g) if profiles is not None else None
        ),
        maximal_count=maximal if count_maximal else None,
    )


def best_advice_unpruned(
    g: RestrictionsGraph, cap: int = DEFAULT_STATE_CAP
) -> tuple[int, dict[str, frozenset[str]]]:
    """Best satisfied count over ALL within-budget label subsets per agent.

    Deliberately skips the Pareto pruning used by the advice search; serves
    as the ground truth that pruning preserves optimal satisfied counts.
    """
    per_agent: list[tuple[str, list[frozenset[str]]]] = []
    for a in g.agents:
        labels = sorted(a.labels)
        options = []
        for size in range(len(labels) + 1):
            for combo in itertools.combinations(labels, size):
                cost = sum((a.labels[l] for l in combo), Fraction(0))
                if cost <= a.budget:
                    options.append(frozenset(combo))
        per_agent.append((a.id, options))

    best_count = -1
    best_removals: dict[str, frozenset[str]] = {}
    for combo in itertools.product(*(opts for _, opts in per_agent)):
        removals = {aid: chosen for (aid, _), chosen in zip(per_agent, combo)}
        sub = derive_compatibility(g, removals)
        result = enumerate_solutions(sub, cap=cap)
        if result.best_satisfied > best_count:
            best_count = result.best_satisfied
            best_removals = removals
        if best_count == len(g.agents):
            break
    return best_count, best_removals


def min_vertex_cover(
    nodes: Iterable[str], edges: Iterable[tuple[str, str]]
) -> int:
    """Smallest vertex cover size by subset enumeration (tiny graphs only)."""
    nodes = sorted(set(nodes))
    edges = [tuple(e) for e in edges]
    for size in range(len(nodes) + 1):
        for combo in itertools.combinations(nodes, size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return len(nodes)


def min_set_cover(universe: Iterable[str], subsets: Iterable[Iterable[str]]) -> int:
    """Smallest cover size by subset enumeration (tiny instances only)."""
    universe = set(universe)
    pools = [set(s) for s in subsets]
    for size in range(len(pools) + 1):
        for combo in itertools.combinations(range(len(pools)), size):
            covered = set().union(*(pools[i] for i in combo)) if combo else set()
            if covered >= universe:
                return size
    raise ValueError("universe not coverable by the given subsets")
