"""Maximizing the number of satisfied agents on a fixed compatibility graph.

The problem is NP-hard at three rounds, so the exact route is a pruned
subset search: branch on agent inclusion, largest candidate sets first, and
use the feasibility solver as the oracle for "can this subset be fully
satisfied".  Feasibility is monotone (supersets of an infeasible set stay
infeasible), which prunes eagerly.  The heuristic route reuses the
total-benefit solver with unit increments and reports the agents it happens
to satisfy fully.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .benefits import profiles_for
from .errors import CapExceededError
from .instance import CompatibilityGraph, MultiRoundSolution
from .maxtb import solve_maxtb
from .mrm import solve_mrm

DEFAULT_FEASIBILITY_BUDGET = 1_000_000


@dataclass(frozen=True)
class MaxsaResult:
    satisfied: frozenset[str]
    solution: MultiRoundSolution
    exact: bool


def _restrict(g: CompatibilityGraph, keep: frozenset[str]) -> CompatibilityGraph:
    """Drop the edges (not the agents) of everyone outside ``keep``.

    Excluded agents keep rho = 0 so they are vacuously satisfiable and do not
    constrain the matching.
    """
    agents = tuple(
        a if a.id in keep else replace(a, rho=0) for a in g.agents
    )
    edges = frozenset((a, r) for a, r in g.edges if a in keep)
    unit_edges = tuple((a, c) for a, c in g.unit_edges if a in keep)
    return CompatibilityGraph(
        agents=agents,
        resources=g.resources,
        k=g.k,
        edges=edges,
        unit_edges=unit_edges,
        copy_to_resource=g.copy_to_resource,
    )


def _full_solution(
    sub_solution: MultiRoundSolution, g: CompatibilityGraph
) -> MultiRoundSolution:
    return MultiRoundSolution.from_rounds(
        sub_solution.rounds, (a.id for a in g.agents)
    )


def solve_maxsa_exact(
    g: CompatibilityGraph,
    limit: int = DEFAULT_FEASIBILITY_BUDGET,
    stop_at: int | None = None,
) -> MaxsaResult:
    """Largest satisfiable agent set, by pruned inclusion search.

    ``limit`` bounds the number of feasibility checks; exceeding it raises
    CapExceededError carrying the best incumbent.  ``stop_at`` ends the
    search early once a set of that size is found (used by the advice
    feasibility check).
    """
    vacuous = frozenset(a.id for a in g.agents if a.rho == 0)
    candidates = sorted(a.id for a in g.agents if a.rho >= 1)
    calls = 0

    def feasible(subset: frozenset[str]) -> MultiRoundSolution | None:
        nonlocal calls
        calls += 1
        if calls > limit:
            raise CapExceededError(
                f"exceeded {limit} feasibility checks", incumbent=best[1]
            )
        return solve_mrm(_restrict(g, subset))

    best: list = [len(vacuous) - 1, None]  # [count, MaxsaResult]
    empty = solve_mrm(_restrict(g, frozenset()))
    best[0] = len(vacuous)
    best[1] = MaxsaResult(
        satisfied=vacuous, solution=_full_solution(empty, g), exact=True
    )
    target = stop_at if stop_at is not None else len(vacuous) + len(candidates)

    def search(i: int, included: frozenset[str]) -> bool:
        """Returns True when the search can stop (target reached)."""
        if best[0] >= target:
            return True
        if len(vacuous) + len(included) + (len(candidates) - i) <= best[0]:
            return False
        if i == len(candidates):
            return best[0] >= target
        aid = candidates[i]
        attempt = included | {aid}
        witness = feasible(attempt)
        if witness is not None:
            if len(vacuous) + len(attempt) > best[0]:
                best[0] = len(vacuous) + len(attempt)
                best[1] = MaxsaResult(
                    satisfied=vacuous | attempt,
                    solution=_full_solution(witness, g),
                    exact=True,
                )
            if search(i + 1, attempt):
                return True
        if search(i + 1, included):
            return True
        return False

    search(0, frozenset())
    return best[1]


def solve_maxsa_heuristic(g: CompatibilityGraph) -> MaxsaResult:
    """Lower bound: run the unit-increment solver and count full satisfactions."""
    solution, _ = solve_maxtb(g, profiles_for(g, "utilitarian"))
    satisfied = frozenset(
        a.id for a in g.agents if solution.gamma.get(a.id, 0) >= a.rho
    )
    return MaxsaResult(satisfied=satisfied, solution=solution, exact=False)
