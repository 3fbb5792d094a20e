"""Total-benefit maximization over valid benefit profiles.

One maximum-weight matching on a gadget graph solves the whole multi-round
problem.  Every agent contributes one copy per permitted round; the right
side holds three node kinds per the construction:

* type-1: one node per resource copy per round, edge weight 1;
* type-2: rho_i slack nodes per agent, edge weight 1 - delta_i(p), absorbing
  rounds the agent could use but the optimum leaves unassigned;
* type-3: |K_i| - rho_i cap nodes per agent with edge weight k, absorbing the
  permitted rounds beyond rho_i (the weight makes every optimum use them all,
  which caps gamma_i at rho_i).

With lambda = sum_i k(|K_i|-rho_i) + sum_i sum_l (1 - delta_i(l)), a
saturated maximum-weight matching of weight W yields a solution of benefit
W - lambda; that identity is asserted on every solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .benefits import BenefitProfile, check_validity
from .errors import InputValidationError, InternalConsistencyError
from .instance import (
    CompatibilityGraph,
    CopyId,
    MultiRoundSolution,
    min_satisfaction_ratio,
)
from .matching import (
    BipartiteGraph,
    Matching,
    matching_weight,
    max_weight_matching,
)

XNode = tuple[str, str, int]
Y1Node = tuple[str, str, int, int]
Y2Node = tuple[str, str, int]
Y3Node = tuple[str, str, int]


@dataclass(frozen=True)
class MaxtbReduction:
    graph: BipartiteGraph
    lam: Fraction
    agent_of_copy: Mapping[XNode, tuple[str, int]]
    resource_of_type1: Mapping[Y1Node, tuple[CopyId, int]]
    agent_of_type2: Mapping[Y2Node, tuple[str, int]]
    agent_of_type3: Mapping[Y3Node, tuple[str, int]]


def build_maxtb_graph(
    g: CompatibilityGraph, profiles: Mapping[str, BenefitProfile]
) -> MaxtbReduction:
    """Build the weighted reduction; profiles must be valid and rho-consistent."""
    agents = [a for a in g.agents if a.rho >= 1]
    for a in agents:
        if a.id not in profiles:
            raise InputValidationError(f"no benefit profile for agent {a.id}")
        profile = profiles[a.id]
        if profile.rho != a.rho:
            raise InputValidationError(
                f"agent {a.id}: profile has rho={profile.rho}, instance rho={a.rho}"
            )
        report = check_validity(profile)
        if not report.valid:
            failing = [
                name
                for name, ok in (
                    ("P1", report.p1),
                    ("P2", report.p2),
                    ("P3", report.p3),
                    ("P4", report.p4),
                )
                if not ok
            ]
            raise InputValidationError(
                f"agent {a.id}: benefit profile violates {', '.join(failing)}"
            )

    by_agent_copies: dict[str, list[CopyId]] = {a.id: [] for a in agents}
    for aid, copy in g.unit_edges:
        if aid in by_agent_copies:
            by_agent_copies[aid].append(copy)

    left: list[XNode] = []
    right: list = []
    edges: list = []
    weights: dict = {}
    agent_of_copy: dict[XNode, tuple[str, int]] = {}
    resource_of_type1: dict[Y1Node, tuple[CopyId, int]] = {}
    agent_of_type2: dict[Y2Node, tuple[str, int]] = {}
    agent_of_type3: dict[Y3Node, tuple[str, int]] = {}
    k = g.k

    for copy in g.copies:
        rid, idx = copy
        for t in range(1, k + 1):
            node = ("y1", rid, idx, t)
            right.append(node)
            resource_of_type1[node] = (copy, t)

    lam = Fraction(0)
    for a in agents:
        rounds = sorted(a.allowed_rounds)
        profile = profiles[a.id]
        lam += Fraction(k) * (len(rounds) - a.rho)
        lam += sum((1 - d for d in profile.delta), Fraction(0))
        type2 = []
        for p in range(1, a.rho + 1):
            node = ("y2", a.id, p)
            right.append(node)
            agent_of_type2[node] = (a.id, p)
            type2.append((node, 1 - profile.delta[p - 1]))
        type3 = []
        for p in range(1, len(rounds) - a.rho + 1):
            node = ("y3", a.id, p)
            right.append(node)
            agent_of_type3[node] = (a.id, p)
            type3.append(node)
        for t in rounds:
            xnode = ("x", a.id, t)
            left.append(xnode)
            agent_of_copy[xnode] = (a.id, t)
            for copy in by_agent_copies[a.id]:
                rid, idx = copy
                e = (xnode, ("y1", rid, idx, t))
                edges.append(e)
                weights[e] = Fraction(1)
            for node, w in type2:
                e = (xnode, node)
                edges.append(e)
                weights[e] = w
            for node in type3:
                e = (xnode, node)
                edges.append(e)
                weights[e] = Fraction(k)

    graph = BipartiteGraph(
        left=tuple(sorted(left)),
        right=tuple(sorted(right, key=repr)),
        edges=tuple(sorted(edges, key=repr)),
        weights=weights,
    )
    return MaxtbReduction(
        graph=graph,
        lam=lam,
        agent_of_copy=agent_of_copy,
        resource_of_type1=resource_of_type1,
        agent_of_type2=agent_of_type2,
        agent_of_type3=agent_of_type3,
    )


def saturate(m: Matching, r: MaxtbReduction) -> Matching:
    """Extend a maximum-weight matching to cover all agent copies.

    Every maximum-weight matching already covers the type-3 nodes; leftover
    agent copies are matched to free type-2 nodes of the same agent, which by
    maximality can only be zero-weight edges, so the total weight is
    unchanged.
    """
    for node in r.agent_of_type3:
        if node not in m.by_right:
            raise InternalConsistencyError(
                f"type-3 node {node!r} unmatched in a maximum-weight matching"
            )
    by_left = m.by_left
    free_type2: dict[str, list] = {}
    for node in sorted(r.agent_of_type2, key=repr):
        if node not in m.by_right:
            free_type2.setdefault(r.agent_of_type2[node][0], []).append(node)
    new_edges = set(m.edges)
    for xnode in sorted(r.agent_of_copy, key=repr):
        if xnode in by_left:
            continue
        aid, _ = r.agent_of_copy[xnode]
        pool = free_type2.get(aid)
        if not pool:
            raise InternalConsistencyError(
                f"no free slack node left for agent copy {xnode!r}"
            )
        new_edges.add((xnode, pool.pop(0)))
    saturated = Matching(frozenset(new_edges))
    if matching_weight(saturated, r.graph) != matching_weight(m, r.graph):
        raise InternalConsistencyError("saturation changed the matching weight")
    return saturated


def solve_maxtb(
    g: CompatibilityGraph, profiles: Mapping[str, BenefitProfile]
) -> tuple[MultiRoundSolution, Fraction]:
    """Optimal solution and its exact total benefit for valid profiles."""
    red = build_maxtb_graph(g, profiles)
    matching = saturate(max_weight_matching(red.graph), red)
    rounds: list[set[tuple[str, str]]] = [set() for _ in range(g.k)]
    for lnode, rnode in matching.edges:
        if rnode not in red.resource_of_type1:
            continue
        copy, t = red.resource_of_type1[rnode]
        aid, _ = red.agent_of_copy[lnode]
        rounds[t - 1].add((aid, g.copy_to_resource[copy]))
    solution = MultiRoundSolution.from_rounds(rounds, (a.id for a in g.agents))
    benefit = Fraction(0)
    for a in g.agents:
        if a.rho >= 1:
            gamma = solution.gamma.get(a.id, 0)
            if gamma > a.rho:
                raise InternalConsistencyError(
                    f"agent {a.id} assigned {gamma} > rho={a.rho} rounds"
                )
            benefit += profiles[a.id].mu(gamma)
    weight = matching_weight(matching, red.graph)
    if weight - red.lam != benefit:
        raise InternalConsistencyError(
            f"weight identity violated: W={weight}, lambda={red.lam}, "
            f"benefit={benefit}"
        )
    return solution, benefit


__all__ = [
    "MaxtbReduction",
    "build_maxtb_graph",
    "saturate",
    "solve_maxtb",
    "min_satisfaction_ratio",
]
