"""Feasibility solver: can every agent be matched in exactly rho rounds?

The instance reduces to one maximum-cardinality matching.  Each resource copy
becomes k round nodes.  An agent needing a single round becomes one node with
edges into every permitted round of every compatible resource; an agent
needing two or more rounds becomes one node per permitted round plus
(|K_i| - rho_i) dummy-resource nodes that absorb the rounds it sits out.
The instance is feasible iff some matching covers every agent-side node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .instance import CompatibilityGraph, CopyId, MultiRoundSolution
from .matching import BipartiteGraph, Matching, max_cardinality_matching

# Node shapes: ("x", agent, round) agent copies (round 0 for the single-round
# form), ("y", resource, copy, round) resource-round nodes, ("z", agent, i)
# dummy resources.
XNode = tuple[str, str, int]
YNode = tuple[str, str, int, int]
ZNode = tuple[str, str, int]


@dataclass(frozen=True)
class MrmReduction:
    graph: BipartiteGraph
    agent_of_copy: Mapping[XNode, tuple[str, Optional[int]]]
    resource_of_node: Mapping[YNode, tuple[CopyId, int]]
    agent_of_dummy: Mapping[ZNode, str]


def build_mrm_graph(g: CompatibilityGraph) -> MrmReduction:
    """Construct the reduction graph; agents with rho = 0 are left out."""
    agents = [a for a in g.agents if a.rho >= 1]
    by_agent_copies: dict[str, list[CopyId]] = {a.id: [] for a in agents}
    for aid, copy in g.unit_edges:
        if aid in by_agent_copies:
            by_agent_copies[aid].append(copy)

    left: list[XNode] = []
    right: list[YNode | ZNode] = []
    edges: list[tuple[XNode, YNode | ZNode]] = []
    agent_of_copy: dict[XNode, tuple[str, Optional[int]]] = {}
    resource_of_node: dict[YNode, tuple[CopyId, int]] = {}
    agent_of_dummy: dict[ZNode, str] = {}

    for copy in g.copies:
        rid, idx = copy
        for t in range(1, g.k + 1):
            node = ("y", rid, idx, t)
            right.append(node)
            resource_of_node[node] = (copy, t)

    for a in agents:
        rounds = sorted(a.allowed_rounds)
        if a.rho == 1:
            node = ("x", a.id, 0)
            left.append(node)
            agent_of_copy[node] = (a.id, None)
            for copy in by_agent_copies[a.id]:
                rid, idx = copy
                for t in rounds:
                    edges.append((node, ("y", rid, idx, t)))
        else:
            dummies: list[ZNode] = []
            for i in range(len(rounds) - a.rho):
                dummy = ("z", a.id, i)
                right.append(dummy)
                agent_of_dummy[dummy] = a.id
                dummies.append(dummy)
            for t in rounds:
                node = ("x", a.id, t)
                left.append(node)
                agent_of_copy[node] = (a.id, t)
                for copy in by_agent_copies[a.id]:
                    rid, idx = copy
                    edges.append((node, ("y", rid, idx, t)))
                for dummy in dummies:
                    edges.append((node, dummy))

    graph = BipartiteGraph(
        left=tuple(sorted(left)),
        right=tuple(sorted(right, key=repr)),
        edges=tuple(sorted(edges, key=repr)),
    )
    return MrmReduction(
        graph=graph,
        agent_of_copy=agent_of_copy,
        resource_of_node=resource_of_node,
        agent_of_dummy=agent_of_dummy,
    )


def extract_rounds(
    matching: Matching, red: MrmReduction, g: CompatibilityGraph
) -> MultiRoundSolution:
    """Turn a matching that covers all agent copies into k round matchings.

    Excess real assignments (possible when a dummy stays unmatched) are
    pruned so that every agent lands on exactly rho rounds; the earliest
    rounds are kept.
    """
    per_agent: dict[str, list[tuple[int, str]]] = {}
    for lnode, rnode in sorted(matching.edges, key=repr):
        if rnode in red.agent_of_dummy:
            continue
        copy, t = red.resource_of_node[rnode]
        aid, _ = red.agent_of_copy[lnode]
        per_agent.setdefault(aid, []).append((t, g.copy_to_resource[copy]))
    rounds: list[set[tuple[str, str]]] = [set() for _ in range(g.k)]
    for aid in sorted(per_agent):
        rho = g.agent(aid).rho
        for t, rid in sorted(per_agent[aid])[:rho]:
            rounds[t - 1].add((aid, rid))
    return MultiRoundSolution.from_rounds(rounds, (a.id for a in g.agents))


def solve_mrm(g: CompatibilityGraph) -> Optional[MultiRoundSolution]:
    """A solution with gamma_i = rho_i for every agent, or None if infeasible."""
    red = build_mrm_graph(g)
    matching = max_cardinality_matching(red.graph)
    if len(matching) < len(red.graph.left):
        return None
    return extract_rounds(matching, red, g)
