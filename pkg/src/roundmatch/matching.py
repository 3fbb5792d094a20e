"""Bipartite matching primitives used by all reductions.

Maximum-cardinality matching uses layered augmenting paths (Hopcroft-Karp).
Maximum-weight matching uses successive shortest augmenting paths with node
potentials over exact rationals, stopping when the best augmenting path has
non-positive gain; this yields a maximum-weight matching of unrestricted
cardinality.  Both are deterministic for a fixed input ordering.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Hashable, Mapping, Optional

from .errors import InputValidationError, InternalConsistencyError

Node = Hashable
Edge = tuple[Node, Node]


@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple[Node, ...]
    right: tuple[Node, ...]
    edges: tuple[Edge, ...]
    weights: Optional[Mapping[Edge, Fraction]] = None

    def __post_init__(self):
        left = set(self.left)
        right = set(self.right)
        if len(left) != len(self.left) or len(right) != len(self.right):
            raise InputValidationError("duplicate nodes in a partition")
        seen = set()
        for e in self.edges:
            l, r = e
            if l not in left or r not in right:
                raise InputValidationError(f"edge {e!r} uses unknown endpoints")
            if e in seen:
                raise InputValidationError(f"parallel edge {e!r}")
            seen.add(e)
        if self.weights is not None:
            missing = seen - set(self.weights)
            if missing:
                raise InputValidationError(
                    f"weights missing for {len(missing)} edges"
                )

    def weight(self, edge: Edge) -> Fraction:
        if self.weights is None:
            raise InputValidationError("graph is unweighted")
        return Fraction(self.weights[edge])

    def adjacency(self) -> dict[Node, list[Node]]:
        adj: dict[Node, list[Node]] = {l: [] for l in self.left}
        for l, r in self.edges:
            adj[l].append(r)
        for l in adj:
            adj[l].sort(key=repr)
        return adj


@dataclass(frozen=True)
class Matching:
    edges: frozenset[Edge]

    def __post_init__(self):
        lefts = [l for l, _ in self.edges]
        rights = [r for _, r in self.edges]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise InputValidationError("matching edges share an endpoint")

    @property
    def by_left(self) -> dict[Node, Node]:
        return {l: r for l, r in self.edges}

    @property
    def by_right(self) -> dict[Node, Node]:
        return {r: l for l, r in self.edges}

    def __len__(self) -> int:
        return len(self.edges)


def matching_weight(m: Matching, g: BipartiteGraph) -> Fraction:
    return sum((g.weight(e) for e in m.edges), Fraction(0))


def max_cardinality_matching(g: BipartiteGraph) -> Matching:
    """Hopcroft-Karp maximum-cardinality matching."""
    adj = g.adjacency()
    order = list(g.left)
    pair_l: dict[Node, Node] = {}
    pair_r: dict[Node, Node] = {}
    dist: dict[Node, float] = {}

    def bfs() -> bool:
        queue: deque[Node] = deque()
        for l in order:
            if l not in pair_l:
                dist[l] = 0
                queue.append(l)
            else:
                dist[l] = inf
        reachable_free_right = False
        while queue:
            l = queue.popleft()
            for r in adj[l]:
                l2 = pair_r.get(r)
                if l2 is None:
                    reachable_free_right = True
                elif dist[l2] == inf:
                    dist[l2] = dist[l] + 1
                    queue.append(l2)
        return reachable_free_right

    def dfs(root: Node) -> bool:
        # Iterative alternating DFS; recursion would overflow on long paths.
        stack: list[tuple[Node, object]] = [(root, iter(adj[root]))]
        via: list[tuple[Node, Node]] = []
        while stack:
            l, it = stack[-1]
            step = None
            for r in it:
                l2 = pair_r.get(r)
                if l2 is None:
                    step = (r, None)
                    break
                if dist[l2] == dist[l] + 1:
                    step = (r, l2)
                    break
            if step is None:
                dist[l] = inf
                stack.pop()
                if via:
                    via.pop()
                continue
            r, l2 = step
            if l2 is None:
                pair_l[l] = r
                pair_r[r] = l
                for pl, pr in reversed(via):
                    pair_l[pl] = pr
                    pair_r[pr] = pl
                return True
            via.append((l, r))
            stack.append((l2, iter(adj[l2])))
        return False

    while bfs():
        for l in order:
            if l not in pair_l:
                dfs(l)
    return Matching(frozenset(pair_l.items()))


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


_SOURCE = _Sentinel("<source>")
_SINK = _Sentinel("<sink>")


def max_weight_matching(g: BipartiteGraph) -> Matching:
    """Maximum-weight matching over exact rationals.

    Augments along the cheapest path (in negated-weight cost) while the true
    path cost stays negative, i.e. while the weight gain is positive.  Node
    potentials keep reduced costs non-negative so each search is a Dijkstra.
    """
    if g.weights is None:
        raise InputValidationError("max_weight_matching requires edge weights")
    for e in g.edges:
        if g.weight(e) < 0:
            raise InputValidationError(f"negative weight on edge {e!r}")

    adj = g.adjacency()
    weight = {e: g.weight(e) for e in g.edges}
    left_set = set(g.left)
    pair_l: dict[Node, Node] = {}
    pair_r: dict[Node, Node] = {}

    # Potentials: cost(l->r) = -w(l,r), cost(source->l) = cost(r->sink) = 0.
    pot: dict[Node, Fraction] = {_SOURCE: Fraction(0), _SINK: Fraction(0)}
    for l in g.left:
        pot[l] = Fraction(0)
    for r in g.right:
        incoming = [weight[(l, r)] for l in g.left if (l, r) in weight]
        pot[r] = -max(incoming) if incoming else Fraction(0)
    if g.right:
        pot[_SINK] = min(pot[r] for r in g.right)

    while True:
        dist: dict[Node, Fraction | float] = {n: inf for n in pot}
        pred: dict[Node, Node] = {}
        dist[_SOURCE] = Fraction(0)
        counter = 0
        heap: list[tuple[Fraction | float, int, Node]] = [
            (Fraction(0), counter, _SOURCE)
        ]
        done: set[Node] = set()

        def relax(u: Node, v: Node, cost: Fraction):
            nonlocal counter
            cand = dist[u] + cost + pot[u] - pot[v]
            if cand < dist[v]:
                dist[v] = cand
                pred[v] = u
                counter += 1
                heapq.heappush(heap, (cand, counter, v))

        while heap:
            d, _, u = heapq.heappop(heap)
            if u in done or d > dist[u]:
                continue
            done.add(u)
            if u is _SOURCE:
                for l in g.left:
                    if l not in pair_l:
                        relax(_SOURCE, l, Fraction(0))
            elif u in left_set:
                for r in adj[u]:
                    if pair_l.get(u) != r:
                        relax(u, r, -weight[(u, r)])
            elif u is not _SINK:
                l2 = pair_r.get(u)
                if l2 is None:
                    relax(u, _SINK, Fraction(0))
                else:
                    relax(u, l2, weight[(l2, u)])

        if dist[_SINK] == inf:
            break
        true_cost = dist[_SINK] + pot[_SINK] - pot[_SOURCE]
        if true_cost >= 0:
            break

        # Re-centre potentials; unreached nodes are capped at the sink label.
        bound = dist[_SINK]
        for n in pot:
            pot[n] += min(dist[n], bound)

        # Walk sink -> source; consecutive (left, right) path pairs become
        # the new matched edges, overwriting the old pairings on the path.
        path: list[Node] = []
        node: Node = _SINK
        while node is not _SOURCE:
            path.append(node)
            node = pred[node]
        path.reverse()
        path = path[:-1]
        if len(path) % 2 != 0:
            raise InternalConsistencyError("augmenting path has odd length")
        for i in range(0, len(path), 2):
            l, r = path[i], path[i + 1]
            pair_l[l] = r
            pair_r[r] = l

    return Matching(frozenset(pair_l.items()))
