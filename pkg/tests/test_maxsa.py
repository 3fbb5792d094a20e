import random

import pytest

from roundmatch.errors import CapExceededError
from roundmatch.generate import CUBIC_GRAPHS, reduce_from_vertex_cover
from roundmatch.instance import (
    AgentSpec,
    ResourceSpec,
    derive_compatibility,
    label_free,
    satisfaction,
    validate_solution,
)
from roundmatch.maxsa import solve_maxsa_exact, solve_maxsa_heuristic
from roundmatch.mrm import solve_mrm
from roundmatch.oracle import enumerate_solutions, min_vertex_cover
from .helpers import random_compat, supplement_example


class TestExact:
    def test_feasible_instance_satisfies_everyone(self):
        g = derive_compatibility(supplement_example())
        result = solve_maxsa_exact(g)
        assert result.satisfied == {"x1", "x2", "x3"}
        assert result.exact is True
        assert validate_solution(result.solution, g) == []

    def test_k4_gadget_optimum(self):
        edges = CUBIC_GRAPHS["k4"]
        nodes = sorted({u for e in edges for u in e})
        hstar = min_vertex_cover(nodes, edges)
        gadget, q = reduce_from_vertex_cover(edges, hstar)
        assert q == 2 * len(edges) + len(nodes) - hstar == 13
        result = solve_maxsa_exact(derive_compatibility(gadget))
        assert len(result.satisfied) == 13

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(33)
        for trial in range(200):
            g = random_compat(rng, max_agents=3, max_resources=2, max_k=2)
            result = solve_maxsa_exact(g)
            res = enumerate_solutions(g)
            assert len(result.satisfied) == res.best_satisfied, trial
            report = satisfaction(result.solution, g.agents)
            assert all(report[aid] for aid in result.satisfied), trial
            assert validate_solution(result.solution, g) == []

    def test_budget_exhaustion_carries_incumbent(self):
        g = derive_compatibility(
            label_free(
                [AgentSpec(f"a{i}", 1, {1}) for i in range(4)],
                [ResourceSpec(f"r{j}") for j in range(3)],
                1,
                [(f"a{i}", f"r{j}") for i in range(4) for j in range(3)],
            )
        )
        with pytest.raises(CapExceededError) as info:
            solve_maxsa_exact(g, limit=2)
        assert info.value.incumbent is not None

    def test_unsatisfied_agents_left_unmatched(self):
        g = derive_compatibility(
            label_free(
                [AgentSpec("a", 1, {1}), AgentSpec("b", 1, {1})],
                [ResourceSpec("r")],
                1,
                [("a", "r"), ("b", "r")],
            )
        )
        result = solve_maxsa_exact(g)
        assert len(result.satisfied) == 1
        matched = {aid for rnd in result.solution.rounds for aid, _ in rnd}
        assert matched == set(result.satisfied)

    def test_dropping_an_agent_changes_optimum_by_at_most_one(self):
        rng = random.Random(35)
        for _ in range(40):
            g = random_compat(rng, max_agents=3, max_resources=2, max_k=2)
            full = len(solve_maxsa_exact(g).satisfied)
            victim = g.agents[0].id
            smaller_agents = [a for a in g.agents if a.id != victim]
            sub = derive_compatibility(
                label_free(
                    smaller_agents,
                    g.resources,
                    g.k,
                    [(a, r) for a, r in sorted(g.edges) if a != victim],
                )
            )
            reduced = len(solve_maxsa_exact(sub).satisfied)
            assert reduced <= full
            assert full - reduced <= 1


class TestHeuristic:
    def test_feasible_instance_satisfies_everyone(self):
        g = derive_compatibility(supplement_example())
        assert solve_maxsa_heuristic(g).satisfied == {"x1", "x2", "x3"}

    def test_never_beats_exact(self):
        rng = random.Random(36)
        for trial in range(100):
            g = random_compat(rng, max_agents=3, max_resources=2, max_k=2)
            heur = solve_maxsa_heuristic(g)
            exact = solve_maxsa_exact(g)
            assert len(heur.satisfied) <= len(exact.satisfied), trial
            assert heur.exact is False

    def test_empty_graph_satisfies_only_vacuous_agents(self):
        g = derive_compatibility(
            label_free(
                [AgentSpec("a", 0, set()), AgentSpec("b", 1, {1})],
                [ResourceSpec("r")],
                1,
                [],
            )
        )
        assert solve_maxsa_heuristic(g).satisfied == {"a"}

    def test_gadget_bound_reverified_against_witness(self):
        gadget, _ = reduce_from_vertex_cover(CUBIC_GRAPHS["k4"], 3)
        g = derive_compatibility(gadget)
        heur = solve_maxsa_heuristic(g)
        assert len(heur.satisfied) <= 13
        report = satisfaction(heur.solution, g.agents)
        assert all(report[aid] for aid in heur.satisfied)


def test_search_walks_straight_to_full_set_when_feasible():
    # Include-first branching reaches the full agent set after one
    # feasibility probe per agent on feasible instances.
    g = derive_compatibility(supplement_example())
    assert solve_mrm(g) is not None
    assert len(solve_maxsa_exact(g, limit=3).satisfied) == 3
