import random
from fractions import Fraction

import pytest

from roundmatch.benefits import from_deltas, profiles_for, utilitarian
from roundmatch.errors import InputValidationError
from roundmatch.instance import (
    AgentSpec,
    ResourceSpec,
    derive_compatibility,
    label_free,
    min_satisfaction_ratio,
    total_assignments,
    validate_solution,
)
from roundmatch.matching import matching_weight, max_weight_matching
from roundmatch.maxtb import build_maxtb_graph, saturate, solve_maxtb
from roundmatch.oracle import enumerate_solutions
from .helpers import random_compat, supplement_example


def single_agent(k, rounds, rho, edges=("r",)):
    g = label_free(
        [AgentSpec("a", rho, rounds)],
        [ResourceSpec(r) for r in ("r",)],
        k,
        [("a", r) for r in edges],
    )
    return derive_compatibility(g)


class TestBuildGraph:
    def test_lambda_zero_for_tight_single_round(self):
        g = single_agent(1, {1}, 1)
        red = build_maxtb_graph(g, {"a": utilitarian(1)})
        assert red.lam == 0

    def test_lambda_counts_spare_rounds(self):
        g = single_agent(2, {1, 2}, 1)
        red = build_maxtb_graph(g, {"a": utilitarian(1)})
        assert red.lam == 2  # k * (|K| - rho) with unit increments

    def test_supplement_example_slack_and_cap_counts(self):
        g = derive_compatibility(supplement_example())
        red = build_maxtb_graph(g, profiles_for(g, "utilitarian"))
        type2 = {}
        type3 = {}
        for _, (aid, _) in red.agent_of_type2.items():
            type2[aid] = type2.get(aid, 0) + 1
        for _, (aid, _) in red.agent_of_type3.items():
            type3[aid] = type3.get(aid, 0) + 1
        assert type2 == {"x1": 1, "x2": 2, "x3": 2}
        assert type3 == {"x1": 2, "x2": 1, "x3": 1}

    def test_edge_weights(self):
        g = single_agent(2, {1, 2}, 1)
        profile = from_deltas([Fraction(1, 3)])
        red = build_maxtb_graph(g, {"a": profile})
        weights = red.graph.weights
        for edge, w in weights.items():
            _, rnode = edge
            if rnode in red.resource_of_type1:
                assert w == 1
            elif rnode in red.agent_of_type2:
                assert w == 1 - Fraction(1, 3)
            else:
                assert w == g.k  # cap-node weight; lambda uses the same factor

    def test_invalid_profile_rejected_with_flag(self):
        g = single_agent(2, {1, 2}, 2)
        bad = from_deltas([Fraction(0), Fraction(1)])  # violates P3
        with pytest.raises(InputValidationError, match="P3"):
            build_maxtb_graph(g, {"a": bad})

    def test_rho_mismatch_rejected(self):
        g = single_agent(2, {1, 2}, 2)
        with pytest.raises(InputValidationError, match="rho"):
            build_maxtb_graph(g, {"a": utilitarian(1)})


class TestSaturate:
    def test_already_saturated_unchanged(self):
        g = derive_compatibility(supplement_example())
        red = build_maxtb_graph(g, profiles_for(g, "utilitarian"))
        m = saturate(max_weight_matching(red.graph), red)
        again = saturate(m, red)
        assert matching_weight(again, red.graph) == matching_weight(m, red.graph)
        assert len(again) >= len(m)

    def test_isolated_agent_copy_lands_on_slack_node(self):
        # Agent with no compatible resources: its copy must take the slack
        # node, paying 1 - delta(1).
        g = derive_compatibility(
            label_free([AgentSpec("a", 1, {1})], [ResourceSpec("r")], 1, [])
        )
        red = build_maxtb_graph(g, {"a": from_deltas([Fraction(1, 2)])})
        m = saturate(max_weight_matching(red.graph), red)
        (edge,) = [e for e in m.edges if e[0] == ("x", "a", 1)]
        assert edge[1] in red.agent_of_type2
        assert red.graph.weights[edge] == Fraction(1, 2)

    def test_saturation_never_changes_weight(self):
        rng = random.Random(23)
        for _ in range(200):
            g = random_compat(rng, min_rho=0)
            profiles = profiles_for(g, "utilitarian")
            red = build_maxtb_graph(g, profiles)
            m = max_weight_matching(red.graph)
            sat = saturate(m, red)
            assert matching_weight(sat, red.graph) == matching_weight(
                m, red.graph
            )
            for xnode in red.agent_of_copy:
                assert xnode in sat.by_left
            for y3 in red.agent_of_type3:
                assert y3 in sat.by_right


class TestSolve:
    def test_supplement_example_reaches_total_requirement(self):
        g = derive_compatibility(supplement_example())
        solution, benefit = solve_maxtb(g, profiles_for(g, "utilitarian"))
        assert benefit == 5 == sum(a.rho for a in g.agents)
        assert validate_solution(solution, g) == []

    def test_empty_compatibility_graph(self):
        g = derive_compatibility(
            label_free(
                [AgentSpec("a", 1, {1}), AgentSpec("b", 2, {1, 2})],
                [ResourceSpec("r")],
                2,
                [],
            )
        )
        solution, benefit = solve_maxtb(g, profiles_for(g, "utilitarian"))
        assert benefit == 0
        assert all(not rnd for rnd in solution.rounds)

    def test_utilitarian_matches_oracle(self):
        rng = random.Random(24)
        for trial in range(150):
            g = random_compat(rng, allow_capacity=True)
            profiles = profiles_for(g, "utilitarian")
            solution, benefit = solve_maxtb(g, profiles)
            res = enumerate_solutions(g, profiles)
            assert benefit == res.best_total_benefit, trial
            assert validate_solution(solution, g) == []

    def test_rawlsian_maximizes_minimum_ratio(self):
        rng = random.Random(25)
        for trial in range(100):
            g = random_compat(rng, max_agents=3)
            solution, _ = solve_maxtb(g, profiles_for(g, "rawlsian"))
            res = enumerate_solutions(g)
            got = min_satisfaction_ratio(solution, g.agents)
            assert got == res.best_min_ratio, trial

    def test_rawlsian_total_matches_utilitarian_optimum(self):
        # Strictly increasing valid profiles also maximize total assignments.
        rng = random.Random(26)
        for trial in range(100):
            g = random_compat(rng, max_agents=3)
            rawls, _ = solve_maxtb(g, profiles_for(g, "rawlsian"))
            _, utilitarian_best = solve_maxtb(g, profiles_for(g, "utilitarian"))
            assert total_assignments(rawls) == utilitarian_best, trial

    def test_gamma_never_exceeds_rho(self):
        rng = random.Random(27)
        for _ in range(100):
            g = random_compat(rng)
            solution, _ = solve_maxtb(g, profiles_for(g, "utilitarian"))
            for a in g.agents:
                assert solution.gamma.get(a.id, 0) <= a.rho


class TestMinSatisfactionRatio:
    def test_examples(self):
        agents = [AgentSpec("a", 1, {1}), AgentSpec("b", 2, {1, 2}),
                  AgentSpec("c", 2, {1, 2})]
        from roundmatch.instance import MultiRoundSolution
        s = MultiRoundSolution(rounds=(), gamma={"a": 1, "b": 2, "c": 2})
        assert min_satisfaction_ratio(s, agents) == 1
