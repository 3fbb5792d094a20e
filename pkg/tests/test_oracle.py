import random
from fractions import Fraction

import pytest

from roundmatch.benefits import profiles_for
from roundmatch.errors import CapExceededError
from roundmatch.instance import (
    AgentSpec,
    ResourceSpec,
    derive_compatibility,
    label_free,
    validate_solution,
)
from roundmatch.oracle import (
    enumerate_solutions,
    feasible,
    min_set_cover,
    min_vertex_cover,
)
from .helpers import random_compat, supplement_example


def test_supplement_example_objectives():
    g = derive_compatibility(supplement_example())
    res = enumerate_solutions(g, profiles_for(g, "utilitarian"))
    assert res.feasibility is True
    assert res.best_total_benefit == 5
    assert res.best_satisfied == 3
    assert res.best_min_ratio == 1
    assert validate_solution(res.witness_benefit, g) == []
    assert validate_solution(res.witness_satisfied, g) == []


def test_empty_graph_feasible_iff_no_requirements():
    demanding = derive_compatibility(
        label_free([AgentSpec("a", 1, {1})], [ResourceSpec("r")], 1, [])
    )
    assert enumerate_solutions(demanding).feasibility is False
    relaxed = derive_compatibility(
        label_free([AgentSpec("a", 0, set())], [ResourceSpec("r")], 1, [])
    )
    res = enumerate_solutions(relaxed, profiles_for(relaxed, "utilitarian"))
    assert res.feasibility is True
    assert res.best_total_benefit == 0


def test_two_resources_give_two_maximal_solutions():
    g = derive_compatibility(
        label_free(
            [AgentSpec("a", 1, {1})],
            [ResourceSpec("r1"), ResourceSpec("r2")],
            1,
            [("a", "r1"), ("a", "r2")],
        )
    )
    res = enumerate_solutions(g, count_maximal=True)
    assert res.maximal_count == 2


def test_cap_exceeded_raises():
    rng = random.Random(1)
    g = random_compat(rng, max_agents=4, max_resources=3, max_k=3, edge_prob=1.0)
    with pytest.raises(CapExceededError):
        enumerate_solutions(g, cap=5)


def test_feasible_agrees_with_full_enumeration():
    rng = random.Random(44)
    for _ in range(150):
        g = random_compat(rng)
        assert feasible(g) == enumerate_solutions(g).feasibility


def test_min_vertex_cover_examples():
    k4_nodes = ["a", "b", "c", "d"]
    k4_edges = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                ("c", "d")]
    assert min_vertex_cover(k4_nodes, k4_edges) == 3
    path = [("a", "b"), ("b", "c")]
    assert min_vertex_cover(["a", "b", "c"], path) == 1


def test_min_set_cover_examples():
    assert min_set_cover(["z1"], [["z1"]]) == 1
    assert min_set_cover(["z1", "z2"], [["z1"], ["z2"], ["z1", "z2"]]) == 1
    assert min_set_cover(["z1", "z2"], [["z1"], ["z2"]]) == 2
    with pytest.raises(ValueError):
        min_set_cover(["z1", "z2"], [["z1"]])
