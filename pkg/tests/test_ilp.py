import random
from fractions import Fraction
from pathlib import Path

from roundmatch.advice import exact_advice
from roundmatch.ilp import (
    build_ilp,
    bruteforce_optimum,
    emit_lp,
    enumerate_model_bruteforce,
    lp_counts,
)
from roundmatch.instance import (
    AgentSpec,
    ResourceSpec,
    RestrictionEdge,
    RestrictionsGraph,
)
from .helpers import random_restrictions

GOLDEN = Path(__file__).parent / "data" / "ilp_2x2x2.lp"


def two_by_two() -> RestrictionsGraph:
    agents = (
        AgentSpec(
            "a1", 1, {1, 2}, budget=Fraction(1),
            labels={"l1": Fraction(1), "l2": Fraction(2)},
        ),
        AgentSpec("a2", 2, {1, 2}, budget=Fraction(0)),
    )
    resources = (ResourceSpec("r1"), ResourceSpec("r2", capacity=2))
    edges = (
        RestrictionEdge("a1", "r1", frozenset({"l1"})),
        RestrictionEdge("a1", "r2", frozenset({"l1", "l2"})),
        RestrictionEdge("a2", "r1"),
    )
    return RestrictionsGraph(agents, resources, 2, edges)


class TestModelShape:
    def test_variable_counts_match_closed_forms(self):
        rng = random.Random(51)
        for _ in range(30):
            g = random_restrictions(rng)
            model = build_ilp(g)
            n, m, k = len(g.agents), len(g.resources), g.k
            total_labels = sum(len(a.labels) for a in g.agents)
            assert model.count("w_") == total_labels
            assert model.count("z_") == n * m
            assert model.count("a_") == n * m * k
            assert model.count("eta_") == n
            assert model.count("s_") == n

    def test_single_cell_instance_is_satisfiable(self):
        g = RestrictionsGraph(
            (AgentSpec("a", 1, {1}),),
            (ResourceSpec("r"),),
            1,
            (RestrictionEdge("a", "r"),),
        )
        model = build_ilp(g)
        assert enumerate_model_bruteforce(model) == 1
        assert bruteforce_optimum(g) == 1

    def test_missing_edges_get_zeroing_constraints(self):
        g = two_by_two()
        model = build_ilp(g)
        names = {c.name for c in model.constraints}
        assert "miss_2_2" in names  # (a2, r2) has no restrictions-graph edge
        assert "free_2_1" in names
        assert "lnkdn_1_2" in names

    def test_constraint_families_present(self):
        model = build_ilp(two_by_two())
        prefixes = {c.name.split("_")[0] for c in model.constraints}
        assert prefixes >= {
            "budget", "lnkup", "lnkdn", "free", "miss", "use", "rounds",
            "adeg", "rdeg", "salo", "sahi",
        }


class TestOptimum:
    def test_matches_exact_advice(self):
        rng = random.Random(52)
        for trial in range(30):
            g = random_restrictions(rng)
            assert bruteforce_optimum(g) == exact_advice(g).satisfied, trial

    def test_generic_enumeration_agrees_on_micro_models(self):
        rng = random.Random(53)
        done = 0
        while done < 15:
            g = random_restrictions(rng, max_agents=2, max_labels=2)
            model = build_ilp(g)
            if len(model.binaries) > 18:
                continue
            assert enumerate_model_bruteforce(model) == bruteforce_optimum(g)
            done += 1


class TestEmission:
    def test_empty_instance(self):
        g = RestrictionsGraph((), (), 1, ())
        text = emit_lp(build_ilp(g))
        assert " obj: 0\n" in text
        counts = lp_counts(text)
        assert counts["constraints"] == 0
        assert counts["binaries"] == 0

    def test_golden_file(self):
        text = emit_lp(build_ilp(two_by_two()))
        assert text == GOLDEN.read_text()

    def test_roundtrip_counts(self):
        rng = random.Random(54)
        for _ in range(10):
            g = random_restrictions(rng)
            model = build_ilp(g)
            counts = lp_counts(emit_lp(model))
            assert counts["constraints"] == len(model.constraints)
            assert counts["binaries"] == len(model.binaries)
            assert counts["generals"] == len(model.generals)
            assert counts["objective_terms"] == len(model.objective)

    def test_emission_is_byte_stable(self):
        g = two_by_two()
        assert emit_lp(build_ilp(g)) == emit_lp(build_ilp(g))
