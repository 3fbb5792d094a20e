import itertools
import random
from fractions import Fraction

import pytest

from roundmatch.errors import InputValidationError
from roundmatch.matching import (
    BipartiteGraph,
    Matching,
    matching_weight,
    max_cardinality_matching,
    max_weight_matching,
)


def brute_force_best(edges, weights=None):
    """Max cardinality and max weight over every subset that is a matching."""
    best_card, best_weight = 0, Fraction(0)
    for size in range(len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            lefts = [l for l, _ in combo]
            rights = [r for _, r in combo]
            if len(set(lefts)) != size or len(set(rights)) != size:
                continue
            best_card = max(best_card, size)
            if weights is not None:
                best_weight = max(
                    best_weight, sum((weights[e] for e in combo), Fraction(0))
                )
    return best_card, best_weight


def random_weighted(rng, nl, nr, prob=0.5):
    left = tuple(f"l{i}" for i in range(nl))
    right = tuple(f"r{j}" for j in range(nr))
    edges = tuple(
        (l, r) for l in left for r in right if rng.random() < prob
    )
    weights = {
        e: Fraction(rng.randint(0, 12), rng.randint(1, 4)) for e in edges
    }
    return BipartiteGraph(left, right, edges, weights)


class TestMaxCardinality:
    def test_forced_augmenting_path(self):
        g = BipartiteGraph(
            ("a", "b"), ("1", "2"), (("a", "1"), ("b", "1"), ("b", "2"))
        )
        assert len(max_cardinality_matching(g)) == 2

    def test_empty_graph(self):
        g = BipartiteGraph((), (), ())
        assert len(max_cardinality_matching(g)) == 0

    def test_random_graphs_match_enumeration(self):
        rng = random.Random(8)
        for trial in range(200):
            nl, nr = rng.randint(0, 8), rng.randint(0, 8)
            left = tuple(f"l{i}" for i in range(nl))
            right = tuple(f"r{j}" for j in range(nr))
            edges = tuple(
                (l, r) for l in left for r in right if rng.random() < 0.3
            )
            g = BipartiteGraph(left, right, edges)
            got = max_cardinality_matching(g)
            want, _ = brute_force_best(edges)
            assert len(got) == want, trial


class TestMaxWeight:
    def test_single_zero_weight_edge(self):
        g = BipartiteGraph(
            ("a",), ("1",), (("a", "1"),), {("a", "1"): Fraction(0)}
        )
        m = max_weight_matching(g)
        assert matching_weight(m, g) == 0

    def test_three_edge_tie(self):
        edges = (("a", "1"), ("a", "2"), ("b", "1"))
        weights = {
            ("a", "1"): Fraction(3),
            ("a", "2"): Fraction(1),
            ("b", "1"): Fraction(2),
        }
        g = BipartiteGraph(("a", "b"), ("1", "2"), edges, weights)
        m = max_weight_matching(g)
        _, want = brute_force_best(edges, weights)
        assert matching_weight(m, g) == want == 3

    def test_negative_weight_rejected(self):
        g = BipartiteGraph(
            ("a",), ("1",), (("a", "1"),), {("a", "1"): Fraction(-1)}
        )
        with pytest.raises(InputValidationError, match="negative weight"):
            max_weight_matching(g)

    def test_random_graphs_match_enumeration(self):
        rng = random.Random(9)
        for trial in range(200):
            g = random_weighted(rng, rng.randint(0, 6), rng.randint(0, 6))
            m = max_weight_matching(g)
            _, want = brute_force_best(g.edges, g.weights)
            assert matching_weight(m, g) == want, trial

    def test_weight_invariant_under_edge_permutation(self):
        rng = random.Random(10)
        for _ in range(30):
            g = random_weighted(rng, 4, 4, prob=0.7)
            base = matching_weight(max_weight_matching(g), g)
            shuffled = list(g.edges)
            rng.shuffle(shuffled)
            g2 = BipartiteGraph(g.left, g.right, tuple(shuffled), g.weights)
            assert matching_weight(max_weight_matching(g2), g2) == base

    def test_weight_scales_with_positive_factor(self):
        rng = random.Random(11)
        for _ in range(30):
            g = random_weighted(rng, 4, 4, prob=0.7)
            factor = Fraction(rng.randint(1, 5), rng.randint(1, 5))
            scaled = {e: w * factor for e, w in g.weights.items()}
            g2 = BipartiteGraph(g.left, g.right, g.edges, scaled)
            assert matching_weight(
                max_weight_matching(g2), g2
            ) == factor * matching_weight(max_weight_matching(g), g)


class TestMatchingType:
    def test_shared_endpoint_rejected(self):
        with pytest.raises(InputValidationError, match="share an endpoint"):
            Matching(frozenset({("a", "1"), ("a", "2")}))

    def test_outputs_pass_matching_invariants(self):
        rng = random.Random(12)
        for _ in range(50):
            g = random_weighted(rng, 5, 5)
            for m in (
                max_cardinality_matching(
                    BipartiteGraph(g.left, g.right, g.edges)
                ),
                max_weight_matching(g),
            ):
                # The constructor enforces the invariant; re-wrap to assert.
                Matching(m.edges)

    def test_parallel_edges_rejected(self):
        with pytest.raises(InputValidationError, match="parallel edge"):
            BipartiteGraph(("a",), ("1",), (("a", "1"), ("a", "1")))

    def test_missing_weights_rejected(self):
        with pytest.raises(InputValidationError, match="weights missing"):
            BipartiteGraph(
                ("a", "b"), ("1",), (("a", "1"), ("b", "1")),
                {("a", "1"): Fraction(1)},
            )
