import itertools

import networkx as nx
import numpy as np
import pytest

from nbspec import oracles
from nbspec.generators import complete_graph, cycle_graph, path_graph, pinwheel_graph, random_tree, star_graph
from nbspec.graph import Graph
from nbspec.operators import build_operators


class TestWalks:
    def test_c3_k3_identity(self):
        t = oracles.count_nb_walks_bruteforce(cycle_graph(3), 3)
        assert np.array_equal(t.as_array().astype(int), np.eye(6, dtype=int))

    def test_p3_k2_zero(self):
        t = oracles.count_nb_walks_bruteforce(path_graph(3), 2)
        assert not any(any(r) for r in t.counts)

    def test_k4_k2_row_sums(self):
        t = oracles.count_nb_walks_bruteforce(complete_graph(4), 2)
        assert all(sum(r) == 4 for r in t.counts)

    def test_k1_equals_B(self):
        g = pinwheel_graph(2, 4)
        t = oracles.count_nb_walks_bruteforce(g, 1)
        assert np.array_equal(t.as_array().astype(float), build_operators(g).B)

    def test_c4_k4(self):
        assert oracles.verify_Bk_equals_walkcounts(cycle_graph(4), 4).passed
        assert np.array_equal(oracles.count_nb_walks_bruteforce(cycle_graph(4), 4).as_array().astype(int), np.eye(8))

    def test_pinwheel_k3(self):
        assert oracles.verify_Bk_equals_walkcounts(pinwheel_graph(2, 3), 3).passed

    def test_tree_k6_zero(self):
        g = random_tree(6, 4)
        assert oracles.verify_Bk_equals_walkcounts(g, 6).passed
        assert not any(any(r) for r in oracles.count_nb_walks_bruteforce(g, 6).counts)

    def test_budget(self):
        with pytest.raises(oracles.BudgetError):
            oracles.count_nb_walks_bruteforce(cycle_graph(3), 9)
        with pytest.raises(oracles.BudgetError):
            oracles.count_nb_walks_bruteforce(complete_graph(7), 2)
        with pytest.raises(oracles.BudgetError):
            oracles.count_nb_walks_bruteforce(cycle_graph(3), 0)

    def test_integer_power_exact(self):
        B = build_operators(complete_graph(6)).B
        P = oracles.integer_matrix_power(B, 6)
        assert all(isinstance(x, int) for x in P[0])
        assert np.array_equal(np.array(P, dtype=np.int64), np.linalg.matrix_power(B.astype(np.int64), 6))


class TestCharpoly:
    def test_rooted_p4(self):
        C, edges = oracles.rooted_tree_edge_matrix(path_graph(4))
        assert len(edges) == 3 and all(v < u for u, v in edges)
        assert oracles.charpoly_spotcheck(C, [0.5, 2, -1], exponent=3).passed

    def test_b_p3(self):
        rep = oracles.charpoly_spotcheck(build_operators(path_graph(3)).B, [2])
        assert rep.passed and rep.metadata["determinants"][0] == pytest.approx(16)

    def test_b_star(self):
        rep = oracles.charpoly_spotcheck(build_operators(star_graph(3)).B, [-1])
        assert rep.passed and rep.metadata["determinants"][0] == pytest.approx(1)

    def test_detects_wrong_exponent(self):
        assert oracles.charpoly_spotcheck(build_operators(path_graph(3)).B, [2], exponent=3).failed

    def test_all_trees_up_to_8(self):
        count = 0
        for n in range(2, 9):
            for t in nx.nonisomorphic_trees(n):
                g = Graph(n, list(t.edges))
                C, _ = oracles.rooted_tree_edge_matrix(g)
                assert oracles.charpoly_spotcheck(C, [0.5, 2.0, -1.0]).passed
                count += 1
        assert count == 1 + 1 + 2 + 3 + 6 + 11 + 23

    def test_rooted_rejects_cycle(self):
        with pytest.raises(ValueError):
            oracles.rooted_tree_edge_matrix(cycle_graph(3))


class TestSweep:
    def test_counts(self):
        assert sum(1 for _ in oracles.exhaustive_graph_sweep(3)) == 8
        assert sum(1 for _ in oracles.exhaustive_graph_sweep(3, up_to_isomorphism=True)) == 4
        assert sum(1 for _ in oracles.exhaustive_graph_sweep(4)) == 64
        assert sum(1 for _ in oracles.exhaustive_graph_sweep(5, connected=True)) == 728

    def test_connected_labeled_count_by_brute_force(self):
        count = 0
        pairs = list(itertools.combinations(range(5), 2))
        for mask in range(1 << 10):
            h = nx.Graph()
            h.add_nodes_from(range(5))
            h.add_edges_from(p for b, p in enumerate(pairs) if mask >> b & 1)
            count += nx.is_connected(h)
        assert count == 728

    def test_iso_classes_match_atlas(self):
        atlas = nx.graph_atlas_g()
        for n in range(1, 8):
            assert len(oracles.isomorphism_classes(n)) == sum(1 for h in atlas if h.number_of_nodes() == n)

    def test_iso_classes_pairwise_distinct(self):
        graphs = [nx.Graph(list(g.edges)) for g in oracles.isomorphism_classes(5)]
        for h, g in zip(graphs, oracles.isomorphism_classes(5)):
            h.add_nodes_from(range(g.n))
        for a, b in itertools.combinations(graphs, 2):
            assert not nx.is_isomorphic(a, b)

    def test_canonical_code_invariant(self):
        rng = np.random.default_rng(0)
        for g in oracles.random_corpus(20, 2, 7, seed=3, connected=False):
            perm = rng.permutation(g.n)
            h = Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])
            assert oracles.canonical_code(g) == oracles.canonical_code(h)

    def test_deterministic(self):
        a = [g.edges for g in oracles.exhaustive_graph_sweep(5, n_min=1, up_to_isomorphism=True)]
        b = [g.edges for g in oracles.exhaustive_graph_sweep(5, n_min=1, up_to_isomorphism=True)]
        assert a == b

    def test_budget(self):
        with pytest.raises(oracles.BudgetError):
            next(oracles.exhaustive_graph_sweep(8))
