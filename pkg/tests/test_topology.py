import numpy as np
import pytest

from ach.topology import (Graph, component_labels, graph_from_json,
                          graph_to_json, neighbors, random_regular_graph,
                          reverse_index, square_lattice)


def _rng(*key):
    return np.random.default_rng(np.random.SeedSequence(list(key)))


def check_simple_symmetric(g: Graph):
    n, deg = g.adjacency.shape
    assert n == g.n
    for i in range(n):
        row = g.adjacency[i]
        assert i not in row, f"self-loop at {i}"
        assert len(set(row.tolist())) == deg, f"duplicate neighbor at {i}"
        for j in row:
            assert i in g.adjacency[j], f"asymmetric edge {i}-{j}"


class TestLattice:
    def test_node0_neighbors_l5(self):
        g = square_lattice(5)
        assert sorted(neighbors(g, 0).tolist()) == [1, 4, 5, 20]

    def test_smallest_valid_lattice(self):
        g = square_lattice(3)
        check_simple_symmetric(g)
        assert g.n == 9

    def test_l30_degree_histogram(self):
        g = square_lattice(30)
        assert g.n == 900
        assert g.adjacency.shape == (900, 4)

    def test_small_l_rejected(self):
        for bad in (2, 1, 0, -5):
            with pytest.raises(ValueError):
                square_lattice(bad)

    def test_symmetry_and_simplicity(self):
        for l in (3, 5, 8):
            check_simple_symmetric(square_lattice(l))

    def test_wraparound_interior_and_edge(self):
        g = square_lattice(4)
        # interior-style node 5 = (1,1): up 1, down 9, left 4, right 6
        assert sorted(neighbors(g, 5).tolist()) == [1, 4, 6, 9]
        # corner 15 = (3,3): up 11, down 3 (wrap), left 14, right 12 (wrap)
        assert sorted(neighbors(g, 15).tolist()) == [3, 11, 12, 14]


class TestRandomRegular:
    def test_forced_k4(self):
        for seed in range(5):
            g = random_regular_graph(4, 3, _rng(1, seed))
            check_simple_symmetric(g)
            for i in range(4):
                assert sorted(neighbors(g, i).tolist()) == \
                    sorted(set(range(4)) - {i})

    def test_degree_histogram_n100_c4(self):
        g = random_regular_graph(100, 4, _rng(1))
        check_simple_symmetric(g)
        assert g.adjacency.shape == (100, 4)

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            random_regular_graph(5, 3, _rng(0))  # N*C odd
        with pytest.raises(ValueError):
            random_regular_graph(4, 4, _rng(0))  # C >= N
        with pytest.raises(ValueError):
            random_regular_graph(4, 0, _rng(0))  # C < 1

    def test_restart_limit_is_distinct_failure(self):
        with pytest.raises(RuntimeError, match="restart"):
            random_regular_graph(4, 3, _rng(0), max_restarts=0)

    def test_seeded_determinism(self):
        a = random_regular_graph(60, 5, _rng(7, 7))
        b = random_regular_graph(60, 5, _rng(7, 7))
        assert np.array_equal(a.adjacency, b.adjacency)
        c = random_regular_graph(60, 5, _rng(7, 8))
        assert not np.array_equal(a.adjacency, c.adjacency)

    def test_various_connectivities(self):
        for c in range(2, 11):
            g = random_regular_graph(100, c, _rng(2, c))
            check_simple_symmetric(g)
            assert g.degree == c


class TestNeighbors:
    def test_bounds(self):
        g = square_lattice(5)
        with pytest.raises(IndexError):
            neighbors(g, 25)
        with pytest.raises(IndexError):
            neighbors(g, -1)

    def test_no_self(self):
        g = random_regular_graph(20, 3, _rng(3))
        for i in range(g.n):
            assert i not in neighbors(g, i)


class TestDerived:
    def test_reverse_index(self):
        for g in (square_lattice(5), random_regular_graph(30, 4, _rng(4))):
            rev = reverse_index(g)
            for i in range(g.n):
                for b in range(g.degree):
                    assert g.adjacency[g.adjacency[i, b], rev[i, b]] == i

    def test_lattice_single_component(self):
        labels = component_labels(square_lattice(6))
        assert np.unique(labels).size == 1

    def test_two_triangles(self):
        adj = np.array([[1, 2], [0, 2], [0, 1],
                        [4, 5], [3, 5], [3, 4]], dtype=np.int32)
        g = Graph(6, adj, "test", {})
        labels = component_labels(g)
        assert np.unique(labels).size == 2
        assert len(set(labels[:3])) == 1 and len(set(labels[3:])) == 1

    def test_rrg_c2_components_counted(self):
        # 2-regular graphs are unions of cycles, frequently more than one
        counts = [np.unique(component_labels(
            random_regular_graph(100, 2, _rng(5, s)))).size
            for s in range(20)]
        assert all(c >= 1 for c in counts)
        assert max(counts) > 1  # disconnected samples occur and are kept

    def test_json_roundtrip(self):
        g = random_regular_graph(12, 3, _rng(6))
        g2 = graph_from_json(graph_to_json(g))
        assert g2.n == g.n and g2.kind == g.kind
        assert np.array_equal(g2.adjacency, g.adjacency)
