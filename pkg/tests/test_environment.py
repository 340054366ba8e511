import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uclbandit.environment import (
    EnvError,
    Environment,
    Graph,
    NoiseModel,
    bfs_distances,
    complete_graph,
    distance_costs,
    expected_max_costs,
    grid_graph,
    landscape,
    line_graph,
    read_edge_list,
    read_means,
    sample_reward,
    shortest_paths,
)


class TestLandscapes:
    @pytest.mark.parametrize("which", ["A", "B"])
    @pytest.mark.parametrize("shape", ["profile10", "grid10x10"])
    def test_mean_and_max(self, which, shape):
        env = landscape(which, shape)
        assert env.n_arms == (10 if shape == "profile10" else 100)
        assert abs(env.means.mean() - 30.0) <= 0.5
        assert env.means.max() == pytest.approx(60.0, abs=1.0)

    def test_a_peak_and_concavity(self):
        m = landscape("A", "profile10").means
        assert int(np.argmax(m)) + 1 == 6
        assert np.sum(m == m.max()) == 1
        assert np.all(np.diff(m, 2) <= 0)

    def test_b_local_maxima(self):
        m = landscape("B", "profile10").means
        assert int(np.argmax(m)) + 1 == 10
        assert m[0] > m[1]
        assert m[0] < m[9]
        interior = [i for i in range(1, 9) if m[i] > m[i - 1] and m[i] > m[i + 1]]
        assert interior == []

    def test_grid_flat_along_y(self):
        env = landscape("B", "grid10x10")
        grid = env.means.reshape(10, 10)  # rows are y, columns are x
        assert np.all(grid == grid[0])
        np.testing.assert_array_equal(grid[0], landscape("B", "profile10").means)

    def test_pure(self):
        np.testing.assert_array_equal(landscape("A").means, landscape("A").means)

    def test_unknown(self):
        with pytest.raises(EnvError):
            landscape("C")

    def test_means_read_only(self):
        env = landscape("A", "profile10")
        with pytest.raises(ValueError):
            env.means[0] = 1.0


class TestNoise:
    def test_zero_width_is_exact(self):
        env = Environment([1.5, 2.5], NoiseModel.uniform_integer(0))
        rng = np.random.default_rng(0)
        assert [sample_reward(env, 1, rng) for _ in range(5)] == [2.5] * 5

    def test_gaussian_clt(self):
        env = Environment([3.0, 7.0], NoiseModel.gaussian(1.0))
        rng = np.random.default_rng(1)
        draws = [sample_reward(env, 1, rng) for _ in range(100_000)]
        assert abs(np.mean(draws) - 7.0) < 0.02

    def test_uniform_integer_support(self):
        env = Environment([10.0], NoiseModel.uniform_integer(5))
        rng = np.random.default_rng(2)
        d = np.array([sample_reward(env, 0, rng) for _ in range(5000)]) - 10.0
        assert set(d.astype(int)) == set(range(-5, 6))
        assert np.all(d == np.round(d))

    def test_uniform_integer_variance(self):
        assert NoiseModel.uniform_integer(5).variance == 10.0
        assert NoiseModel.gaussian(2.5).variance == 6.25

    def test_one_draw_per_call(self):
        env = Environment([0.0, 0.0], NoiseModel.gaussian(1.0))
        a = np.random.default_rng(3)
        b = np.random.default_rng(3)
        r = [sample_reward(env, i % 2, a) for i in range(10)]
        np.testing.assert_array_equal(r, b.standard_normal(10))

    def test_arm_range(self):
        env = Environment([0.0, 1.0])
        with pytest.raises(IndexError):
            sample_reward(env, 2, np.random.default_rng())

    @pytest.mark.parametrize("kind,scale", [("gaussian", 0.0), ("uniform_integer", -1), ("uniform_integer", 1.5),
                                            ("laplace", 1.0)])
    def test_invalid(self, kind, scale):
        with pytest.raises(EnvError):
            NoiseModel(kind, scale)


class TestEnvironmentValidation:
    def test_empty(self):
        with pytest.raises(EnvError):
            Environment([])

    def test_cost_diagonal(self):
        with pytest.raises(EnvError):
            Environment([0.0, 1.0], costs=[[1.0, 0.0], [0.0, 0.0]])

    def test_negative_cost(self):
        with pytest.raises(EnvError):
            Environment([0.0, 1.0], costs=[[0.0, -1.0], [1.0, 0.0]])

    def test_disconnected_graph(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(EnvError, match="unreachable"):
            Environment([0.0, 1.0, 2.0], graph=g)

    def test_gaps(self):
        env = Environment([1.0, 4.0, 2.0])
        assert env.best_arm == 1
        np.testing.assert_array_equal(env.gaps, [3.0, 0.0, 2.0])


class TestCosts:
    def test_line(self):
        c = distance_costs(np.arange(1, 11))
        assert c[0, 9] == 9.0
        assert np.all(np.diag(c) == 0)
        np.testing.assert_array_equal(c, c.T)

    def test_grid_euclidean_and_manhattan(self):
        env = landscape("A", costs="euclidean")
        assert env.costs[0, 11] == pytest.approx(np.sqrt(2))
        man = landscape("A", costs="manhattan")
        assert man.costs[0, 11] == 2.0
        assert man.costs[0, 99] == 18.0

    def test_expected_max(self):
        c = distance_costs(np.arange(1, 6))
        np.testing.assert_array_equal(expected_max_costs(c), [4, 3, 2, 3, 4])


def _all_shortest_walks(graph, i, j):
    """Brute force: every simple path from i to j of minimum hop count."""
    best = None
    out = []
    queue = deque([(i,)])
    while queue:
        path = queue.popleft()
        if best is not None and len(path) > best:
            break
        u = path[-1]
        if u == j:
            best = len(path)
            out.append(path)
            continue
        for v in graph.neighbors(u):
            if v not in path:
                queue.append(path + (v,))
    return out


class TestShortestPaths:
    def test_line_123(self):
        sp = shortest_paths(line_graph(3))
        assert sp.intermediaries(0, 2) == (1,)
        assert sp.length(0, 2) == 1

    def test_self_and_neighbours_empty(self):
        g = grid_graph(3, 3)
        sp = shortest_paths(g)
        for i in range(g.n):
            assert sp.intermediaries(i, i) == ()
            for j in g.neighbors(i):
                assert sp.intermediaries(i, j) == ()

    def test_disconnected_names_pair(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(EnvError, match="arm 3 unreachable from arm 1"):
            shortest_paths(g)

    @pytest.mark.parametrize("graph", [line_graph(6), grid_graph(3, 4), complete_graph(5), grid_graph(1, 1)],
                             ids=["line", "grid", "complete", "single"])
    def test_matches_brute_force_lexicographic(self, graph):
        sp = shortest_paths(graph)
        for i, j in itertools.product(range(graph.n), repeat=2):
            walks = _all_shortest_walks(graph, i, j)
            best = min(walks)
            if i != j:
                assert (i,) + sp.intermediaries(i, j) + (j,) == best
            assert sp.hops[i, j] == len(best) - 1

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 9), st.data())
    def test_hop_identity_random_graphs(self, n, data):
        # random spanning tree plus extra edges keeps the graph connected
        edges = [(k, data.draw(st.integers(0, k - 1))) for k in range(1, n)]
        extra = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=10))
        g = Graph.from_edges(n, edges + extra)
        sp = shortest_paths(g)
        for i in range(n):
            d = bfs_distances(g, i)
            for j in range(n):
                if i != j:
                    assert 1 + sp.length(i, j) == d[j]
                    walk = (i,) + sp.intermediaries(i, j) + (j,)
                    assert all(g.has_edge(a, b) for a, b in zip(walk, walk[1:]))

    def test_flat_layout(self):
        sp = shortest_paths(line_graph(4))
        offsets, nodes = sp.flat()
        assert offsets.size == 17
        pair = 0 * 4 + 3
        np.testing.assert_array_equal(nodes[offsets[pair]:offsets[pair + 1]], [1, 2])


class TestFiles:
    def test_edge_list_one_based(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("# line\n1 2\n2 3  # trailing\n\n")
        g = read_edge_list(p, 3)
        assert g.edges() == [(0, 1), (1, 2)]

    def test_edge_list_bad_line(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("1 2 3\n")
        with pytest.raises(EnvError, match=":1:"):
            read_edge_list(p, 3)

    def test_edge_out_of_range(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("1 5\n")
        with pytest.raises(EnvError):
            read_edge_list(p, 3)

    def test_means(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("1.5\n# c\n2\n")
        np.testing.assert_array_equal(read_means(p), [1.5, 2.0])
        p.write_text("x\n")
        with pytest.raises(EnvError):
            read_means(p)
