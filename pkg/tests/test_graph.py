import json
import math

import numpy as np
import pytest

from ringrumor import Graph, GraphParams, build, degree_stats, shortcut_probability
from ringrumor.graph import ring_distance


class TestShortcutProbability:
    def test_zero_intensity(self):
        assert shortcut_probability(100, 1, 0) == 0.0

    def test_direct_substitution(self):
        assert shortcut_probability(103, 1, 1) == pytest.approx(0.01)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ValueError):
            shortcut_probability(3, 1, 1)

    def test_probability_at_least_one_rejected(self):
        with pytest.raises(ValueError):
            shortcut_probability(10, 1, 8)

    def test_negative_c_rejected(self):
        with pytest.raises(ValueError):
            shortcut_probability(100, 1, -0.5)


class TestGraphParams:
    def test_derived_p(self):
        params = GraphParams(103, 1, 1.0)
        assert params.p == pytest.approx(0.01)

    def test_complete_ring_accepted_with_zero_p(self):
        # n == 2k+1: the ring is already the complete graph, no shortcut slots
        params = GraphParams(5, 2, 3.0)
        assert params.p == 0.0
        assert params.eligible_pairs == 0

    def test_too_small_n_rejected(self):
        with pytest.raises(ValueError):
            GraphParams(4, 2, 0.0)

    def test_eligible_pair_count(self):
        assert GraphParams(6, 1, 0.0).eligible_pairs == 9
        assert GraphParams(100, 3, 0.0).eligible_pairs == 100 * 93 // 2


class TestBuild:
    def test_complete_graph_when_ring_saturates(self):
        graph = build(GraphParams(5, 2, 7.5), rng=1)
        assert graph.shortcut_count == 0
        for v in range(5):
            assert sorted(graph.neighbors(v)) == sorted(set(range(5)) - {v})

    def test_pure_cycle(self):
        graph = build(GraphParams(100, 1, 0.0), rng=2)
        stats = degree_stats(graph)
        assert stats.mean == 2.0
        assert stats.variance == 0.0
        assert graph.shortcut_count == 0

    def test_mean_degree_matches_2k_plus_c(self):
        # 10 realizations at n=1e4, k=1, c=2: mean degree within 1% of 4
        means = []
        for seed in range(10):
            graph = build(GraphParams(10_000, 1, 2.0), rng=seed)
            means.append(degree_stats(graph).mean)
        assert np.mean(means) == pytest.approx(4.0, rel=0.01)

    @pytest.mark.parametrize("method", ["pairwise", "sparse"])
    def test_determinism(self, method):
        params = GraphParams(300, 2, 1.5)
        g1 = build(params, rng=42, method=method)
        g2 = build(params, rng=42, method=method)
        assert np.array_equal(g1.shortcut_indptr, g2.shortcut_indptr)
        assert np.array_equal(g1.shortcut_indices, g2.shortcut_indices)
        g3 = build(params, rng=43, method=method)
        assert not np.array_equal(g1.shortcut_indices, g3.shortcut_indices)

    def test_entropy_seed_recorded_and_replayable(self):
        params = GraphParams(120, 1, 1.0)
        g1 = build(params)  # no seed given: drawn from entropy, recorded
        assert g1.seed is not None
        g2 = build(params, rng=g1.seed)
        assert np.array_equal(g1.shortcut_indices, g2.shortcut_indices)

    def test_immutable_after_build(self):
        graph = build(GraphParams(50, 1, 1.0), rng=0)
        with pytest.raises(ValueError):
            graph.shortcut_indices[0] = 0


class TestNeighbors:
    def test_ring_k1(self):
        graph = build(GraphParams(6, 1, 0.0), rng=0)
        assert set(graph.neighbors(0)) == {1, 5}

    def test_ring_k2(self):
        graph = build(GraphParams(6, 2, 0.0), rng=0)
        assert set(graph.neighbors(0)) == {1, 2, 4, 5}

    def test_with_injected_shortcut(self):
        text = json.dumps({
            "n": 6, "k": 1, "c": 0.5, "p": 0.5 / 3, "seed": None,
            "shortcuts": [[0, 3]],
        })
        graph = Graph.from_json(text)
        assert set(graph.neighbors(0)) == {1, 5, 3}
        assert set(graph.neighbors(3)) == {2, 4, 0}

    def test_out_of_range(self):
        graph = build(GraphParams(6, 1, 0.0), rng=0)
        with pytest.raises(IndexError):
            graph.neighbors(6)
        with pytest.raises(IndexError):
            graph.neighbors(-1)

    def test_never_contains_self_or_duplicates(self):
        graph = build(GraphParams(40, 2, 2.0), rng=7)
        for v in range(40):
            nbrs = graph.neighbors(v)
            assert v not in nbrs
            assert len(np.unique(nbrs)) == len(nbrs)


class TestDegreeStats:
    def test_pure_ring_k3(self):
        stats = degree_stats(build(GraphParams(100, 3, 0.0), rng=0))
        assert stats.mean == 6.0
        assert stats.variance == 0.0
        assert stats.shortcut_histogram.tolist() == [100]

    def test_shortcut_degree_mean_is_binomial_mean(self):
        # shortcut degree ~ Binomial(n-2k-1, p) with mean c
        graph = build(GraphParams(10_000, 1, 2.0), rng=11)
        sc = graph.shortcut_degrees()
        se = sc.std(ddof=1) / math.sqrt(sc.size)
        assert abs(sc.mean() - 2.0) < 3 * se

    def test_total_degree_mean(self):
        graph = build(GraphParams(10_000, 2, 1.0), rng=12)
        total = graph.shortcut_degrees() + 2 * graph.k
        se = total.std(ddof=1) / math.sqrt(total.size)
        assert abs(total.mean() - 5.0) < 3 * se


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("method", ["pairwise", "sparse"])
def test_structural_invariants(seed, method):
    params = GraphParams(120, 2, 1.5)
    graph = build(params, rng=seed, method=method)
    n, k = params.n, params.k
    # edge symmetry and no shortcut on a local pair
    for v in range(n):
        for u in graph.shortcut_neighbors(v):
            assert ring_distance(v, int(u), n) > k
            assert v in graph.shortcut_neighbors(int(u))
    # local edge count is exactly nk
    local_total = sum(len(graph.local_neighbors(v)) for v in range(n))
    assert local_total == 2 * n * k
    # per-vertex shortcut adjacency is sorted and self-free
    for v in range(n):
        row = graph.shortcut_neighbors(v)
        assert np.all(np.diff(row) > 0)
        assert v not in row


@pytest.mark.parametrize("method", ["pairwise", "sparse"])
def test_shortcut_count_mean(method):
    # empirical mean count within 4 SE of n(n-2k-1)p/2
    params = GraphParams(500, 1, 2.0)
    expected = params.eligible_pairs * params.p
    counts = np.array([
        build(params, rng=seed, method=method).shortcut_count for seed in range(40)
    ])
    se = counts.std(ddof=1) / math.sqrt(counts.size)
    assert abs(counts.mean() - expected) < 4 * se


def test_samplers_agree_in_law():
    # same shortcut-count and degree statistics from both sampling methods
    params = GraphParams(60, 2, 1.5)
    reps = 400
    counts = {"pairwise": [], "sparse": []}
    degree_hist = {"pairwise": np.zeros(30), "sparse": np.zeros(30)}
    for method in counts:
        for seed in range(reps):
            g = build(params, rng=seed + 10_000, method=method)
            counts[method].append(g.shortcut_count)
            degree_hist[method] += np.bincount(g.shortcut_degrees(), minlength=30)
    a = np.array(counts["pairwise"], dtype=float)
    b = np.array(counts["sparse"], dtype=float)
    combined_se = math.hypot(a.std(ddof=1), b.std(ddof=1)) / math.sqrt(reps)
    assert abs(a.mean() - b.mean()) < 4 * combined_se
    pa = degree_hist["pairwise"] / degree_hist["pairwise"].sum()
    pb = degree_hist["sparse"] / degree_hist["sparse"].sum()
    assert 0.5 * np.abs(pa - pb).sum() < 0.05  # total variation


class TestSerialization:
    def test_round_trip(self):
        graph = build(GraphParams(80, 2, 1.0), rng=5)
        clone = Graph.from_json(graph.to_json())
        assert clone.params == graph.params
        assert clone.seed == 5
        assert np.array_equal(clone.shortcut_indptr, graph.shortcut_indptr)
        assert np.array_equal(clone.shortcut_indices, graph.shortcut_indices)

    def test_schema(self):
        graph = build(GraphParams(80, 2, 1.0), rng=5)
        obj = json.loads(graph.to_json())
        assert list(obj) == ["n", "k", "c", "p", "seed", "shortcuts"]
        pairs = [tuple(p) for p in obj["shortcuts"]]
        assert all(i < j for i, j in pairs)
        assert pairs == sorted(pairs)

    def test_rejects_local_pair(self):
        text = json.dumps({
            "n": 6, "k": 1, "c": 0.5, "p": 0.5 / 3, "seed": None,
            "shortcuts": [[0, 1]],
        })
        with pytest.raises(ValueError):
            Graph.from_json(text)

    def test_rejects_duplicate_pair(self):
        text = json.dumps({
            "n": 6, "k": 1, "c": 0.5, "p": 0.5 / 3, "seed": None,
            "shortcuts": [[0, 3], [0, 3]],
        })
        with pytest.raises(ValueError):
            Graph.from_json(text)
