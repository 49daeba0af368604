import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from oracles import coinflip_run_lengths, mc_mean_and_se
from ringrumor import (
    BlockingProfile,
    GraphParams,
    NoRootError,
    ScanLimitExceeded,
    alpha,
    blocked_cluster,
    build,
    classify_blocking,
    critical_c,
    expected_blocked_cluster_size,
    expected_run_length,
    subcritical_mean,
    supercritical_mean,
)


def bernoulli_3sigma(p, n):
    return 3 * math.sqrt(p * (1 - p) / n)


class TestClassifyBlocking:
    def test_pure_ring_k1(self):
        graph = build(GraphParams(100_000, 1, 0.0), rng=1, method="sparse")
        profile = classify_blocking(graph, rng=2)
        assert abs(profile.is_rbv.mean() - 0.5) < bernoulli_3sigma(0.5, graph.n)
        assert abs(profile.is_lbv.mean() - 0.5) < bernoulli_3sigma(0.5, graph.n)

    def test_pure_ring_k2(self):
        graph = build(GraphParams(100_000, 2, 0.0), rng=3, method="sparse")
        profile = classify_blocking(graph, rng=4)
        assert abs(profile.is_rbv.mean() - 0.25) < bernoulli_3sigma(0.25, graph.n)

    def test_rbv_fraction_approaches_alpha(self):
        graph = build(GraphParams(100_000, 1, 1.0), rng=5, method="sparse")
        profile = classify_blocking(graph, rng=6)
        a = alpha(1, 1.0)
        assert abs(profile.is_rbv.mean() - a) < bernoulli_3sigma(a, graph.n)

    def test_flags_mutually_exclusive(self):
        graph = build(GraphParams(5000, 2, 1.5), rng=7)
        profile = classify_blocking(graph, rng=8)
        assert not np.any(profile.is_lbv & profile.is_rbv)

    def test_deterministic(self):
        graph = build(GraphParams(1000, 1, 1.0), rng=9)
        p1 = classify_blocking(graph, rng=10)
        p2 = classify_blocking(graph, rng=10)
        assert np.array_equal(p1.is_lbv, p2.is_lbv)
        assert np.array_equal(p1.is_rbv, p2.is_rbv)


def manual_profile(n, k, lbv_at=(), rbv_at=()):
    lbv = np.zeros(n, dtype=bool)
    rbv = np.zeros(n, dtype=bool)
    lbv[list(lbv_at)] = True
    rbv[list(rbv_at)] = True
    return BlockingProfile(k, lbv, rbv)


class TestBlockedCluster:
    def test_minimal_cluster(self):
        # v-1..v-k all lbv and v+1..v+k all rbv -> both run lengths equal k
        n, k, v = 30, 2, 10
        profile = manual_profile(n, k, lbv_at=[v - 1, v - 2], rbv_at=[v + 1, v + 2])
        cluster = blocked_cluster(profile, v)
        assert cluster.j_minus == k
        assert cluster.j_plus == k
        assert cluster.size == 2 * k + 1
        assert set(cluster.interval(n)) == set(range(v - k, v + k + 1))

    def test_run_must_be_consecutive(self):
        n, k, v = 40, 2, 20
        profile = manual_profile(
            n, k,
            lbv_at=[v - 1, v - 3, v - 6, v - 7],
            rbv_at=[v + 2, v + 4, v + 5],
        )
        cluster = blocked_cluster(profile, v, scan_limit=15)
        assert cluster.j_minus == 7   # first lbv pair is (v-7, v-6); far end at 7
        assert cluster.j_plus == 5    # first rbv pair is (v+4, v+5); far end at 5

    def test_scan_limit_exceeded(self):
        profile = manual_profile(50, 1)
        with pytest.raises(ScanLimitExceeded):
            blocked_cluster(profile, 0, scan_limit=20)

    def test_mean_run_length_pure_ring(self):
        # k=1, c=0: run length is geometric with success prob 1/2, mean 2
        graph = build(GraphParams(100_000, 1, 0.0), rng=11, method="sparse")
        profile = classify_blocking(graph, rng=12)
        centers = np.random.default_rng(13).choice(graph.n, 10_000, replace=False)
        js = np.array([blocked_cluster(profile, int(v)).j_plus for v in centers])
        mean, se = mc_mean_and_se(js)
        assert abs(mean - 2.0) < 3 * se

    def test_run_length_law_matches_coinflip_oracle(self):
        # k=1, c=1: KS distance against the X_k oracle below 0.02
        graph = build(GraphParams(100_000, 1, 1.0), rng=14, method="sparse")
        profile = classify_blocking(graph, rng=15)
        centers = np.random.default_rng(16).choice(graph.n, 10_000, replace=False)
        js = np.array([blocked_cluster(profile, int(v)).j_plus for v in centers])
        oracle = coinflip_run_lengths(alpha(1, 1.0), 1, 100_000, np.random.default_rng(17))
        assert ks_2samp(js, oracle).statistic < 0.02

    def test_pure_ring_law_is_exactly_x_k(self):
        # k=2 pure ring: compare against the coin-flip oracle at bias 1/4
        graph = build(GraphParams(100_000, 2, 0.0), rng=18, method="sparse")
        profile = classify_blocking(graph, rng=19)
        centers = np.random.default_rng(20).choice(graph.n, 8000, replace=False)
        js = np.array([blocked_cluster(profile, int(v), scan_limit=4000).j_minus
                       for v in centers])
        oracle = coinflip_run_lengths(0.25, 2, 80_000, np.random.default_rng(21))
        assert js.min() >= 2
        assert ks_2samp(js, oracle).statistic < 0.025


class TestExpectedRunLength:
    def test_geometric_case(self):
        assert expected_run_length(0.5, 1) == 2.0

    def test_two_consecutive_heads(self):
        assert expected_run_length(0.5, 2) == 6.0

    def test_deterministic_coin(self):
        for k in (1, 2, 5):
            assert expected_run_length(1.0, k) == float(k)

    def test_domain(self):
        with pytest.raises(ValueError):
            expected_run_length(0.0, 1)
        with pytest.raises(ValueError):
            expected_run_length(1.5, 1)

    @pytest.mark.parametrize("a", [0.1, 0.25, 0.5, 0.9])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_matches_coinflip_oracle(self, a, k):
        rng = np.random.default_rng(int(1000 * a) + k)
        n_samples = 4000 if a >= 0.25 else 2000
        samples = coinflip_run_lengths(a, k, n_samples, rng)
        mean, se = mc_mean_and_se(samples)
        assert abs(expected_run_length(a, k) - mean) < 3 * se


class TestClusterSizeFormula:
    def test_no_shortcut_values(self):
        assert expected_blocked_cluster_size(1, 0.0) == pytest.approx(5.0)
        assert expected_blocked_cluster_size(2, 0.0) == pytest.approx(41.0)

    def test_empirical_cluster_size(self):
        graph = build(GraphParams(100_000, 1, 1.0), rng=22, method="sparse")
        profile = classify_blocking(graph, rng=23)
        centers = np.random.default_rng(24).choice(graph.n, 10_000, replace=False)
        sizes = np.array([blocked_cluster(profile, int(v)).size for v in centers])
        mean, se = mc_mean_and_se(sizes)
        assert abs(mean - expected_blocked_cluster_size(1, 1.0)) < 3 * se


class TestOffspringMeans:
    def test_zero_at_c_zero(self):
        for k in (1, 2, 3):
            assert subcritical_mean(k, 0.0) == 0.0
            assert subcritical_mean(k, 0.0, lemma_variant=True) == 0.0
            assert supercritical_mean(k, 0.0) == 0.0

    def test_small_c_value(self):
        m = subcritical_mean(1, 0.01)
        assert 0.0 < m < 1.0
        assert m == pytest.approx(expected_blocked_cluster_size(1, 0.01) * 0.01)

    def test_lemma_variant_is_larger(self):
        for c in (0.1, 0.5, 1.0):
            assert subcritical_mean(1, c, lemma_variant=True) > subcritical_mean(1, c)

    def test_monotone_in_c(self):
        grid = np.arange(0.0, 5.1, 0.25)
        for fn in (subcritical_mean, supercritical_mean):
            for k in (1, 2):
                values = [fn(k, float(c)) for c in grid]
                assert all(b >= a for a, b in zip(values, values[1:]))

    def test_supercritical_against_monte_carlo(self):
        draws = np.random.default_rng(25).poisson(10.0, size=10_000_000)
        w = (draws + 3.0) ** 2
        values = draws / w + 2.0 * draws * (draws - 1.0) / w
        mean, se = mc_mean_and_se(values)
        assert abs(supercritical_mean(1, 10.0) - mean) < 3 * se


class TestCriticalC:
    def test_subcritical_root(self):
        root = critical_c(subcritical_mean, 1, tol=1e-12)
        assert root > 0
        assert abs(subcritical_mean(1, root) - 1.0) < 1e-6

    def test_root_decreases_with_k(self):
        assert critical_c(subcritical_mean, 2) < critical_c(subcritical_mean, 1)

    def test_supercritical_root(self):
        r_sub = critical_c(subcritical_mean, 1)
        r_sup = critical_c(supercritical_mean, 1, tol=1e-12)
        assert abs(supercritical_mean(1, r_sup) - 1.0) < 1e-6
        assert r_sup > r_sub

    def test_no_root_reported(self):
        with pytest.raises(NoRootError):
            critical_c(lambda k, c: 0.5, 1, c_max=64.0)
