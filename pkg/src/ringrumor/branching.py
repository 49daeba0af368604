"""Branching-process quantities behind the localization/propagation bounds.

A vertex whose first transmission choice points at its immediate ring
neighbour blocks local spread in that direction: it is a right blocking
vertex (rbv) when the first choice is v-1 and a left blocking vertex (lbv)
when it is v+1. Scanning outward from a centre v for the first window of k
consecutive blocking vertices on each side yields the blocked cluster
v + [-J_minus, J_plus]; as n grows, each run length converges in law to
X_k, the number of alpha-biased coin flips needed to see k consecutive
heads, whose mean is (alpha^-k - 1)/(1 - alpha).

Two offspring means bracket the process: the dominating mean
m(k, c) = E|B_0| * c (rumour dies out locally while m < 1) and the
dominated two-attempt mean
mtilde(k, c) = E[X/(X+2k+1)^2] + 2 E[X(X-1)/(X+2k+1)^2], X ~ Poisson(c)
(major outbreaks once mtilde > 1). Their unit-mean roots in c are
theoretical bounds, not sharp thresholds, and are reported separately from
the empirical collapse estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .meanfield import alpha, poisson_expectation
from .rand import as_generator

__all__ = [
    "BlockedCluster",
    "BlockingProfile",
    "NoRootError",
    "ScanLimitExceeded",
    "blocked_cluster",
    "classify_blocking",
    "critical_c",
    "expected_blocked_cluster_size",
    "expected_run_length",
    "subcritical_mean",
    "supercritical_mean",
]


class ScanLimitExceeded(RuntimeError):
    """No window of k consecutive blocking vertices within the scan limit."""


class NoRootError(RuntimeError):
    """The offspring mean never reaches 1 below the configured ceiling."""


@dataclass(frozen=True)
class BlockingProfile:
    """Per-vertex blocking flags from one sample of first neighbour choices."""

    k: int
    is_lbv: np.ndarray
    is_rbv: np.ndarray

    @property
    def n(self) -> int:
        return self.is_lbv.size


def classify_blocking(graph: Graph, rng=None) -> BlockingProfile:
    """Sample every vertex's first uniform neighbour choice and flag blockers.

    A vertex is lbv when the choice lands on v+1 and rbv when it lands on
    v-1; with the neighbour order (v+1..v+k, v-1..v-k, shortcuts) those are
    choice indices 0 and k.
    """
    rng = as_generator(rng)
    degrees = graph.shortcut_degrees() + 2 * graph.k
    first_choice = rng.integers(0, degrees)
    return BlockingProfile(graph.k, first_choice == 0, first_choice == graph.k)


@dataclass(frozen=True)
class BlockedCluster:
    center: int
    j_minus: int
    j_plus: int

    @property
    def size(self) -> int:
        return 1 + self.j_minus + self.j_plus

    def interval(self, n: int) -> np.ndarray:
        """Vertices center + [-j_minus, j_plus] mod n."""
        return (self.center + np.arange(-self.j_minus, self.j_plus + 1)) % n


def blocked_cluster(profile: BlockingProfile, v: int, scan_limit: int | None = None) -> BlockedCluster:
    """Blocked cluster around v: scan outward from v on each side for the
    first run of k consecutive blocking vertices (lbv leftward, rbv
    rightward); the run length is the distance of the run's far end.

    Treating the scanned flags as coin flips, each side is exactly the
    flips-until-k-consecutive-heads variable, truncated at the scan limit.
    The default limit ceil(n^0.45) reflects that run lengths stay below any
    n^beta, beta < 1/2, with high probability; an exhausted scan raises
    ``ScanLimitExceeded`` rather than returning a truncated cluster.
    """
    n, k = profile.n, profile.k
    if not 0 <= v < n:
        raise IndexError(f"vertex {v} out of range [0, {n})")
    if scan_limit is None:
        scan_limit = math.ceil(n**0.45)
    if scan_limit <= 0:
        raise ValueError("scan_limit must be positive")
    j_minus = _first_run(profile.is_lbv, v, -1, k, n, scan_limit)
    j_plus = _first_run(profile.is_rbv, v, +1, k, n, scan_limit)
    return BlockedCluster(v, j_minus, j_plus)


def _first_run(flags: np.ndarray, v: int, direction: int, k: int, n: int, scan_limit: int) -> int:
    streak = 0  # consecutive flagged vertices ending at the current probe
    for i in range(1, scan_limit + 1):
        if flags[(v + direction * i) % n]:
            streak += 1
            if streak >= k:
                return i
        else:
            streak = 0
    raise ScanLimitExceeded(
        f"no {k} consecutive blocking vertices within {scan_limit} of vertex {v}"
    )


def expected_run_length(alpha_value: float, k: int) -> float:
    """Mean of X_k: flips of an alpha-coin until k consecutive heads.

    Equals (alpha^-k - 1)/(1 - alpha), continuously extended to k at
    alpha = 1.
    """
    if not 0.0 < alpha_value <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha_value}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if alpha_value == 1.0:
        return float(k)
    return (alpha_value**-k - 1.0) / (1.0 - alpha_value)


def expected_blocked_cluster_size(k: int, c: float, tol: float = 1e-14) -> float:
    """Limit mean of |B_v|: 1 + 2 E[X_k] at the (k, c) coin bias."""
    return 1.0 + 2.0 * expected_run_length(alpha(k, c, tol), k)


def subcritical_mean(k: int, c: float, lemma_variant: bool = False, tol: float = 1e-14) -> float:
    """Mean offspring m(k, c) of the dominating branching process.

    The default is E|B_0| * c, i.e. the (alpha^-k - 1) form; the
    ``lemma_variant`` flag computes the (alpha^-k + 1) variant instead.
    """
    if c < 0:
        raise ValueError(f"c must be >= 0, got {c}")
    if lemma_variant:
        a = alpha(k, c, tol)
        return (1.0 + 2.0 * (a**-k + 1.0) / (1.0 - a)) * c
    return expected_blocked_cluster_size(k, c, tol) * c


def supercritical_mean(k: int, c: float, tol: float = 1e-14) -> float:
    """Mean offspring mtilde(k, c) of the dominated two-attempt process."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = 2 * k + 1

    def both_terms(x):
        w = (x + m) ** 2
        return x / w + 2.0 * x * (x - 1.0) / w

    # x/(x+m)^2 <= 1/(4m) and x(x-1)/(x+m)^2 < 1, so 3 bounds the summand
    return poisson_expectation(both_terms, c, tol, f_bound=3.0)


def critical_c(mean_fn, k: int, tol: float = 1e-9, c_max: float = 1e6) -> float:
    """Root in c of mean_fn(k, c) = 1, by bisection.

    ``mean_fn`` is one of the offspring means (continuous, non-decreasing,
    zero at c = 0). The upper bracket doubles from 1 until the mean exceeds
    1; staying below 1 all the way to ``c_max`` raises ``NoRootError``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    hi = 1.0
    while mean_fn(k, hi) <= 1.0:
        hi *= 2.0
        if hi > c_max:
            raise NoRootError(f"mean_fn(k={k}, c) stays below 1 up to c={c_max:g}")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mean_fn(k, mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
