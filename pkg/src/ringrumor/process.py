"""Exact Maki-Thompson rumour dynamics on a small-world ring graph.

States are 0 = ignorant, 1 = spreader, 2 = stifler. One vertex starts as the
sole spreader. Each step draws a spreader uniformly at random, then a target
uniformly from that spreader's full neighbour set (local and shortcut). An
ignorant target turns spreader; any other target turns the initiating
spreader into a stifler. The process absorbs at the first step with no
spreaders left, after tau = 2*R - 1 steps where R is the final stifler
count.

Three entry points sample the same law:

* ``run``        - readable single-run reference, optionally recording the
                   full (I, S, R) trajectory;
* ``run_batch``  - jit-compiled batch of independent runs on one shared
                   graph (used by the Monte-Carlo harness);
* ``run_coupled`` - the tandem construction that reveals a vertex's
                   shortcuts the first time it is picked to transmit and
                   completes the graph at absorption, returning both the
                   outcome and a faithful graph sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from numba import njit

from .graph import Graph, GraphParams, _csr_from_pairs
from .rand import as_generator, fresh_seed

__all__ = [
    "NodeState",
    "RunOutcome",
    "run",
    "run_batch",
    "run_coupled",
    "verify_absorption_identity",
]


class NodeState(IntEnum):
    IGNORANT = 0
    SPREADER = 1
    STIFLER = 2


@dataclass(frozen=True)
class RunOutcome:
    """Absorbed state of one run.

    ``trajectory``, when recorded, is an int64 array of shape (tau+1, 3)
    holding (I(t), S(t), R(t)) for t = 0..tau.
    """

    final_removed: int
    final_ignorant: int
    absorption_time: int
    seed_vertex: int
    trajectory: np.ndarray | None = None


def verify_absorption_identity(outcome: RunOutcome) -> bool:
    """True iff the absorption time equals 2*R(tau) - 1."""
    return outcome.absorption_time == 2 * outcome.final_removed - 1


def _draw_seed_vertex(n, seed_vertex, rng):
    if seed_vertex is None:
        return int(rng.integers(0, n))
    v0 = int(seed_vertex)
    if not 0 <= v0 < n:
        raise ValueError(f"seed vertex {v0} out of range [0, {n})")
    return v0


def run(
    graph: Graph,
    seed_vertex: int | None = None,
    rng: int | np.random.Generator | None = None,
    record_trajectory: bool = False,
) -> RunOutcome:
    """Run the dynamics once on a prebuilt graph.

    ``seed_vertex=None`` draws the initial spreader uniformly (the default
    protocol); an explicit vertex pins it.
    """
    rng = as_generator(rng)
    n, k = graph.n, graph.k
    indptr = graph.shortcut_indptr
    indices = graph.shortcut_indices
    v0 = _draw_seed_vertex(n, seed_vertex, rng)

    state = np.zeros(n, dtype=np.uint8)
    state[v0] = 1
    spreaders = [v0]
    n_ignorant = n - 1
    n_removed = 0
    t = 0
    traj = [(n_ignorant, 1, 0)] if record_trajectory else None

    while spreaders:
        si = int(rng.integers(0, len(spreaders)))
        v = spreaders[si]
        lo = int(indptr[v])
        n_short = int(indptr[v + 1]) - lo
        j = int(rng.integers(0, 2 * k + n_short))
        u = _resolve_neighbor(v, j, n, k, lo, indices)
        if state[u] == 0:
            state[u] = 1
            spreaders.append(u)
            n_ignorant -= 1
        else:
            state[v] = 2
            n_removed += 1
            spreaders[si] = spreaders[-1]
            spreaders.pop()
        t += 1
        if record_trajectory:
            traj.append((n_ignorant, len(spreaders), n_removed))

    trajectory = np.array(traj, dtype=np.int64) if record_trajectory else None
    return RunOutcome(n_removed, n_ignorant, t, v0, trajectory)


def _resolve_neighbor(v, j, n, k, lo, indices):
    # neighbour order: v+1..v+k, v-1..v-k, then shortcuts
    if j < k:
        return (v + j + 1) % n
    if j < 2 * k:
        return (v - (j - k) - 1) % n
    return int(indices[lo + (j - 2 * k)])


@njit(cache=True)
def _batch_kernel(n, k, indptr, indices, n_runs, fixed_seed_vertex, rng):
    R = np.empty(n_runs, dtype=np.int64)
    tau = np.empty(n_runs, dtype=np.int64)
    seeds = np.empty(n_runs, dtype=np.int64)
    state = np.empty(n, dtype=np.uint8)
    spreaders = np.empty(n, dtype=np.int64)
    for r in range(n_runs):
        state[:] = 0
        if fixed_seed_vertex >= 0:
            v0 = fixed_seed_vertex
        else:
            v0 = int(rng.random() * n)
        state[v0] = 1
        spreaders[0] = v0
        n_spread = 1
        removed = 0
        t = 0
        while n_spread > 0:
            si = int(rng.random() * n_spread)
            v = spreaders[si]
            lo = indptr[v]
            deg = 2 * k + (indptr[v + 1] - lo)
            j = int(rng.random() * deg)
            if j < k:
                u = v + j + 1
                if u >= n:
                    u -= n
            elif j < 2 * k:
                u = v - (j - k) - 1
                if u < 0:
                    u += n
            else:
                u = indices[lo + (j - 2 * k)]
            if state[u] == 0:
                state[u] = 1
                spreaders[n_spread] = u
                n_spread += 1
            else:
                state[v] = 2
                removed += 1
                n_spread -= 1
                spreaders[si] = spreaders[n_spread]
            t += 1
        R[r] = removed
        tau[r] = t
        seeds[r] = v0
    return R, tau, seeds


def run_batch(
    graph: Graph,
    n_runs: int,
    rng: int | np.random.Generator | None = None,
    seed_vertex: int | None = None,
):
    """n_runs independent runs on one graph; returns (R, tau, seed_vertices).

    Same law as ``run`` but compiled; the graph is shared read-only.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    rng = as_generator(rng)
    if seed_vertex is None:
        fixed = -1
    else:
        fixed = int(seed_vertex)
        if not 0 <= fixed < graph.n:
            raise ValueError(f"seed vertex {fixed} out of range [0, {graph.n})")
    return _batch_kernel(
        graph.n, graph.k, graph.shortcut_indptr, graph.shortcut_indices,
        int(n_runs), fixed, rng,
    )


def run_coupled(
    params: GraphParams,
    seed_vertex: int | None = None,
    rng: int | np.random.Generator | None = None,
    record_trajectory: bool = False,
) -> tuple[RunOutcome, Graph]:
    """Grow the rumour process and the graph in tandem.

    A vertex's shortcut neighbourhood is sampled the first time that vertex
    is picked to transmit: each still-undetermined non-local pair incident to
    it gets its Bernoulli(p) draw then. After absorption the pairs never
    queried are completed in one lexicographic pass, so the returned graph is
    a faithful sample and the outcome has exactly the law of ``run`` on a
    prebuilt graph. Completion scans all remaining pairs; intended for
    moderate n, not for bulk sweeps.
    """
    seed = None
    if not isinstance(rng, np.random.Generator):
        seed = fresh_seed() if rng is None else int(rng)
    rng = as_generator(seed if seed is not None else rng)
    n, k, p = params.n, params.k, params.p
    v0 = _draw_seed_vertex(n, seed_vertex, rng)

    adjacency: list[list[int]] = [[] for _ in range(n)]
    revealed = np.zeros(n, dtype=bool)
    all_vertices = np.arange(n)

    def reveal(v):
        # settle every still-open non-local pair incident to v
        d = (all_vertices - v) % n
        eligible = np.minimum(d, n - d) > k
        candidates = all_vertices[eligible & ~revealed]
        revealed[v] = True
        if p > 0.0 and candidates.size:
            for u in candidates[rng.random(candidates.size) < p]:
                adjacency[v].append(int(u))
                adjacency[int(u)].append(v)

    state = np.zeros(n, dtype=np.uint8)
    state[v0] = 1
    spreaders = [v0]
    n_ignorant = n - 1
    n_removed = 0
    t = 0
    traj = [(n_ignorant, 1, 0)] if record_trajectory else None

    while spreaders:
        si = int(rng.integers(0, len(spreaders)))
        v = spreaders[si]
        if not revealed[v]:
            reveal(v)
        row = adjacency[v]
        j = int(rng.integers(0, 2 * k + len(row)))
        if j < k:
            u = (v + j + 1) % n
        elif j < 2 * k:
            u = (v - (j - k) - 1) % n
        else:
            u = row[j - 2 * k]
        if state[u] == 0:
            state[u] = 1
            spreaders.append(u)
            n_ignorant -= 1
        else:
            state[v] = 2
            n_removed += 1
            spreaders[si] = spreaders[-1]
            spreaders.pop()
        t += 1
        if record_trajectory:
            traj.append((n_ignorant, len(spreaders), n_removed))

    # complete the graph: pairs with both endpoints unrevealed are still open
    unrevealed = np.nonzero(~revealed)[0]
    if p > 0.0 and unrevealed.size > 1:
        ai, bi = np.triu_indices(unrevealed.size, k=1)
        uu, ww = unrevealed[ai], unrevealed[bi]
        d = (ww - uu) % n
        nonlocal_mask = np.minimum(d, n - d) > k
        uu, ww = uu[nonlocal_mask], ww[nonlocal_mask]
        hits = rng.random(uu.size) < p
        for a, b in zip(uu[hits], ww[hits]):
            adjacency[int(a)].append(int(b))
            adjacency[int(b)].append(int(a))

    ii = np.array([i for i in range(n) for j in adjacency[i] if j > i], dtype=np.int64)
    jj = np.array([j for i in range(n) for j in adjacency[i] if j > i], dtype=np.int64)
    indptr, indices = _csr_from_pairs(n, ii, jj)
    graph = Graph(params, indptr, indices, seed=seed, method="coupled")

    trajectory = np.array(traj, dtype=np.int64) if record_trajectory else None
    return RunOutcome(n_removed, n_ignorant, t, v0, trajectory), graph
