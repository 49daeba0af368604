"""Newman-Watts small-world ring graphs with tagged shortcut edges.

A graph on ``n`` vertices (0-indexed) has two edge layers that are kept
separate throughout:

* local edges: ``{i, j}`` is a local edge iff the ring distance
  ``min((i-j) % n, (j-i) % n)`` is in ``(0, k]``. These are implicit in the
  ring rule and never stored; there are exactly ``n*k`` of them.
* shortcuts: every non-local pair independently carries an edge with
  probability ``p = c / (n - 2k - 1)``, stored as per-vertex sorted
  adjacency in CSR form.

Graphs are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .rand import as_generator, fresh_seed

__all__ = [
    "DegreeStats",
    "Graph",
    "GraphParams",
    "build",
    "degree_stats",
    "shortcut_probability",
]


def shortcut_probability(n: int, k: int, c: float) -> float:
    """Per-pair shortcut probability ``c / (n - 2k - 1)``.

    Raises ``ValueError`` when there are no shortcut slots (n <= 2k+1) or the
    resulting probability reaches 1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if c < 0:
        raise ValueError(f"c must be >= 0, got {c}")
    slots = n - 2 * k - 1
    if slots <= 0:
        raise ValueError(f"no shortcut slots: need n > 2k+1, got n={n}, k={k}")
    p = c / slots
    if p >= 1.0:
        raise ValueError(f"shortcut probability c/(n-2k-1) = {p} must be < 1")
    return p


@dataclass(frozen=True)
class GraphParams:
    """Parameters (n, k, c) of a small-world ring.

    ``p`` is derived. The degenerate case ``n == 2k+1`` (the ring is already
    the complete graph, zero shortcut slots) is accepted with ``p = 0``;
    ``n < 2k+1`` is rejected because the ring rule would double-count edges.
    """

    n: int
    k: int
    c: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or int(self.k) != self.k:
            raise ValueError("n and k must be integers")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "c", float(self.c))
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.c < 0:
            raise ValueError(f"c must be >= 0, got {self.c}")
        if self.n < 2 * self.k + 1:
            raise ValueError(f"need n >= 2k+1, got n={self.n}, k={self.k}")
        if self.n > 2 * self.k + 1:
            shortcut_probability(self.n, self.k, self.c)  # validates p < 1

    @property
    def p(self) -> float:
        if self.n == 2 * self.k + 1:
            return 0.0
        return self.c / (self.n - 2 * self.k - 1)

    @property
    def eligible_pairs(self) -> int:
        """Number of non-local vertex pairs, n(n-2k-1)/2."""
        return self.n * max(self.n - 2 * self.k - 1, 0) // 2


@dataclass(frozen=True)
class Graph:
    """Immutable small-world ring graph.

    Shortcut adjacency is CSR: the shortcut neighbours of ``v`` are
    ``shortcut_indices[shortcut_indptr[v]:shortcut_indptr[v+1]]``, sorted
    ascending. ``seed`` is the integer build seed when one was supplied
    (``None`` when an external generator was used).
    """

    params: GraphParams
    shortcut_indptr: np.ndarray
    shortcut_indices: np.ndarray
    seed: int | None = None
    method: str = "pairwise"

    def __post_init__(self):
        self.shortcut_indptr.setflags(write=False)
        self.shortcut_indices.setflags(write=False)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def p(self) -> float:
        return self.params.p

    @property
    def shortcut_count(self) -> int:
        return int(self.shortcut_indices.size) // 2

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")

    def local_neighbors(self, v: int) -> np.ndarray:
        """The 2k ring neighbours v±1, ..., v±k (mod n), ascending."""
        self._check_vertex(v)
        offsets = np.arange(1, self.k + 1)
        out = np.concatenate([(v + offsets) % self.n, (v - offsets) % self.n])
        out.sort()
        return out

    def shortcut_neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.shortcut_indices[self.shortcut_indptr[v]:self.shortcut_indptr[v + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        """Local and shortcut neighbours of v, sorted, duplicate-free."""
        out = np.concatenate([self.local_neighbors(v), self.shortcut_neighbors(v)])
        out.sort()
        return out

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return 2 * self.k + int(self.shortcut_indptr[v + 1] - self.shortcut_indptr[v])

    def shortcut_degrees(self) -> np.ndarray:
        return np.diff(self.shortcut_indptr)

    def shortcut_pairs(self) -> list[tuple[int, int]]:
        """Shortcut edges as (i, j) with i < j, lexicographically sorted."""
        pairs = []
        for i in range(self.n):
            row = self.shortcut_neighbors(i)
            for j in row[row > i]:
                pairs.append((i, int(j)))
        return pairs

    def to_json(self) -> str:
        """Serialize to the documented JSON schema (local edges implicit)."""
        obj = {
            "n": self.n,
            "k": self.k,
            "c": self.c,
            "p": self.p,
            "seed": self.seed,
            "shortcuts": [list(pair) for pair in self.shortcut_pairs()],
        }
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        obj = json.loads(text)
        params = GraphParams(obj["n"], obj["k"], obj["c"])
        pairs = [(int(i), int(j)) for i, j in obj["shortcuts"]]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate shortcut pairs")
        for i, j in pairs:
            if not (0 <= i < j < params.n):
                raise ValueError(f"malformed shortcut pair ({i}, {j})")
            if ring_distance(i, j, params.n) <= params.k:
                raise ValueError(f"shortcut ({i}, {j}) joins a local pair")
        indptr, indices = _csr_from_pairs(
            params.n,
            np.array([i for i, _ in pairs], dtype=np.int64),
            np.array([j for _, j in pairs], dtype=np.int64),
        )
        return cls(params, indptr, indices, seed=obj.get("seed"), method="deserialized")


def ring_distance(i: int, j: int, n: int) -> int:
    d = (i - j) % n
    return min(d, n - d)


def _csr_from_pairs(n: int, ii: np.ndarray, jj: np.ndarray):
    owners = np.concatenate([ii, jj])
    nbrs = np.concatenate([jj, ii])
    order = np.lexsort((nbrs, owners))
    owners = owners[order]
    nbrs = nbrs[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owners, minlength=n), out=indptr[1:])
    return indptr, nbrs.astype(np.int64)


def _eligible_row_counts(n: int, k: int) -> np.ndarray:
    # row i holds pairs (i, j) with i+k < j < i+n-k, j < n
    return np.minimum(n - np.arange(n) - k - 1, n - 2 * k - 1).clip(min=0)


def _sample_pairwise(params: GraphParams, rng: np.random.Generator):
    """One Bernoulli(p) draw per eligible pair, in lexicographic (i, j) order."""
    n, k, p = params.n, params.k, params.p
    ii, jj = [], []
    if p > 0.0:
        counts = _eligible_row_counts(n, k)
        for i in range(n):
            m = int(counts[i])
            if m == 0:
                continue
            hits = np.nonzero(rng.random(m) < p)[0]
            if hits.size:
                ii.append(np.full(hits.size, i, dtype=np.int64))
                jj.append(hits.astype(np.int64) + (i + k + 1))
    if ii:
        return np.concatenate(ii), np.concatenate(jj)
    return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)


def _distinct_uniform(rng: np.random.Generator, bound: int, m: int) -> np.ndarray:
    """m distinct uniform integers from [0, bound), by sequential rejection."""
    chosen: set[int] = set()
    out = np.empty(m, dtype=np.int64)
    filled = 0
    while filled < m:
        batch = rng.integers(0, bound, size=max(m - filled + 16, 64))
        for x in batch:
            xi = int(x)
            if xi not in chosen:
                chosen.add(xi)
                out[filled] = xi
                filled += 1
                if filled == m:
                    break
    return out


def _sample_sparse(params: GraphParams, rng: np.random.Generator):
    """Binomial shortcut count, then a uniform subset of eligible pairs.

    Law-identical to the pairwise sampler (i.i.d. Bernoulli over E slots is
    exactly Binomial(E, p) many slots chosen uniformly without replacement)
    but O(shortcuts) instead of O(n^2), for large n.
    """
    n, k, p = params.n, params.k, params.p
    total = params.eligible_pairs
    if p == 0.0 or total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    m = int(rng.binomial(total, p))
    if m == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    ids = _distinct_uniform(rng, total, m)
    cum = np.concatenate([[0], np.cumsum(_eligible_row_counts(n, k))])
    ii = np.searchsorted(cum, ids, side="right") - 1
    jj = ii + k + 1 + (ids - cum[ii])
    return ii.astype(np.int64), jj.astype(np.int64)


def build(
    params: GraphParams,
    rng: int | np.random.Generator | None = None,
    method: str = "pairwise",
) -> Graph:
    """Sample a small-world ring graph.

    ``method="pairwise"`` draws one Bernoulli(p) per eligible pair in
    lexicographic order (exact to the definition, O(n^2) work);
    ``method="sparse"`` draws the Binomial total and then a uniform subset of
    eligible pairs (same law, O(shortcuts) work). Both are deterministic
    given the seed.
    """
    seed = None
    if not isinstance(rng, np.random.Generator):
        seed = fresh_seed() if rng is None else int(rng)
        rng = as_generator(seed)
    if method == "pairwise":
        ii, jj = _sample_pairwise(params, rng)
    elif method == "sparse":
        ii, jj = _sample_sparse(params, rng)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    indptr, indices = _csr_from_pairs(params.n, ii, jj)
    return Graph(params, indptr, indices, seed=seed, method=method)


@dataclass(frozen=True)
class DegreeStats:
    """Total-degree mean/variance plus the shortcut-degree histogram.

    ``shortcut_histogram[d]`` counts vertices with exactly d shortcuts; the
    shortcut degree of a vertex is Binomial(n-2k-1, p) by construction, which
    is what the histogram is meant to be tested against.
    """

    mean: float
    variance: float
    shortcut_histogram: np.ndarray = field(repr=False)


def degree_stats(graph: Graph) -> DegreeStats:
    sc = graph.shortcut_degrees()
    total = sc + 2 * graph.k
    var = float(total.var(ddof=1)) if graph.n > 1 else 0.0
    return DegreeStats(float(total.mean()), var, np.bincount(sc))
