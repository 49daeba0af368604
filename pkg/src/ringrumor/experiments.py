"""Monte-Carlo harness: parameter sweeps, histograms, collapse thresholds.

The averaging protocol per (c, n) cell builds L independent graphs and runs
the dynamics M times on each, pooling the M*L final stifler counts. Sweeps
are deterministic functions of the master seed: every cell derives its own
RNG substreams from (master_seed, c-index, n-index, graph-index), so the
output is bit-identical no matter how many worker processes execute it.

The localization/propagation transition is read off the sweep through data
collapse: below the transition the raw mean R is size-independent, above it
the ratio R/n is. ``estimate_thresholds`` turns that into numbers with a
relative-spread rule: c1_hat is the largest grid c where the raw means of
all sizes stay within ``tol_lower`` of the smallest size's mean, c2_hat the
smallest grid c where the ratio means stay within ``tol_upper``. The rule
and its default tolerances (0.10 / 0.05) are this library's convention; the
collapse itself has no canonical criterion.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import GraphParams, build
from .meanfield import z_infinity
from .process import run_batch
from .rand import fresh_seed, substream

__all__ = [
    "ExperimentConfig",
    "Histogram",
    "MeanFieldComparison",
    "MeanFieldComparisonRow",
    "NoCollapseError",
    "NoiseReport",
    "SweepRow",
    "SweepTable",
    "collect_final_counts",
    "compare_noise_sources",
    "estimate_thresholds",
    "histogram",
    "meanfield_comparison",
    "monte_carlo",
    "paper_scale_config",
]

WORKERS_ENV_VAR = "RINGRUMOR_WORKERS"


class NoCollapseError(RuntimeError):
    """The collapse criterion is never met on the supplied grid."""


@dataclass
class ExperimentConfig:
    """Sweep description: sizes x c-grid at fixed k, M runs on each of L graphs.

    ``master_seed=None`` draws a fresh seed (recorded in the output).
    ``seed_vertex=None`` starts each run from a uniformly random vertex;
    an int pins the initial spreader. ``workers=None`` defers to the
    RINGRUMOR_WORKERS environment variable, then to available parallelism.
    """

    k: int
    cs: Sequence[float]
    sizes: Sequence[int]
    m: int = 1000
    l: int = 10
    master_seed: int | None = None
    seed_vertex: int | None = None
    graph_method: str = "pairwise"
    workers: int | None = None

    def __post_init__(self):
        if self.m < 1 or self.l < 1:
            raise ValueError("M and L must be >= 1")
        if not self.cs or not self.sizes:
            raise ValueError("need at least one c and one size")
        for n in self.sizes:
            GraphParams(n, self.k, max(self.cs))  # validates n >= 2k+1, p < 1


@dataclass(frozen=True)
class SweepRow:
    k: int
    c: float
    n: int
    mean_R: float
    std_R: float
    mean_R_over_n: float
    std_R_over_n: float
    samples: int
    seed: int


CSV_HEADER = "k,c,n,mean_R,std_R,mean_R_over_n,std_R_over_n,samples,seed"


@dataclass
class SweepTable:
    rows: list[SweepRow]
    master_seed: int

    def cs(self) -> list[float]:
        return sorted({row.c for row in self.rows})

    def sizes(self) -> list[int]:
        return sorted({row.n for row in self.rows})

    def row(self, c: float, n: int) -> SweepRow:
        for r in self.rows:
            if r.n == n and r.c == c:
                return r
        raise KeyError(f"no row for c={c}, n={n}")

    def to_csv(self, path_or_buffer) -> None:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(
                f"{r.k},{r.c!r},{r.n},{r.mean_R!r},{r.std_R!r},"
                f"{r.mean_R_over_n!r},{r.std_R_over_n!r},{r.samples},{r.seed}\n"
            )
        text = buf.getvalue()
        if hasattr(path_or_buffer, "write"):
            path_or_buffer.write(text)
        else:
            with open(path_or_buffer, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, path_or_buffer) -> "SweepTable":
        if hasattr(path_or_buffer, "read"):
            reader = csv.DictReader(path_or_buffer)
            rows = list(reader)
        else:
            with open(path_or_buffer, newline="", encoding="utf-8") as fh:
                rows = list(csv.DictReader(fh))
        parsed = [
            SweepRow(
                int(r["k"]), float(r["c"]), int(r["n"]),
                float(r["mean_R"]), float(r["std_R"]),
                float(r["mean_R_over_n"]), float(r["std_R_over_n"]),
                int(r["samples"]), int(r["seed"]),
            )
            for r in rows
        ]
        if not parsed:
            raise ValueError("empty sweep CSV")
        return cls(parsed, parsed[0].seed)


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR, "").strip()
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def _cell_stats(args):
    """Worker for one (c, n) cell; pure function of the substream key."""
    k, c, n, m, l, master_seed, ci, ni, seed_vertex, graph_method = args
    params = GraphParams(n, k, c)
    all_R = np.empty(m * l, dtype=np.int64)
    violations = 0
    for g in range(l):
        graph = build(params, substream(master_seed, ci, ni, g, 0), method=graph_method)
        R, tau, _ = run_batch(graph, m, substream(master_seed, ci, ni, g, 1), seed_vertex)
        violations += int(np.sum(tau != 2 * R - 1))
        all_R[g * m:(g + 1) * m] = R
    ratio = all_R / n
    return (
        ci, ni,
        float(all_R.mean()), float(all_R.std(ddof=1)) if all_R.size > 1 else 0.0,
        float(ratio.mean()), float(ratio.std(ddof=1)) if ratio.size > 1 else 0.0,
        int(all_R.size), violations,
    )


def paper_scale_config(k: int, master_seed: int | None = None) -> ExperimentConfig:
    """The full published averaging protocol: M = 1e5 runs on each of L = 10
    graphs, sizes up to 25600, c from 0.1 to 10.

    This is the documented heavy preset (CPU-days, not CI material); the
    desk-scale defaults of ``ExperimentConfig`` reproduce the same physics
    in minutes.
    """
    return ExperimentConfig(
        k=k,
        cs=[round(0.1 * i, 10) for i in range(1, 101)],
        sizes=[3200, 6400, 12800, 25600],
        m=100_000,
        l=10,
        master_seed=master_seed,
        graph_method="sparse",
    )


def collect_final_counts(config: ExperimentConfig) -> np.ndarray:
    """Pooled final stifler counts for a single (c, n) cell.

    Same sampling protocol and substream keys as ``monte_carlo`` (L graphs,
    M runs each), but returns the raw M*L samples for histogramming.
    """
    if len(config.cs) != 1 or len(config.sizes) != 1:
        raise ValueError("collect_final_counts expects a single (c, n) cell")
    seed = config.master_seed if config.master_seed is not None else fresh_seed()
    params = GraphParams(config.sizes[0], config.k, config.cs[0])
    out = np.empty(config.m * config.l, dtype=np.int64)
    for g in range(config.l):
        graph = build(params, substream(seed, 0, 0, g, 0), method=config.graph_method)
        R, _, _ = run_batch(graph, config.m, substream(seed, 0, 0, g, 1), config.seed_vertex)
        out[g * config.m:(g + 1) * config.m] = R
    return out


def monte_carlo(config: ExperimentConfig) -> SweepTable:
    """Run the full sweep; deterministic given (config, master_seed).

    Every run is checked against the absorption identity tau = 2R - 1; any
    violation aborts, because it can only mean a broken kernel.
    """
    seed = config.master_seed if config.master_seed is not None else fresh_seed()
    cells = [
        (config.k, float(c), int(n), config.m, config.l, seed, ci, ni,
         config.seed_vertex, config.graph_method)
        for ci, c in enumerate(config.cs)
        for ni, n in enumerate(config.sizes)
    ]
    workers = _resolve_workers(config.workers)
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell_stats, cells))
    else:
        results = [_cell_stats(cell) for cell in cells]

    rows = []
    for (ci, ni, mean_R, std_R, mean_ratio, std_ratio, samples, violations) in results:
        if violations:
            raise RuntimeError(
                f"absorption identity violated {violations} times at "
                f"c={config.cs[ci]}, n={config.sizes[ni]}"
            )
        rows.append(SweepRow(
            config.k, float(config.cs[ci]), int(config.sizes[ni]),
            mean_R, std_R, mean_ratio, std_ratio, samples, seed,
        ))
    return SweepTable(rows, seed)


@dataclass(frozen=True)
class Histogram:
    """Normalized histogram of final stifler counts (or fractions).

    ``mode="raw_R"`` uses unit-width integer bins spanning the sample range;
    ``mode="R_over_n"`` uses equal-width bins on [0, 1].
    """

    bin_edges: np.ndarray
    counts: np.ndarray
    mode: str

    @property
    def sample_count(self) -> int:
        return int(self.counts.sum())

    @property
    def masses(self) -> np.ndarray:
        return self.counts / self.counts.sum()

    def to_csv(self, path_or_buffer) -> None:
        buf = io.StringIO()
        buf.write("bin_lo,bin_hi,mass\n")
        masses = self.masses
        for i in range(self.counts.size):
            lo = float(self.bin_edges[i])
            hi = float(self.bin_edges[i + 1])
            buf.write(f"{lo!r},{hi!r},{float(masses[i])!r}\n")
        text = buf.getvalue()
        if hasattr(path_or_buffer, "write"):
            path_or_buffer.write(text)
        else:
            with open(path_or_buffer, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)


def histogram(samples, mode: str = "raw_R", bins: int = 100) -> Histogram:
    samples = np.asarray(samples)
    if samples.size == 0:
        raise ValueError("cannot histogram an empty sample set")
    if mode == "raw_R":
        lo = int(np.floor(samples.min()))
        hi = int(np.floor(samples.max()))
        edges = np.arange(lo, hi + 2, dtype=float)
    elif mode == "R_over_n":
        if bins < 1:
            raise ValueError("bins must be >= 1")
        edges = np.linspace(0.0, 1.0, bins + 1)
    else:
        raise ValueError(f"unknown histogram mode {mode!r}")
    counts, _ = np.histogram(samples, bins=edges)
    return Histogram(edges, counts, mode)


def _relative_spread(rows_by_n: dict, sizes: Sequence[int], attr: str) -> float:
    ref = getattr(rows_by_n[sizes[0]], attr)
    return max(abs(getattr(rows_by_n[n], attr) - ref) / ref for n in sizes)


def estimate_thresholds(
    table: SweepTable,
    tol_lower: float = 0.10,
    tol_upper: float = 0.05,
) -> tuple[float, float]:
    """Collapse-based (c1_hat, c2_hat) from a multi-size sweep.

    The reference size is the smallest in the table. Raises
    ``NoCollapseError`` when either criterion never holds, or when the
    estimates cross.
    """
    sizes = table.sizes()
    if len(sizes) < 3:
        raise ValueError(f"threshold estimation needs >= 3 sizes, got {len(sizes)}")
    raw_cs = []
    ratio_cs = []
    for c in table.cs():
        rows_by_n = {n: table.row(c, n) for n in sizes}
        if _relative_spread(rows_by_n, sizes, "mean_R") < tol_lower:
            raw_cs.append(c)
        if _relative_spread(rows_by_n, sizes, "mean_R_over_n") < tol_upper:
            ratio_cs.append(c)
    if not raw_cs:
        raise NoCollapseError("raw-R collapse criterion never met on the grid")
    if not ratio_cs:
        raise NoCollapseError("R/n collapse criterion never met on the grid")
    c1_hat, c2_hat = max(raw_cs), min(ratio_cs)
    if c1_hat > c2_hat:
        raise NoCollapseError(f"crossed estimates: c1_hat={c1_hat} > c2_hat={c2_hat}")
    return c1_hat, c2_hat


@dataclass(frozen=True)
class NoiseReport:
    """Dynamical noise (M runs, one graph) vs topological noise (one run each
    on L graphs), at M = L."""

    n: int
    k: int
    c: float
    m: int
    mean_dynamical: float
    se_dynamical: float
    mean_topological: float
    se_topological: float
    variance_ratio: float
    seed: int

    def means_compatible(self, n_sigma: float = 3.0) -> bool:
        combined = np.hypot(self.se_dynamical, self.se_topological)
        return abs(self.mean_dynamical - self.mean_topological) <= n_sigma * combined


def compare_noise_sources(config: ExperimentConfig) -> NoiseReport:
    if config.m != config.l:
        raise ValueError(f"noise comparison needs M = L, got M={config.m}, L={config.l}")
    if len(config.cs) != 1 or len(config.sizes) != 1:
        raise ValueError("noise comparison runs one (c, n) cell at a time")
    c, n, m = float(config.cs[0]), int(config.sizes[0]), config.m
    seed = config.master_seed if config.master_seed is not None else fresh_seed()
    params = GraphParams(n, config.k, c)

    graph = build(params, substream(seed, 0, 0), method=config.graph_method)
    r_dyn, _, _ = run_batch(graph, m, substream(seed, 0, 1), config.seed_vertex)

    r_topo = np.empty(m, dtype=np.int64)
    for i in range(m):
        g_i = build(params, substream(seed, 1, i, 0), method=config.graph_method)
        out, _, _ = run_batch(g_i, 1, substream(seed, 1, i, 1), config.seed_vertex)
        r_topo[i] = out[0]

    var_dyn = float(r_dyn.var(ddof=1))
    var_topo = float(r_topo.var(ddof=1))
    return NoiseReport(
        n=n, k=config.k, c=c, m=m,
        mean_dynamical=float(r_dyn.mean()),
        se_dynamical=float(np.sqrt(var_dyn / m)),
        mean_topological=float(r_topo.mean()),
        se_topological=float(np.sqrt(var_topo / m)),
        variance_ratio=var_topo / var_dyn if var_dyn > 0 else float("inf"),
        seed=seed,
    )


@dataclass(frozen=True)
class MeanFieldComparisonRow:
    c: float
    n: int
    mean_R_over_n: float
    z_inf: float
    gap: float
    violates_bound: bool


@dataclass(frozen=True)
class MeanFieldComparison:
    k: int
    rows: list[MeanFieldComparisonRow] = field(default_factory=list)

    @property
    def any_violation(self) -> bool:
        return any(r.violates_bound for r in self.rows)


def meanfield_comparison(table: SweepTable, k: int) -> MeanFieldComparison:
    """Check z_inf against the largest-size simulated ratio, per c.

    The analytic fraction is expected to upper-bound the simulation; a row is
    flagged when mean R/n exceeds z_inf by more than three standard errors.
    """
    n_max = table.sizes()[-1]
    rows = []
    for c in table.cs():
        row = table.row(c, n_max)
        z = z_infinity(k, c)
        se = row.std_R_over_n / np.sqrt(row.samples)
        rows.append(MeanFieldComparisonRow(
            c=c, n=n_max, mean_R_over_n=row.mean_R_over_n, z_inf=z,
            gap=z - row.mean_R_over_n,
            violates_bound=row.mean_R_over_n > z + 3.0 * se,
        ))
    return MeanFieldComparison(k, rows)
