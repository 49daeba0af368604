"""Command-line front end for the rumour-process toolkit.

Subcommands::

    graph       sample a small-world graph, emit its JSON form
    run         one dynamics run, JSON summary (optional trajectory CSV)
    sweep       Monte-Carlo sweep over a c-grid and sizes, CSV table
    hist        histogram of final stifler counts for one cell, CSV
    meanfield   alpha / lambda / z_inf JSON, optional ODE cross-check
    thresholds  theoretical critical-c JSON, optional empirical estimates
    noise       dynamical- vs topological-noise comparison, JSON
    blocked     blocked-cluster run lengths per sampled centre, CSV

Determinism contract: identical flags plus an explicit ``--seed`` produce
byte-identical output, independent of ``--workers``. When ``--seed`` is
omitted a fresh seed is drawn and echoed on stderr so the invocation stays
reproducible after the fact. Exit codes: 0 ok, 2 invalid parameters
(one-line diagnostic), 1 runtime failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from .branching import (
    ScanLimitExceeded,
    blocked_cluster,
    classify_blocking,
    critical_c,
    subcritical_mean,
    supercritical_mean,
)
from .experiments import (
    ExperimentConfig,
    SweepTable,
    collect_final_counts,
    compare_noise_sources,
    estimate_thresholds,
    histogram,
    monte_carlo,
)
from .graph import GraphParams, build
from .meanfield import MeanFieldParams, integrate, z_infinity
from .process import run
from .rand import fresh_seed, substream

__all__ = ["main"]


class CliError(Exception):
    """Parameter validation failure; maps to exit code 2."""


def _parse_c_values(text: str) -> list[float]:
    """`lo:hi:step` grid (inclusive of lo and of hi up to step/2), a comma
    list, or a single value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"--c grid must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise CliError(f"--c grid needs step > 0 and hi >= lo, got {text!r}")
        values = []
        i = 0
        while (v := lo + i * step) < hi + step / 2:
            values.append(round(v, 10))
            i += 1
        return values
    if "," in text:
        return [float(p) for p in text.split(",") if p]
    return [float(text)]


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError as exc:
        raise CliError(f"--sizes must be a comma list of integers, got {text!r}") from exc


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = fresh_seed()
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _graph_params(n: int, k: int, c: float) -> GraphParams:
    try:
        return GraphParams(n, k, c)
    except ValueError as exc:
        raise CliError(f"--n/--k/--c: {exc}") from exc


def _cmd_graph(args) -> int:
    seed = _resolve_seed(args.seed)
    graph = build(_graph_params(args.n, args.k, args.c), seed, method=args.method)
    _emit(graph.to_json() + "\n", args.out)
    return 0


def _cmd_run(args) -> int:
    seed = _resolve_seed(args.seed)
    params = _graph_params(args.n, args.k, args.c)
    if args.seed_vertex is not None and not 0 <= args.seed_vertex < args.n:
        raise CliError(f"--seed-vertex must be in [0, {args.n})")
    graph = build(params, substream(seed, 0), method=args.method)
    outcome = run(
        graph,
        seed_vertex=args.seed_vertex,
        rng=substream(seed, 1),
        record_trajectory=args.trajectory is not None,
    )
    summary = {
        "n": args.n,
        "k": args.k,
        "c": args.c,
        "seed_vertex": outcome.seed_vertex,
        "R": outcome.final_removed,
        "tau": outcome.absorption_time,
        "I_final": outcome.final_ignorant,
    }
    _emit(json.dumps(summary) + "\n", args.out)
    if args.trajectory is not None:
        buf = io.StringIO()
        buf.write("t,I,S,R\n")
        for t, (i_count, s_count, r_count) in enumerate(outcome.trajectory):
            buf.write(f"{t},{i_count},{s_count},{r_count}\n")
        _emit(buf.getvalue(), args.trajectory)
    return 0


def _sweep_config(args, cs, sizes) -> ExperimentConfig:
    try:
        return ExperimentConfig(
            k=args.k, cs=cs, sizes=sizes, m=args.m, l=args.l,
            master_seed=_resolve_seed(args.seed),
            seed_vertex=getattr(args, "seed_vertex", None),
            graph_method=args.method, workers=getattr(args, "workers", None),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _cmd_sweep(args) -> int:
    table = monte_carlo(_sweep_config(args, _parse_c_values(args.c), _parse_sizes(args.sizes)))
    buf = io.StringIO()
    table.to_csv(buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_hist(args) -> int:
    cs = _parse_c_values(args.c)
    if len(cs) != 1:
        raise CliError("--c must be a single value for hist")
    config = _sweep_config(args, cs, [args.n])
    samples = collect_final_counts(config)
    if args.mode == "R_over_n":
        hist = histogram(samples / args.n, mode="R_over_n", bins=args.bins)
    else:
        hist = histogram(samples, mode="raw_R")
    buf = io.StringIO()
    hist.to_csv(buf)
    _emit(buf.getvalue(), args.out)
    return 0


def _cmd_meanfield(args) -> int:
    try:
        params = MeanFieldParams.from_kc(args.k, args.c, alpha_override=args.alpha_override)
    except ValueError as exc:
        raise CliError(f"--k/--c/--alpha-override: {exc}") from exc
    report = {
        "k": args.k,
        "c": args.c,
        "alpha": params.alpha,
        "lambda": params.lam,
        "z_inf": z_infinity(args.k, args.c, alpha_override=args.alpha_override),
    }
    if args.ode:
        traj = integrate(params, t_max=args.t_max, dt=args.dt, n_ref=args.n_ref)
        report["z_ode"] = traj.final_state[2]
        if args.ode_out is not None:
            buf = io.StringIO()
            buf.write("t,x,y,z\n")
            for t, x, y, z in zip(traj.t, traj.x, traj.y, traj.z):
                buf.write(f"{float(t)!r},{float(x)!r},{float(y)!r},{float(z)!r}\n")
            _emit(buf.getvalue(), args.ode_out)
    _emit(json.dumps(report) + "\n", args.out)
    return 0


def _cmd_thresholds(args) -> int:
    if args.k < 1:
        raise CliError(f"--k must be >= 1, got {args.k}")
    variant = "lemma" if args.lemma_variant else "corollary"

    def sub_mean(k, c):
        return subcritical_mean(k, c, lemma_variant=args.lemma_variant)

    c1 = critical_c(sub_mean, args.k, tol=args.tol)
    c2 = critical_c(supercritical_mean, args.k, tol=args.tol)
    if args.table is None:
        report = {"k": args.k, "c1_theory": c1, "c2_theory": c2, "variant": variant}
    else:
        table = SweepTable.from_csv(args.table)
        c1_hat, c2_hat = estimate_thresholds(table, args.tol_lower, args.tol_upper)
        report = {
            "k": args.k,
            "c1_hat": c1_hat,
            "c2_hat": c2_hat,
            "c1_theory": c1,
            "c2_theory": c2,
            "variant": variant,
            "grid": table.cs(),
        }
    _emit(json.dumps(report) + "\n", args.out)
    return 0


def _cmd_noise(args) -> int:
    try:
        config = ExperimentConfig(
            k=args.k, cs=[args.c], sizes=[args.n], m=args.m, l=args.m,
            master_seed=_resolve_seed(args.seed), seed_vertex=args.seed_vertex,
            graph_method=args.method,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    report = compare_noise_sources(config)
    _emit(json.dumps(asdict(report)) + "\n", args.out)
    return 0


def _cmd_blocked(args) -> int:
    seed = _resolve_seed(args.seed)
    params = _graph_params(args.n, args.k, args.c)
    if args.centers < 1:
        raise CliError("--centers must be >= 1")
    graph = build(params, substream(seed, 0), method=args.method)
    profile = classify_blocking(graph, substream(seed, 1))
    centers = substream(seed, 2).choice(args.n, size=min(args.centers, args.n), replace=False)
    scan_limit = args.scan_limit if args.scan_limit else math.ceil(args.n**0.45)
    buf = io.StringIO()
    buf.write("v,j_minus,j_plus\n")
    exceeded = 0
    for v in np.sort(centers):
        try:
            cluster = blocked_cluster(profile, int(v), scan_limit)
        except ScanLimitExceeded:
            exceeded += 1
            continue
        buf.write(f"{int(v)},{cluster.j_minus},{cluster.j_plus}\n")
    if exceeded:
        print(f"scan limit {scan_limit} exceeded at {exceeded} of {centers.size} centres",
              file=sys.stderr)
    _emit(buf.getvalue(), args.out)
    return 0


def _add_common_graph_flags(sub, with_c=True):
    sub.add_argument("--n", type=int, required=True, help="vertex count")
    sub.add_argument("--k", type=int, required=True, help="ring half-degree")
    if with_c:
        sub.add_argument("--c", type=float, default=0.0, help="shortcut intensity")
    sub.add_argument("--seed", type=int, default=None, help="master seed (echoed if omitted)")
    sub.add_argument("--method", choices=["pairwise", "sparse"], default="pairwise",
                     help="shortcut sampling method")
    sub.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringrumor",
        description="Maki-Thompson rumour dynamics on Newman-Watts small-world rings.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("graph", help="sample a graph and write its JSON form")
    _add_common_graph_flags(p)
    p.set_defaults(func=_cmd_graph)

    p = subs.add_parser("run", help="run the dynamics once")
    _add_common_graph_flags(p)
    p.add_argument("--seed-vertex", type=int, default=None,
                   help="initial spreader (default: uniform random)")
    p.add_argument("--trajectory", default=None, metavar="PATH",
                   help="also write the (t, I, S, R) trajectory CSV")
    p.set_defaults(func=_cmd_run)

    p = subs.add_parser("sweep", help="Monte-Carlo sweep over a c-grid and sizes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", required=True, help="c value, comma list, or lo:hi:step grid")
    p.add_argument("--sizes", required=True, help="comma list of system sizes")
    p.add_argument("--m", type=int, default=1000, help="dynamics repetitions per graph")
    p.add_argument("--l", type=int, default=10, help="graph realizations per cell")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--seed-vertex", type=int, default=None)
    p.add_argument("--method", choices=["pairwise", "sparse"], default="pairwise")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: RINGRUMOR_WORKERS or all cores)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = subs.add_parser("hist", help="histogram of final stifler counts for one cell")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--l", type=int, default=10)
    p.add_argument("--mode", choices=["raw_R", "R_over_n"], default="raw_R")
    p.add_argument("--bins", type=int, default=100, help="bin count for R_over_n mode")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=["pairwise", "sparse"], default="pairwise")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_hist)

    p = subs.add_parser("meanfield", help="mean-field alpha, lambda, z_inf")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--alpha-override", type=float, default=None,
                   help="substitute a fixed alpha (e.g. 1/(2k+c))")
    p.add_argument("--ode", action="store_true", help="add the integrated z(t_max)")
    p.add_argument("--ode-out", default=None, metavar="PATH",
                   help="write the ODE trajectory CSV here (with --ode)")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n-ref", type=float, default=1e4,
                   help="initial spreader mass is 1/n_ref")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_meanfield)

    p = subs.add_parser("thresholds", help="theoretical (and optionally empirical) critical c")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lemma-variant", action="store_true",
                   help="use the (alpha^-k + 1) subcritical-mean variant")
    p.add_argument("--tol", type=float, default=1e-9, help="bisection tolerance")
    p.add_argument("--table", default=None, metavar="CSV",
                   help="sweep CSV; adds collapse-based c1_hat/c2_hat")
    p.add_argument("--tol-lower", type=float, default=0.10)
    p.add_argument("--tol-upper", type=float, default=0.05)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_thresholds)

    p = subs.add_parser("noise", help="dynamical vs topological noise at M = L")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--m", type=int, default=1000, help="M = L repetitions")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--seed-vertex", type=int, default=None)
    p.add_argument("--method", choices=["pairwise", "sparse"], default="pairwise")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_noise)

    p = subs.add_parser("blocked", help="blocked-cluster run lengths per sampled centre")
    _add_common_graph_flags(p)
    p.add_argument("--centers", type=int, default=1000, help="number of sampled centres")
    p.add_argument("--scan-limit", type=int, default=None,
                   help="scan limit (default: ceil(n^0.45))")
    p.set_defaults(func=_cmd_blocked)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
