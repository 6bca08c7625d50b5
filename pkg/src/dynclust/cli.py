"""Command-line harness.

    dynclust run --mode {incremental,static-baseline,verify,bench} \
        --input stream.txt --k 2 --z 1 [--alpha --beta --eps --eps-red
        --lambda --seed --oracle --out FILE --spanner-mode --solve-every]
    dynclust gen --kind {gnp,two-cluster,pref-attach} --n 200 --m 1000 \
        --seed 0 --out stream.txt

Per-update metrics go to --out (JSON lines) or stdout; a summary object is
printed at the end.  Exit codes: 0 success, 1 invariant violation in
verify mode, 2 parse/parameter errors.  Set DYNCLUST_LOG=DEBUG for trace
logging.  The metrics schema is documented in docs/metrics.md.
"""

import argparse
import json
import logging
import math
import os
import sys
import time

import numpy as np

from .exact import brute_force_opt
from .graph import DynGraph, StreamParseError, read_stream, write_stream
from .incremental import check_invariants, init_bicriteria
from .params import ClusteringParams
from .pipeline import Pipeline
from .powers import INF
from .static_levels import run_static, static_cost
from .streams import GENERATORS

logger = logging.getLogger("dynclust")


def _setup_logging():
    level = os.environ.get("DYNCLUST_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynclust")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a mode over an edge stream")
    run.add_argument("--mode", required=True,
                     choices=["incremental", "static-baseline", "verify", "bench"])
    run.add_argument("--input", required=True)
    run.add_argument("--k", type=int, required=True)
    run.add_argument("--z", type=float, default=1.0)
    run.add_argument("--alpha", type=float, default=4.0)
    run.add_argument("--beta", type=float, default=0.25)
    run.add_argument("--eps", type=float, default=0.1)
    run.add_argument("--eps-red", type=float, default=0.25)
    run.add_argument("--lambda", dest="lam", type=int, default=5)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--oracle", action="store_true",
                     help="verify costs against the brute-force optimum per step")
    run.add_argument("--out", default=None)
    run.add_argument("--spanner-mode", choices=["cluster", "greedy"],
                     default="cluster")
    run.add_argument("--solve-every", type=int, default=1,
                     help="solve only every q-th operation (benchmark knob; "
                          "intermediate steps reuse the last solution)")

    gen = sub.add_parser("gen", help="write a seeded edge stream")
    gen.add_argument("--kind", required=True, choices=sorted(GENERATORS))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--wmax", type=int, default=None)
    gen.add_argument("--out", required=True)
    return ap


def _emit(fh, obj):
    fh.write(json.dumps(obj) + "\n")


def _exact_sandwich_ok(state) -> bool:
    for lv in state.levels:
        if lv.oracle is None:
            continue
        dist, _ = state.g.distances(sorted(lv.oracle.sources))
        delta = lv.oracle.delta
        lo = dist <= delta
        hi = (delta <= (1.0 + state.p.eps) * dist) | (dist == INF)
        if not bool(np.all(lo & hi)):
            return False
    return True


def _exact_cost_law_ok(state) -> bool:
    for i in range(state.t):
        lv = state.levels[i]
        removed = lv.B | lv.Z
        by_center = {}
        for v in sorted(removed):
            by_center.setdefault(int(state.sigma[v]), []).append(v)
        for s, members in by_center.items():
            dist, _ = state.g.distances([s])
            if any(dist[v] > lv.nu for v in members):
                return False
    return True


def cmd_run(args) -> int:
    try:
        stream = read_stream(args.input)
        p = ClusteringParams(k=args.k, z=args.z, alpha=args.alpha, beta=args.beta,
                       eps=args.eps, seed=args.seed)
        if not (0 < args.eps_red < 0.5):
            raise ValueError(f"--eps-red must lie in (0, 0.5), got {args.eps_red}")
        if args.lam < 1:
            raise ValueError(f"--lambda must be >= 1, got {args.lam}")
    except (StreamParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.mode == "bench":
        return cmd_bench(args, stream, p)

    out_fh = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    status = 0
    try:
        if args.mode == "incremental":
            status = _run_incremental(args, stream, p, out_fh, verify=False)
        elif args.mode == "verify":
            status = _run_incremental(args, stream, p, out_fh, verify=True)
        elif args.mode == "static-baseline":
            status = _run_static_baseline(args, stream, p, out_fh)
    finally:
        if args.out:
            out_fh.close()
    return status


def _run_incremental(args, stream, p, out_fh, verify: bool) -> int:
    g = DynGraph(stream.n)
    pipe = Pipeline(g, p, eps_red=args.eps_red, lam=args.lam,
                    spanner_mode=args.spanner_mode,
                    solve_every=args.solve_every)
    prev_radii = None
    max_ratio = 0.0
    for (u, v, w) in stream.edges:
        try:
            rec = pipe.step(u, v, w)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        obj = rec.to_json()
        if verify:
            try:
                check_invariants(pipe.bic, prev_radii)
                if stream.n <= 500:
                    assert _exact_sandwich_ok(pipe.bic), "estimate sandwich violated"
                if stream.n <= 300:
                    assert _exact_cost_law_ok(pipe.bic), "assignment cost law violated"
            except (AssertionError, RuntimeError) as exc:
                print(f"invariant violation at step {rec.step}: {exc}",
                      file=sys.stderr)
                return 1
            prev_radii = [lv.nu for lv in pipe.bic.levels]
        if args.oracle and not rec.opt_infinite and rec.C is not None:
            rep = brute_force_opt(g, p.k, p.z)
            cost_g = _cost_in_g(g, rec.C.centers, p.z)
            obj["cost_G"] = None if cost_g == INF else cost_g
            obj["opt"] = None if rep.opt == INF else rep.opt
            obj["ratio"] = None if rep.opt in (0, INF) else cost_g / rep.opt
            if obj["ratio"]:
                max_ratio = max(max_ratio, obj["ratio"])
        _emit(out_fh, obj)
    summary = {
        "summary": True,
        "mode": args.mode,
        "steps": pipe.steps,
        "t": pipe.bic.t,
        "S_size": len(pipe.bic.S_ever),
        "resample_phases": pipe.bic.resample_phases,
        "sigma_inc_bicriteria": pipe.bic.sigma_inc,
        "sigma_inc_reduction": None if pipe.red is None else pipe.red.sigma_inc,
        "spanner_restarts": None if pipe.red is None else pipe.red.restart_count,
        "max_ratio": max_ratio if args.oracle else None,
    }
    _emit(out_fh, summary)
    return 0


def _cost_in_g(g, centers, z: float) -> float:
    dist, _ = g.distances(sorted(centers))
    if bool(np.any(dist == INF)):
        return INF
    return float(np.sum(dist ** z))


def _run_static_baseline(args, stream, p, out_fh) -> int:
    g = DynGraph(stream.n)
    for step, (u, v, w) in enumerate(stream.edges, start=1):
        try:
            g.insert_edge(u, v, w)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        run = run_static(g, p)
        obj = {
            "step": step,
            "t": run.t,
            "S_size": int(run.S.size),
            "opt_infinite": run.opt_infinite,
            "cost_G": None if run.opt_infinite else static_cost(g, run),
        }
        _emit(out_fh, obj)
    _emit(out_fh, {"summary": True, "mode": "static-baseline",
                   "steps": len(stream.edges)})
    return 0


def cmd_bench(args, stream, p) -> int:
    # A: incremental maintenance (solver on the batched cadence)
    g1 = DynGraph(stream.n)
    solve_every = args.solve_every if args.solve_every > 1 else 25
    pipe = Pipeline(g1, p, eps_red=args.eps_red, lam=args.lam,
                    spanner_mode=args.spanner_mode, solve_every=solve_every)
    inc_times = []
    t0 = time.perf_counter()
    for (u, v, w) in stream.edges:
        s = time.perf_counter()
        pipe.step(u, v, w)
        inc_times.append(time.perf_counter() - s)
    inc_total = time.perf_counter() - t0

    # B: static recompute from scratch per update (bicriteria layer only,
    # the comparable scope)
    g2 = DynGraph(stream.n)
    static_times = []
    t0 = time.perf_counter()
    for (u, v, w) in stream.edges:
        g2.insert_edge(u, v, w)
        s = time.perf_counter()
        run_static(g2, p)
        static_times.append(time.perf_counter() - s)
    static_total = time.perf_counter() - t0

    def pct(xs, q):
        return float(np.percentile(np.asarray(xs), q)) if xs else 0.0

    from . import kernels
    report = {
        "backend": kernels.BACKEND,
        "steps": len(stream.edges),
        "incremental_total_s": inc_total,
        "static_total_s": static_total,
        "speedup": static_total / inc_total if inc_total > 0 else None,
        "incremental_p50_ms": 1e3 * pct(inc_times, 50),
        "incremental_p90_ms": 1e3 * pct(inc_times, 90),
        "incremental_p99_ms": 1e3 * pct(inc_times, 99),
        "static_p50_ms": 1e3 * pct(static_times, 50),
        "resample_phases": pipe.bic.resample_phases,
        "sigma_inc": None if pipe.red is None else pipe.red.sigma_inc,
        "spanner_restarts": None if pipe.red is None else pipe.red.restart_count,
        "solve_every": solve_every,
    }
    print(json.dumps(report, indent=2))
    return 0


def cmd_gen(args) -> int:
    kw = {"n": args.n, "m": args.m, "seed": args.seed}
    if args.wmax is not None:
        kw["wmax"] = args.wmax
    try:
        stream = GENERATORS[args.kind](**kw)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    write_stream(args.out, stream)
    print(f"wrote {len(stream.edges)} insertions over n={stream.n} to {args.out}")
    return 0


def main(argv=None) -> int:
    _setup_logging()
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "gen":
        return cmd_gen(args)
    ap.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
