"""Command-line surface: gen, exact, estimate, bench.

Global flags --seed, --format, --quiet may appear before or after the
subcommand and can be defaulted through TRIAD_SEED / TRIAD_FORMAT /
TRIAD_QUIET. Exit codes: 0 success, 2 configuration problem, 3 unreadable
or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time

from . import edgelist
from .errors import ConfigError, EdgeListError, InputError
from .estimator import EstimatorConfig, RunReport, estimate
from .generators import (
    GroundTruth,
    gen_book,
    gen_erdos_renyi,
    gen_lb_instance,
    gen_preferential_attachment,
    gen_wheel,
    lb_spec,
)
from .graph import Graph, degeneracy, sum_edge_degrees, triangles_exact_cn
from .ideal import DegreeOracle, ideal_estimate
from .stream import EdgeStream

_BENCH_HEADER = [
    "family", "n", "m", "T_exact", "kappa", "epsilon", "t_hat", "kappa_hat",
    "estimate", "relative_error", "passes", "stored_edges_peak", "r", "ell",
    "s", "seed", "wall_time_ms",
]

_ESTIMATE_CSV_HEADER = [
    "estimate", "passes", "stored_edges_peak", "r", "ell", "s",
    "assignment_calls", "memo_size", "seed",
]


def _env_default(name, cast, fallback):
    raw = os.environ.get(f"TRIAD_{name}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"bad TRIAD_{name} value {raw!r}") from None


def _env_flag(name) -> bool:
    return os.environ.get(f"TRIAD_{name}", "").lower() in ("1", "true", "yes", "on")


def _say(args, message) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _emit(text) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def generate_family(family: str, params: dict, seed: int) -> tuple[Graph, GroundTruth]:
    """Build (graph, ground truth) for a named family.

    Families without a closed form get their truth from the exact oracles.
    """
    try:
        return _generate_family(family, params, seed)
    except KeyError as exc:
        raise ConfigError(
            f"family {family!r} needs parameter {exc.args[0]!r}") from None


def _generate_family(family: str, params: dict, seed: int) -> tuple[Graph, GroundTruth]:
    if family == "wheel":
        return gen_wheel(int(params["n"]))
    if family == "book":
        return gen_book(int(params["k"]))
    if family == "lb":
        spec = lb_spec(
            p=int(params["p"]), q=int(params["q"]), blocks=int(params["N"]),
            kind=str(params["kind"]), seed=seed,
            shared=int(params.get("shared", 1)),
        )
        return gen_lb_instance(spec)
    if family == "pa":
        g = gen_preferential_attachment(int(params["n"]), int(params["attach"]), seed)
    elif family == "er":
        g = gen_erdos_renyi(int(params["n"]), float(params["prob"]), seed)
    else:
        raise ConfigError(f"unknown family {family!r}")
    truth = GroundTruth(n=g.n, m=g.m, triangles=triangles_exact_cn(g),
                        kappa=degeneracy(g))
    return g, truth


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "k", "p", "q", "N", "attach", "kind", "prob", "shared"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    graph, truth = generate_family(args.family, params, args.seed)
    out = args.out or f"{args.family}.el"
    param_text = " ".join(f"{k}={params[k]}" for k in sorted(params))
    edgelist.write_edges(out, graph.edges(),
                         comment=f"family={args.family} {param_text} seed={args.seed}")
    sidecar = dict(family=args.family, params=params, seed=args.seed, **truth.as_dict())
    with open(f"{out}.json", "w", encoding="ascii") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    _say(args, f"wrote {out} ({truth.m} edges) and {out}.json")
    return 0


def cmd_exact(args) -> int:
    g = Graph.from_file(args.path)
    result = {
        "T": triangles_exact_cn(g),
        "kappa": degeneracy(g),
        "d_E": sum_edge_degrees(g),
        "m": g.m,
        "n": g.n,
    }
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(result.keys())
        writer.writerow(result.values())
        _emit(buf.getvalue())
    else:
        _emit(json.dumps(result))
    return 0


def _dump_tables(args, report: RunReport) -> None:
    entries = []
    for rep_index, table in enumerate(report.tables):
        for tri, edge in table.items():
            entries.append({
                "repetition": rep_index,
                "triangle": list(tri),
                "edge": list(edge) if edge is not None else None,
            })
    print("assignments: " + json.dumps(entries), file=sys.stderr)


def _run_main_mode(args) -> tuple[RunReport, dict]:
    stream = EdgeStream.from_file(args.path, order_seed=args.order_seed)
    config = EstimatorConfig(
        epsilon=args.epsilon,
        t_hat=args.t_hat,
        kappa_hat=args.kappa_hat,
        repetitions=args.repetitions,
        seed=args.seed,
        scale=args.scale,
        share_passes=args.share_passes,
        abort_multiplier=args.abort_multiplier,
    )
    value, report = estimate(stream, config)
    if args.auto_t_hat:
        # experimental geometric restart: halve the bound until the estimate
        # clears it; no accuracy guarantee attaches to this loop
        while value < config.t_hat and config.t_hat > 1:
            config = dataclasses.replace(config, t_hat=max(1, config.t_hat // 2))
            value, report = estimate(stream, config)
        if "auto-t-hat" not in report.flags:
            report.flags = tuple(report.flags) + ("auto-t-hat",)
    _say(args, f"passes including stats: {stream.pass_counter}")
    if report.flags:
        _say(args, "flags: " + ",".join(report.flags))
    return report, {}


def _run_ideal_mode(args) -> tuple[RunReport, dict]:
    graph = Graph.from_file(args.path)
    # stream the dense-relabelled edges so oracle lookups line up
    stream = EdgeStream.from_edges(graph.edge_list(), order_seed=args.order_seed)
    oracle = DegreeOracle(graph)
    value, ideal_report = ideal_estimate(
        stream, oracle, epsilon=args.epsilon, t_hat=args.t_hat, seed=args.seed)
    _say(args, f"passes including stats: {stream.pass_counter}")
    report = RunReport(
        estimate=value,
        passes=ideal_report.passes,
        stored_edges_peak=ideal_report.instances,
        r=ideal_report.instances,
        ell=0,
        s=0,
        assignment_calls=ideal_report.closure_hits,
        memo_size=0,
        seed=args.seed,
        config={
            "mode": "ideal",
            "epsilon": args.epsilon,
            "t_hat": args.t_hat,
            "groups": ideal_report.groups,
            "group_size": ideal_report.group_size,
        },
    )
    return report, {"oracle_queries": ideal_report.oracle_queries}


def cmd_estimate(args) -> int:
    if args.mode == "main" and args.kappa_hat is None:
        raise ConfigError("--kappa-hat is required in main mode")
    report, extra = (_run_main_mode(args) if args.mode == "main"
                     else _run_ideal_mode(args))
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(_ESTIMATE_CSV_HEADER)
        writer.writerow([getattr(report, k) for k in _ESTIMATE_CSV_HEADER])
        _emit(buf.getvalue())
    else:
        payload = report.to_json_dict()
        payload.update(extra)
        _emit(json.dumps(payload))
    if args.debug_dump_assignments:
        _dump_tables(args, report)
    return 0


def _load_manifest(path) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise EdgeListError(f"manifest is not valid JSON: {exc}") from None
    if isinstance(doc, dict):
        doc = doc.get("rows")
    if not isinstance(doc, list):
        raise ConfigError("manifest must be a list of rows or {'rows': [...]}")
    for i, row in enumerate(doc):
        if not isinstance(row, dict):
            raise ConfigError(f"manifest row {i} is not an object")
        for name in ("family", "params", "config"):
            if name not in row:
                raise ConfigError(f"manifest row {i} is missing {name!r}")
    return doc


def cmd_bench(args) -> int:
    rows = _load_manifest(args.manifest)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(_BENCH_HEADER)
    for entry in rows:
        family = entry["family"]
        params = entry["params"]
        cfg = entry["config"]
        trials = int(entry.get("trials", 1))
        base_seed = int(entry.get("seed", args.seed))
        graph, truth = generate_family(family, params, base_seed)
        edges = graph.edge_list()
        t_hat = cfg.get("t_hat", "exact")
        kappa_hat = cfg.get("kappa_hat", "exact")
        t_hat = truth.triangles if t_hat == "exact" else int(t_hat)
        kappa_hat = truth.kappa if kappa_hat == "exact" else int(kappa_hat)
        for trial in range(trials):
            seed = base_seed + trial
            config = EstimatorConfig(
                epsilon=float(cfg["epsilon"]),
                t_hat=max(1, t_hat),
                kappa_hat=max(1, kappa_hat),
                repetitions=int(cfg.get("repetitions", 1)),
                seed=seed,
                scale=float(cfg.get("scale", 1.0)),
                share_passes=bool(cfg.get("share_passes", False)),
            )
            stream = EdgeStream.from_edges(edges, order_seed=seed)
            started = time.perf_counter()
            value, report = estimate(stream, config)
            elapsed_ms = 0.0 if args.fixed_clock else (time.perf_counter() - started) * 1e3
            rel = (abs(value - truth.triangles) / truth.triangles
                   if truth.triangles > 0 else "")
            writer.writerow([
                family, truth.n, truth.m, truth.triangles, truth.kappa,
                config.epsilon, config.t_hat, config.kappa_hat, value, rel,
                report.passes, report.stored_edges_peak, report.r, report.ell,
                report.s, seed, elapsed_ms,
            ])
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
        _say(args, f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset copy of a global flag from
    # clobbering the value parsed before the subcommand
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="base RNG seed (TRIAD_SEED)")
    shared.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS,
                        help="output format where applicable (TRIAD_FORMAT)")
    shared.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress stderr diagnostics (TRIAD_QUIET)")

    parser = argparse.ArgumentParser(prog="triad", parents=[shared],
                                     description="streaming triangle counting toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", parents=[shared],
                           help="write a generated graph and its ground-truth sidecar")
    p_gen.add_argument("family", choices=("wheel", "book", "lb", "pa", "er"))
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--k", type=int)
    p_gen.add_argument("--p", type=int)
    p_gen.add_argument("--q", type=int)
    p_gen.add_argument("--N", type=int)
    p_gen.add_argument("--kind", choices=("yes", "no"))
    p_gen.add_argument("--shared", type=int)
    p_gen.add_argument("--attach", type=int)
    p_gen.add_argument("--prob", type=float)
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_gen)

    p_exact = sub.add_parser("exact", parents=[shared],
                             help="exact T, degeneracy, and edge-degree totals")
    p_exact.add_argument("path")
    p_exact.set_defaults(func=cmd_exact)

    p_est = sub.add_parser("estimate", parents=[shared],
                           help="run a streaming estimate and print its report")
    p_est.add_argument("path")
    p_est.add_argument("--mode", choices=("ideal", "main"), default="main")
    p_est.add_argument("--epsilon", type=float, required=True)
    p_est.add_argument("--t-hat", type=int, required=True)
    p_est.add_argument("--kappa-hat", type=int, default=None)
    p_est.add_argument("--repetitions", type=int, default=1)
    p_est.add_argument("--scale", type=float, default=1.0)
    p_est.add_argument("--share-passes", action="store_true")
    p_est.add_argument("--abort-multiplier", type=float, default=10.0)
    p_est.add_argument("--order-seed", type=int, default=None,
                       help="shuffle the stream order with this seed")
    p_est.add_argument("--auto-t-hat", action="store_true",
                       help="experimental: halve t-hat until the estimate clears it")
    p_est.add_argument("--debug-dump-assignments", action="store_true",
                       help="dump memoized triangle assignments to stderr")
    p_est.set_defaults(func=cmd_estimate)

    p_bench = sub.add_parser("bench", parents=[shared],
                             help="run a benchmark manifest and emit CSV rows")
    p_bench.add_argument("manifest")
    p_bench.add_argument("--out")
    p_bench.add_argument("--fixed-clock", action="store_true", default=None,
                         help="write 0 for wall_time_ms so outputs are reproducible")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _env_default("SEED", int, 0)
    if getattr(args, "format", None) is None:
        args.format = _env_default("FORMAT", str, "json")
    if getattr(args, "quiet", None) is None:
        args.quiet = _env_flag("QUIET")
    if args.command == "bench" and args.fixed_clock is None:
        args.fixed_clock = _env_flag("FIXED_CLOCK")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"triad: config error: {exc}", file=sys.stderr)
        return 2
    except EdgeListError as exc:
        print(f"triad: parse error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"triad: config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"triad: cannot read input: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
