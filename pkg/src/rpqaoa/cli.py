"""Command-line interface: sweeps, scans, verification, fits and exports."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .enumeration import enumerate_connected_graphs
from .errors import RpqaoaError
from .graph6 import encode_graph6, write_graph6
from .metrics import (
    METHOD_ANALYTIC,
    METHODS,
    read_records_jsonl,
    record_to_json_dict,
    write_records_jsonl,
)
from .plotting import plot_summary_csv
from .problems import instance_to_record
from .sweep import (
    DEPTH_SCAN_COLUMNS,
    FAMILIES,
    FAMILY_MAXCUT,
    SweepConfig,
    build_tasks,
    counterexample_search,
    depth_scan,
    fit_records,
    generate_graph_corpus,
    generate_instances,
    run_sweep,
    summarize_records,
    write_summary_csv,
)
from .verify import run_verification


def _summary_path(out: Path) -> Path:
    return out.with_suffix(".summary.csv") if out.suffix == ".jsonl" else Path(str(out) + ".summary.csv")


def _build_sweep_config(args) -> SweepConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "n": args.n,
        "graph6_path": args.graph6,
        "family": args.family,
        "count": args.count,
        "method": args.method,
        "p": args.p,
        "samples": args.samples,
        "master_seed": args.seed,
        "jobs": args.jobs,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    if "source" not in data:
        if data.get("graph6_path"):
            data["source"] = "graph6"
        elif data.get("family"):
            data["source"] = "ensemble"
        else:
            data["source"] = "enumerate"
    return SweepConfig.from_json_dict(data).validate()


def _cmd_sweep(args) -> int:
    config = _build_sweep_config(args)
    records = run_sweep(config)
    out = Path(args.out)
    write_records_jsonl(out, records)
    rows = summarize_records(records)
    write_summary_csv(_summary_path(out), rows)
    for row in rows:
        print(
            f"n={row['n']} count={row['count']} "
            f"delta_S min/avg/max = {row['delta_s_min']:.3f}/{row['delta_s_avg']:.3f}/{row['delta_s_max']:.3f} "
            f"qmp_min median = {row['qmp_min_median']:.3f}"
        )
    print(f"wrote {len(records)} records to {out} and summary to {_summary_path(out)}")
    return 0


def _cmd_depth_scan(args) -> int:
    config = _build_sweep_config(args)
    tasks = build_tasks(config)
    p_list = [int(tok) for tok in args.p_list.split(",") if tok.strip()]
    rows = depth_scan(tasks, p_list, config.samples, config.master_seed)
    write_summary_csv(Path(args.out), rows, columns=DEPTH_SCAN_COLUMNS)
    for row in rows:
        print(f"p={row['p']} count={row['count']} qmp_min median = {row['qmp_min_median']:.3f}")
    print(f"wrote depth scan to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    results = run_verification()
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    if args.json:
        payload = [
            {
                "name": r.name,
                "passed": r.passed,
                "tolerance": r.tolerance,
                "observed": r.observed,
                "detail": r.detail,
            }
            for r in results
        ]
        Path(args.json).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _cmd_fit(args) -> int:
    records = []
    for path in args.records:
        records.extend(read_records_jsonl(path))
    report = fit_records(records, goal=args.goal)
    for row in report["per_n"]:
        print(f"n={row['n']} count={row['count']} median_T={row['median_t']:.4g}")
    print(f"slope={report['slope']:.4f} intercept={report['intercept']:.4f} goal={report['goal']}")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        print(f"wrote fit report to {args.out}")
    return 0


def _cmd_counterexample(args) -> int:
    result = counterexample_search(
        args.family, args.n_min, args.n_max, args.budget, args.seed, mc_samples=args.samples,
    )
    if result["found"]:
        print(
            f"found delta_S = {result['delta_s']:.6f} after {result['trials']} trials "
            f"(MC delta_S = {result['mc_delta_s']:.6f}, "
            f"verified = {result['verified']})"
        )
    else:
        print(
            f"exhausted {result['trials']} trials without delta_S < 0 "
            f"(minimum seen: {result['min_delta_s_seen']:.6f})"
        )
    if args.out:
        payload = dict(result)
        if "record" in payload:
            payload["record"] = record_to_json_dict(payload["record"])
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote search report to {args.out}")
    return 0


def _cmd_plot(args) -> int:
    for path in args.summaries:
        src = Path(path)
        out = Path(args.out) if args.out and len(args.summaries) == 1 else src.with_suffix(".svg")
        plot_summary_csv(src, out)
        print(f"wrote {out}")
    return 0


def _cmd_gen(args) -> int:
    out = Path(args.out)
    if args.format == "graph6":
        if args.family != FAMILY_MAXCUT:
            raise RpqaoaError("graph6 output carries unweighted graphs; use --format jsonl")
        graphs = generate_graph_corpus(args.n, args.count, args.seed, dedup=args.dedup)
        write_graph6(out, graphs)
        print(f"wrote {len(graphs)} graphs to {out}")
    else:
        tasks = generate_instances(args.family, args.n, args.count, args.seed)
        with open(out, "w", encoding="utf-8") as fh:
            for task in tasks:
                record = instance_to_record(task.instance, task.instance_id, task.seed)
                fh.write(json.dumps(record, separators=(",", ":")) + "\n")
        print(f"wrote {len(tasks)} instances to {out}")
    return 0


def _cmd_enumerate(args) -> int:
    graphs = enumerate_connected_graphs(args.n)
    if args.out:
        write_graph6(Path(args.out), graphs)
        print(f"wrote {len(graphs)} graphs to {args.out}")
    else:
        for g in graphs:
            print(encode_graph6(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpqaoa",
        description="Random-angle QAOA energy distributions: sweeps, metrics and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source_flags(p, need_out=True):
        p.add_argument("--n", type=int, default=None, help="problem size / enumeration size")
        p.add_argument("--graph6", default=None, help="graph6 corpus file to sweep")
        p.add_argument("--family", choices=FAMILIES, default=None, help="random ensemble family")
        p.add_argument("--count", type=int, default=None, help="ensemble size")
        p.add_argument("--method", choices=METHODS, default=None, help=f"default {METHOD_ANALYTIC}")
        p.add_argument("--p", type=int, default=None, help="circuit depth (mc_average only)")
        p.add_argument("--samples", type=int, default=None, help="angle samples per instance (default 200)")
        p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default 1)")
        p.add_argument("--config", default=None, help="JSON file with SweepConfig fields")
        p.add_argument("--out", required=need_out, help="output path")

    p_sweep = sub.add_parser("sweep", help="evaluate a corpus; emit JSONL records + summary CSV")
    add_source_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_scan = sub.add_parser("depth-scan", help="qmp_min percentiles per circuit depth")
    add_source_flags(p_scan)
    p_scan.add_argument("--p-list", default="1,2,3,4,5", help="comma-separated depths")
    p_scan.set_defaults(func=_cmd_depth_scan)

    p_verify = sub.add_parser("verify", help="run the cross-oracle check suite")
    p_verify.add_argument("--json", default=None, help="also write results as JSON")
    p_verify.set_defaults(func=_cmd_verify)

    p_fit = sub.add_parser("fit", help="scaling fit of measurements-to-optimum vs n")
    p_fit.add_argument("records", nargs="+", help="metrics JSONL files")
    p_fit.add_argument("--goal", type=float, default=0.99, help="target ground-level probability")
    p_fit.add_argument("--out", default=None, help="write the report as JSON")
    p_fit.set_defaults(func=_cmd_fit)

    p_ce = sub.add_parser("counterexample", help="search for instances with delta_S < 0")
    p_ce.add_argument("--family", choices=FAMILIES, required=True)
    p_ce.add_argument("--n-min", type=int, default=4)
    p_ce.add_argument("--n-max", type=int, default=8)
    p_ce.add_argument("--budget", type=int, default=100_000)
    p_ce.add_argument("--seed", type=int, default=0)
    p_ce.add_argument("--samples", type=int, default=10_000, help="MC samples for re-verification")
    p_ce.add_argument("--out", default=None, help="write the search report as JSON")
    p_ce.set_defaults(func=_cmd_counterexample)

    p_plot = sub.add_parser("plot", help="render summary CSVs as schematic SVG")
    p_plot.add_argument("summaries", nargs="+", help="summary CSV files")
    p_plot.add_argument("--out", default=None, help="output SVG (single input only)")
    p_plot.set_defaults(func=_cmd_plot)

    p_gen = sub.add_parser("gen", help="emit random ensembles (graph6 or instance JSONL)")
    p_gen.add_argument("--family", choices=FAMILIES, default=FAMILY_MAXCUT)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--count", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--format", choices=("graph6", "jsonl"), default="graph6")
    p_gen.add_argument("--dedup", action="store_true", help="drop isomorphic duplicates (graph6)")
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_enum = sub.add_parser("enumerate", help="emit all connected graphs on n vertices (n <= 7)")
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--out", default=None, help="graph6 output file (default stdout)")
    p_enum.set_defaults(func=_cmd_enumerate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RpqaoaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
