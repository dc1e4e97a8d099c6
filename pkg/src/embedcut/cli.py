"""Command-line pipeline: embeddings -> graph -> clusters -> evaluation.

Subcommands: cluster, calibrate, compare, stats, oracle. Exit codes:
0 success, 2 usage or input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import InputError
from .embedspace import cosine_similarities, load_embeddings
from .graphbuild import BIAS_SIGNS, CalibrationTerm, build_graph, load_edge_list
from .multicut import (
    SOLVER_MODES,
    read_clustering_csv,
    solve,
    solve_exact,
    write_clustering_csv,
)
from .metrics import (
    align_partitions,
    cluster_stats,
    overlap_analysis,
    variation_of_information,
    write_overlap_csv,
)
from .calibrate import (
    CalibrationRun,
    LabeledDataset,
    ablate,
    select_cal,
    validate_cal,
    write_ablation_csv,
)


def _report_json(report, cal) -> dict:
    return {
        "solver": report.solver,
        "cal": cal,
        "cost": report.cost,
        "num_clusters": report.partition.k,
        "iterations": report.iterations,
        "runtime_ms": report.runtime_ms,
    }


def parse_grid(spec: str) -> list[float]:
    """`lo:hi:step` -> inclusive list of grid values."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be lo:hi:step, got {spec!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"grid must be three numbers lo:hi:step, got {spec!r}") from None
    if step <= 0:
        raise InputError(f"grid step must be > 0, got {step}")
    if hi < lo:
        raise InputError(f"grid upper bound {hi} below lower bound {lo}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(count)]


def cmd_cluster(args) -> int:
    cal = CalibrationTerm(args.cal)
    emb = load_embeddings(args.embeddings, args.format)
    sim = cosine_similarities(emb, threads=args.threads)
    graph = build_graph(sim, cal, args.bias_sign)
    report = solve(graph, args.solver)

    prefix = Path(args.out_prefix)
    write_clustering_csv(f"{prefix}.clusters.csv", emb.items, report.partition)
    payload = _report_json(report, cal.value)
    with open(f"{prefix}.report.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(json.dumps(payload))
    return 0


def cmd_calibrate(args) -> int:
    emb = load_embeddings(args.embeddings, args.format)
    labels = LabeledDataset.from_csv(args.labels)
    grid = parse_grid(args.grid)
    runs = ablate(
        emb, labels, grid, mode=args.solver, bias_sign=args.bias_sign, threads=args.threads
    )
    selected = select_cal(runs)

    prefix = Path(args.out_prefix)
    write_ablation_csv(f"{prefix}.ablation.csv", runs)
    selection = {"selected_cal": selected.cal, "train": selected.to_json_dict()}
    if args.val_embeddings:
        if not args.val_labels:
            raise InputError("--val-labels is required with --val-embeddings")
        emb_val = load_embeddings(args.val_embeddings, args.format)
        labels_val = LabeledDataset.from_csv(args.val_labels)
        val_run = validate_cal(
            emb_val, labels_val, CalibrationTerm(selected.cal),
            mode=args.solver, bias_sign=args.bias_sign,
        )
        selection["validation"] = val_run.to_json_dict()
        selection["vi_train"] = selected.vi
        selection["vi_val"] = val_run.vi
    with open(f"{prefix}.selection.json", "w", encoding="utf-8") as fh:
        json.dump(selection, fh, indent=2)
        fh.write("\n")
    print(json.dumps(selection))
    return 0


def cmd_compare(args) -> int:
    items_a, part_a = read_clustering_csv(args.clustering_a)
    items_b, part_b = read_clustering_csv(args.clustering_b)
    pa, pb = align_partitions(items_a, part_a, items_b, part_b)
    report = variation_of_information(pa, pb)
    overlap = overlap_analysis(pa, pb, args.containment_threshold)
    payload = report.to_json_dict()
    print(json.dumps(payload))
    if args.out_prefix:
        prefix = Path(args.out_prefix)
        with open(f"{prefix}.compare.json", "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        write_overlap_csv(f"{prefix}.overlap.csv", overlap)
    return 0


def cmd_stats(args) -> int:
    _items, partition = read_clustering_csv(args.clustering)
    print(json.dumps(cluster_stats(partition).to_json_dict()))
    return 0


def cmd_oracle(args) -> int:
    graph = load_edge_list(args.edge_list)
    exact = solve_exact(graph)
    heur = solve(graph, args.heuristic)
    payload = {
        "n": graph.n,
        "heuristic": args.heuristic,
        "exact_cost": exact.cost,
        "heuristic_cost": heur.cost,
        "gap": heur.cost - exact.cost,
        "exact_num_clusters": exact.partition.k,
        "heuristic_num_clusters": heur.partition.k,
    }
    print(json.dumps(payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embedcut",
        description="Correlation clustering of embedding spaces via minimum cost multicut heuristics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="embed file -> clustering CSV + solve report JSON")
    p.add_argument("embeddings", help="EMB1 binary or CSV embedding file")
    p.add_argument("--format", choices=("auto", "binary", "csv"), default="auto")
    p.add_argument("--cal", type=float, default=0.5, help="calibration term in (0,1)")
    p.add_argument("--solver", choices=SOLVER_MODES, default="gaec-kl")
    p.add_argument("--bias-sign", choices=BIAS_SIGNS, default="paper")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("calibrate", help="sweep the calibration term against labels")
    p.add_argument("embeddings")
    p.add_argument("labels", help="CSV with header id,label")
    p.add_argument("--format", choices=("auto", "binary", "csv"), default="auto")
    p.add_argument("--grid", default="0.1:0.9:0.1", help="lo:hi:step, default 0.1:0.9:0.1")
    p.add_argument("--solver", choices=SOLVER_MODES, default="gaec-kl")
    p.add_argument("--bias-sign", choices=BIAS_SIGNS, default="paper")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--val-embeddings", help="held-out embeddings scored at the selected cal")
    p.add_argument("--val-labels")
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", help="VI and overlap between two clustering CSVs")
    p.add_argument("clustering_a")
    p.add_argument("clustering_b")
    p.add_argument("--containment-threshold", type=float, default=0.8)
    p.add_argument("--out-prefix", help="also write <prefix>.compare.json and <prefix>.overlap.csv")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="cluster-size statistics of a clustering CSV")
    p.add_argument("clustering")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("oracle", help="exact vs heuristic cost on a small edge-list graph")
    p.add_argument("edge_list", help="text file, one 'u v w' edge per line, # comments")
    p.add_argument("--heuristic", choices=SOLVER_MODES, default="gaec-kl")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
