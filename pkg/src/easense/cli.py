"""Command-line interface: run experiments and emit reports from a store."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import hyperspace as hs
from .problems import MOO_NAMES, SOO_NAMES
from .runner import (
    ExperimentConfig,
    emit_bins,
    emit_stats,
    run_experiment,
    _load_store,
)


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    result = run_experiment(config, cell_limit=args.cell_limit)
    status = "complete" if result.complete else "partial (resumable)"
    print(f"store: {result.store}  [{status}]")
    print(f"cells evaluated: {result.cells_evaluated}, "
          f"skipped: {result.cells_skipped}, failures: {result.failures}")
    for metric, report in result.reports.items():
        ranked = ", ".join(report.ranked_names())
        print(f"{config.method}/{metric} ranking: {ranked}")
    return 0


def _cmd_report(args) -> int:
    store, config, _, _, _ = _load_store(args.store)
    wanted_method = args.method or config.method
    reports = {}
    for metric in (args.metric,) if args.metric else config.metrics:
        path = store / f"indices_{wanted_method}_{metric}.csv"
        if not path.exists():
            print(f"missing {path}", file=sys.stderr)
            return 1
        print(f"== {wanted_method} / {metric} ==")
        print(path.read_text().rstrip())
        reports[metric] = path
    return 0


def _cmd_bins(args) -> int:
    path = emit_bins(args.store, args.param, metric=args.metric,
                     bins=args.bins, sigma=args.sigma)
    print(path)
    return 0


def _cmd_stats(args) -> int:
    ttests, clusters = emit_stats(args.store, seed=args.seed)
    print(ttests)
    print(clusters)
    return 0


def _cmd_presets(args) -> int:
    for name in hs.PRESET_NAMES:
        space = hs.preset(name)
        print(f"{name}: k={space.k}")
        for p in space.params:
            if p.categories is not None:
                print(f"  {p.name}: {list(p.categories)}")
            else:
                print(f"  {p.name}: [{p.lower}, {p.upper}] ({p.kind})")
    print("single-objective problems:", ", ".join(SOO_NAMES))
    print("multi-objective problems:", ", ".join(MOO_NAMES))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="easense",
        description="Sensitivity analysis of evolutionary-algorithm hyperparameters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--cell-limit", type=int, default=None,
                       help="stop after this many new cells (resumable)")
    p_run.set_defaults(func=_cmd_run)

    p_rep = sub.add_parser("report", help="print sensitivity indices from a store")
    p_rep.add_argument("store", type=Path)
    p_rep.add_argument("--metric", default=None)
    p_rep.add_argument("--method", default=None)
    p_rep.set_defaults(func=_cmd_report)

    p_bins = sub.add_parser("bins", help="binned mean-score curve for one parameter")
    p_bins.add_argument("store", type=Path)
    p_bins.add_argument("--param", required=True)
    p_bins.add_argument("--metric", default=None)
    p_bins.add_argument("--bins", type=int, default=None)
    p_bins.add_argument("--sigma", type=float, default=None)
    p_bins.set_defaults(func=_cmd_bins)

    p_stats = sub.add_parser("stats", help="t-tests and clustering from a store")
    p_stats.add_argument("store", type=Path)
    p_stats.add_argument("--seed", type=int, default=0)
    p_stats.set_defaults(func=_cmd_stats)

    p_presets = sub.add_parser("presets", help="list hyperspaces and problems")
    p_presets.set_defaults(func=_cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
