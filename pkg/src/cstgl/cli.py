"""Command line entry point: ``run``, ``synth``, ``grid`` and ``eval``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import metrics
from .data import DatasetError, load_dataset, read_labels, save_dataset, synth_dataset
from .experiment import ConfigError, PipelineError, RunConfig, grid_search, run_experiment

HYPER_FLAGS = {
    "alpha": float,
    "beta": float,
    "gamma": float,
    "mu": float,
    "rho0": float,
    "rho_max": float,
    "k_neighbors": int,
    "tol": float,
    "max_iter": int,
    "seed": int,
}


GRID_FLAGS = ("alpha", "beta", "gamma")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _add_common(p: argparse.ArgumentParser, skip: tuple[str, ...] = ()) -> None:
    p.add_argument("--data", required=True, help="dataset directory (view_*.csv, labels.csv)")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--output", help="result JSON path (default: stdout)")
    p.add_argument("--clusters", type=int, help="cluster count (default: number of classes)")
    p.add_argument("--trials", type=int)
    p.add_argument("--no-normalize", action="store_true", help="skip unit-norm sample scaling")
    for name, typ in HYPER_FLAGS.items():
        if name not in skip:
            p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cstgl", description=__doc__)
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress per-iteration logs")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve, cluster and score one configuration")
    _add_common(run)
    run.add_argument("--export-affinity", action="store_true", help="also write S_af as CSV")

    synth = sub.add_parser("synth", help="write a synthetic multi-view blob dataset")
    synth.add_argument("--out", required=True)
    synth.add_argument("--clusters", type=int, default=3)
    synth.add_argument("--per-cluster", type=int, default=30)
    synth.add_argument("--views", type=int, default=3)
    synth.add_argument("--dim", type=int, default=20)
    synth.add_argument("--sigma", type=float, default=0.2)
    synth.add_argument("--seed", type=int, default=0)

    grid = sub.add_parser("grid", help="grid search over alpha, beta, gamma")
    _add_common(grid, skip=GRID_FLAGS)
    default = "1e-3,1e-2,1e-1,1,10,100,1000"
    grid.add_argument("--alpha", type=_float_list, default=_float_list(default))
    grid.add_argument("--beta", type=_float_list, default=_float_list(default))
    grid.add_argument("--gamma", type=_float_list, default=_float_list(default))
    grid.add_argument("--workers", type=int, default=1)

    ev = sub.add_parser("eval", help="score predicted labels against ground truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    return parser


def _config_from_args(args) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    swept = GRID_FLAGS if args.command == "grid" else ()
    overrides = {
        k: getattr(args, k) for k in HYPER_FLAGS if k not in swept and getattr(args, k, None) is not None
    }
    try:
        hp = replace(config.hyperparams, **overrides)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    config = replace(config, hyperparams=hp)
    if args.output:
        config.output_path = args.output
    if args.clusters is not None:
        config.cluster_count = args.clusters
    if args.trials is not None:
        config.trials = args.trials
    if args.no_normalize:
        config.normalize_samples = False
    if getattr(args, "export_affinity", False):
        config.export_affinity = True
    return config


def _emit(result: dict, config: RunConfig) -> None:
    if config.output_path is None:
        json.dump(result, sys.stdout, indent=2)
        sys.stdout.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        stream=sys.stderr,
        format="%(name)s %(message)s",
    )
    stage = args.command
    try:
        if args.command == "synth":
            ds = synth_dataset(args.per_cluster, args.clusters, args.views, args.dim, args.sigma, args.seed)
            save_dataset(ds, args.out)
            print(json.dumps({"out": args.out, "n": ds.n, "m": ds.m, "name": ds.name}))
        elif args.command == "eval":
            report = metrics.evaluate(read_labels(args.pred), read_labels(args.truth))
            print(json.dumps(report.to_dict()))
        else:
            stage = "config"
            config = _config_from_args(args)
            stage = "load"
            ds = load_dataset(args.data)
            stage = args.command
            if args.command == "run":
                _emit(run_experiment(ds, config), config)
            else:
                _emit(grid_search(ds, args.alpha, args.beta, args.gamma, config, args.workers), config)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, DatasetError, OSError, ValueError) as exc:
        print(f"error: [{stage}] {exc}", file=sys.stderr)
        return 2 if stage == "config" or isinstance(exc, ConfigError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
