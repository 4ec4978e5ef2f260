"""Experiment orchestration: solve, fuse, cluster, score, and write a JSON result."""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import clustering, metrics, solver
from .data import MultiViewDataset, write_matrix

SCHEMA_VERSION = 1
METRIC_NAMES = ("acc", "nmi", "ari", "fscore")


class ConfigError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"[{stage}] {type(exc).__name__}: {exc}")
        self.stage = stage


@dataclass
class RunConfig:
    hyperparams: solver.Hyperparams = field(default_factory=solver.Hyperparams)
    normalize_samples: bool = True
    cluster_count: int | None = None
    output_path: str | None = None
    export_affinity: bool = False
    trials: int = 10

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        raw = dict(raw)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        hp = raw.pop("hyperparams", {}) or {}
        try:
            raw["hyperparams"] = solver.Hyperparams(**hp)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad hyperparams: {exc}") from None
        return cls(**raw)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def resolve_cluster_count(dataset: MultiViewDataset, config: RunConfig) -> int:
    if config.cluster_count is not None:
        return config.cluster_count
    if dataset.labels is None:
        raise ConfigError("dataset has no labels; a cluster count is required")
    return dataset.n_classes


def _affinity_path(config: RunConfig) -> Path:
    if config.output_path is None:
        return Path("affinity.csv")
    out = Path(config.output_path)
    return out.with_name(out.stem + ".affinity.csv")


def run_experiment(dataset: MultiViewDataset, config: RunConfig, write: bool = True) -> dict:
    """Run the full pipeline with ``config.trials`` clustering seeds.

    The solver has no random component, so it runs once; trial ``t`` reruns
    spectral clustering with seed ``hyperparams.seed + t``.
    """
    c = resolve_cluster_count(dataset, config)
    if config.trials < 1:
        raise ConfigError("trials must be at least 1")
    params = config.hyperparams
    start = time.perf_counter()
    out = _stage("solve", solver.run, dataset.views, params, config.normalize_samples)
    fused = _stage("fuse", clustering.fuse_graphs, out.S1, out.S2)
    trials = []
    for t in range(config.trials):
        seed = params.seed + t
        labels = _stage("cluster", clustering.spectral_cluster, fused, c, seed)
        report = None
        if dataset.labels is not None:
            report = _stage("metrics", metrics.evaluate, labels, dataset.labels).to_dict()
        trials.append({"seed": seed, "metrics": report, "labels": labels.tolist()})
    elapsed = time.perf_counter() - start

    mean = std = None
    if dataset.labels is not None:
        table = np.array([[tr["metrics"][k] for k in METRIC_NAMES] for tr in trials])
        mean = dict(zip(METRIC_NAMES, table.mean(axis=0).tolist()))
        std = dict(zip(METRIC_NAMES, table.std(axis=0).tolist()))

    affinity_file = None
    if config.export_affinity and write:
        affinity_file = _affinity_path(config)
        affinity_file.parent.mkdir(parents=True, exist_ok=True)
        write_matrix(affinity_file, fused.S_af)

    result = {
        "schema_version": SCHEMA_VERSION,
        "dataset": {
            "name": dataset.name,
            "n": dataset.n,
            "m": dataset.m,
            "dims": [v.shape[0] for v in dataset.views],
        },
        "config": config.to_dict(),
        "cluster_count": c,
        "converged": out.converged,
        "iterations": out.iterations,
        "residual_history": [
            {"iter": i + 1, **asdict(r)} for i, r in enumerate(out.residual_history)
        ],
        "trials": trials,
        "mean": mean,
        "std": std,
        "wall_time_s": elapsed,
        "affinity_path": None if affinity_file is None else str(affinity_file),
    }
    if write and config.output_path is not None:
        write_result(result, config.output_path)
    return result


def write_result(result: dict, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(result, indent=2), encoding="utf-8")


def _grid_cell(dataset, config, alpha, beta, gamma):
    hp = replace(config.hyperparams, alpha=alpha, beta=beta, gamma=gamma)
    cell = replace(config, hyperparams=hp, export_affinity=False, output_path=None)
    res = run_experiment(dataset, cell, write=False)
    return {
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "iterations": res["iterations"],
        "converged": res["converged"],
        "mean": res["mean"],
    }


def grid_search(
    dataset: MultiViewDataset,
    alphas,
    betas,
    gammas,
    config: RunConfig | None = None,
    workers: int = 1,
) -> dict:
    """Evaluate every (alpha, beta, gamma) combination and report the best mean ACC."""
    config = config or RunConfig()
    if dataset.labels is None:
        raise ConfigError("grid search scores configurations and needs ground-truth labels")
    if not (alphas and betas and gammas):
        raise ConfigError("alpha, beta and gamma grids must be non-empty")
    combos = list(itertools.product(alphas, betas, gammas))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_grid_cell, dataset, config, *abg) for abg in combos]
            rows = [f.result() for f in futures]
    else:
        rows = [_grid_cell(dataset, config, *abg) for abg in combos]
    best = max(rows, key=lambda r: r["mean"]["acc"])
    result = {
        "schema_version": SCHEMA_VERSION,
        "dataset": {"name": dataset.name, "n": dataset.n, "m": dataset.m},
        "config": config.to_dict(),
        "rows": rows,
        "best": best,
    }
    if config.output_path is not None:
        write_result(result, config.output_path)
    return result
