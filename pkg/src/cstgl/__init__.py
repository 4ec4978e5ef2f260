"""Multi-view clustering by tensor graph fusion with consistent, specific and noise parts."""

from .clustering import FusedGraph, fuse_graphs, kmeans, spectral_cluster
from .data import MultiViewDataset, load_dataset, save_dataset, synth_dataset
from .experiment import RunConfig, grid_search, run_experiment
from .metrics import MetricsReport, evaluate
from .solver import Hyperparams, SolverOutput, run

__all__ = [
    "FusedGraph",
    "Hyperparams",
    "MetricsReport",
    "MultiViewDataset",
    "RunConfig",
    "SolverOutput",
    "evaluate",
    "fuse_graphs",
    "grid_search",
    "kmeans",
    "load_dataset",
    "run",
    "run_experiment",
    "save_dataset",
    "spectral_cluster",
    "synth_dataset",
]
