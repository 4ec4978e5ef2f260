"""Multi-view datasets: CSV directory layout and a Gaussian-blob generator.

On disk a dataset is a directory holding ``view_1.csv ... view_m.csv`` (one
sample per row, headerless) and optionally ``labels.csv`` (one integer per
line). In memory views are stored ``d_v x n``, one sample per column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    pass


class MissingViews(DatasetError):
    pass


class InconsistentSampleCount(DatasetError):
    pass


class ParseError(DatasetError):
    pass


@dataclass
class MultiViewDataset:
    views: list[np.ndarray]
    labels: np.ndarray | None = None
    name: str = "dataset"

    def __post_init__(self):
        if not self.views:
            raise MissingViews("a dataset needs at least one view")
        self.views = [np.asarray(v, dtype=float) for v in self.views]
        counts = {v.shape[1] for v in self.views}
        if len(counts) != 1:
            raise InconsistentSampleCount(f"views disagree on sample count: {sorted(counts)}")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int).ravel()
            if self.labels.size != self.n:
                raise InconsistentSampleCount(
                    f"{self.labels.size} labels for {self.n} samples"
                )
            if np.unique(self.labels).size < 2:
                raise DatasetError("labels must contain at least two classes")

    @property
    def n(self) -> int:
        return self.views[0].shape[1]

    @property
    def m(self) -> int:
        return len(self.views)

    @property
    def n_classes(self) -> int | None:
        return None if self.labels is None else int(np.unique(self.labels).size)


def _read_matrix(path: Path) -> np.ndarray:
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                row = [float(x) for x in line.split(",")]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
            rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.array(rows)


def read_labels(path) -> np.ndarray:
    path = Path(path)
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(int(line))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not an integer: {line!r}") from None
    return np.array(out, dtype=int)


def write_labels(path, labels) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(f"{int(x)}\n" for x in np.ravel(labels))


def write_matrix(path, rows: np.ndarray) -> None:
    # repr of a Python float is the shortest string that round-trips exactly
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.atleast_2d(rows):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def _view_index(path: Path) -> int:
    return int(re.fullmatch(r"view_(\d+)\.csv", path.name).group(1))


def load_dataset(dir_path) -> MultiViewDataset:
    root = Path(dir_path)
    files = sorted(
        (p for p in root.glob("view_*.csv") if re.fullmatch(r"view_\d+\.csv", p.name)),
        key=_view_index,
    )
    if not files:
        raise MissingViews(f"no view_*.csv files in {root}")
    mats = [_read_matrix(p) for p in files]
    counts = [m.shape[0] for m in mats]
    if len(set(counts)) != 1:
        detail = ", ".join(f"{p.name}={c}" for p, c in zip(files, counts))
        raise InconsistentSampleCount(f"row counts differ: {detail}")
    labels_path = root / "labels.csv"
    labels = read_labels(labels_path) if labels_path.exists() else None
    return MultiViewDataset([m.T for m in mats], labels, root.name)


def save_dataset(ds: MultiViewDataset, dir_path) -> Path:
    root = Path(dir_path)
    root.mkdir(parents=True, exist_ok=True)
    for i, view in enumerate(ds.views, 1):
        write_matrix(root / f"view_{i}.csv", view.T)
    if ds.labels is not None:
        write_labels(root / "labels.csv", ds.labels)
    return root


def synth_dataset(
    n_per_cluster: int,
    c: int,
    m: int,
    d: int,
    noise_sigma: float,
    seed: int = 0,
) -> MultiViewDataset:
    """Gaussian blobs with one shared cluster assignment and independent centers per view."""
    if min(n_per_cluster, m, d) < 1 or c < 2 or noise_sigma < 0:
        raise ValueError("invalid synthetic dataset parameters")
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(c), n_per_cluster)
    views = []
    for _ in range(m):
        centers = rng.standard_normal((c, d))
        points = centers[labels] + noise_sigma * rng.standard_normal((labels.size, d))
        views.append(points.T)
    return MultiViewDataset(views, labels, f"synth-c{c}-m{m}-d{d}-s{noise_sigma:g}-seed{seed}")
