"""Graph fusion and spectral clustering of the fused affinity."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .tensor import DimensionMismatch


class DegenerateDegreeWarning(RuntimeWarning):
    """An isolated node was found while building the normalized Laplacian."""


@dataclass(frozen=True)
class FusedGraph:
    S_a: np.ndarray
    S_af: np.ndarray


def fuse_graphs(S1: np.ndarray, S2: np.ndarray) -> FusedGraph:
    """Average ``S1 + S2`` over views, then symmetrize."""
    S1, S2 = np.asarray(S1, dtype=float), np.asarray(S2, dtype=float)
    if S1.shape != S2.shape or S1.ndim != 3 or S1.shape[0] != S1.shape[1]:
        raise DimensionMismatch(f"expected matching (n, n, m) tensors, got {S1.shape} and {S2.shape}")
    S_a = (S1 + S2).mean(axis=2)
    S_af = (S_a + S_a.T) / 2.0
    if not np.all(np.isfinite(S_af)):
        raise FloatingPointError("fused graph has non-finite entries")
    return FusedGraph(S_a, S_af)


def _lloyd(points, centers, max_iter=300, rtol=1e-9):
    prev = np.inf
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        dmin = d2[np.arange(len(points)), labels]
        # empty clusters take the point currently farthest from its center
        for j in range(len(centers)):
            if not np.any(labels == j):
                far = int(dmin.argmax())
                labels[far] = j
                dmin[far] = 0.0
        centers = np.stack([points[labels == j].mean(axis=0) for j in range(len(centers))])
        inertia = float(((points - centers[labels]) ** 2).sum())
        if prev - inertia <= rtol * max(prev, 1e-300) or inertia == 0.0:
            break
        prev = inertia
    return labels, centers, inertia


def _farthest_point_seeds(points, c, rng):
    idx = [int(rng.integers(len(points)))]
    d2 = ((points - points[idx[0]]) ** 2).sum(axis=1)
    for _ in range(1, c):
        nxt = int(d2.argmax())
        idx.append(nxt)
        d2 = np.minimum(d2, ((points - points[nxt]) ** 2).sum(axis=1))
    return points[idx].copy()


def kmeans(points: np.ndarray, c: int, seed: int = 0, restarts: int = 20) -> tuple[np.ndarray, float]:
    """Lloyd's algorithm, best of ``restarts`` farthest-point seedings.

    Restart ``r`` draws its first center with seed ``seed + r``. Returns labels and inertia.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if not 1 <= c <= len(points):
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={len(points)}")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        labels, _, inertia = _lloyd(points, _farthest_point_seeds(points, c, rng))
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    return best


def spectral_embedding(affinity: np.ndarray, c: int) -> np.ndarray:
    W = np.maximum(np.asarray(affinity, dtype=float), 0.0)
    deg = W.sum(axis=1)
    isolated = deg <= 0
    if np.any(isolated):
        warnings.warn(
            f"{int(isolated.sum())} isolated node(s); assigned by nearest centroid",
            DegenerateDegreeWarning,
            stacklevel=3,
        )
    inv_sqrt = np.zeros_like(deg)
    inv_sqrt[~isolated] = 1.0 / np.sqrt(deg[~isolated])
    L = np.eye(len(W)) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    L = (L + L.T) / 2.0
    _, vecs = eigh(L, subset_by_index=[0, c - 1])
    norms = np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs / np.where(norms > 0, norms, 1.0)


def spectral_cluster(affinity, c: int, seed: int = 0, restarts: int = 20) -> np.ndarray:
    """Normalized spectral clustering; negative affinities are clamped to zero first."""
    S_af = affinity.S_af if isinstance(affinity, FusedGraph) else np.asarray(affinity, dtype=float)
    n = len(S_af)
    if not 2 <= c <= n:
        raise ValueError(f"need 2 <= c <= n, got c={c}, n={n}")
    labels, _ = kmeans(spectral_embedding(S_af, c), c, seed, restarts)
    return labels
