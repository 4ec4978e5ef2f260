"""Per-view neighbor graphs under the pseudo-Stiefel distance.

View matrices are ``d_v x n`` with one sample per column.
"""

from __future__ import annotations

import warnings

import numpy as np


class DegenerateRowWarning(RuntimeWarning):
    """All k+1 nearest distances tie; the row falls back to uniform weights."""


def normalize_samples(view: np.ndarray) -> np.ndarray:
    """Scale every column to unit l2 norm; zero columns are left as they are."""
    view = np.asarray(view, dtype=float)
    norms = np.linalg.norm(view, axis=0)
    norms[norms == 0] = 1.0
    return view / norms


def pseudo_stiefel_distance(view: np.ndarray) -> np.ndarray:
    """``e_ij = d_v - <x_i, x_j>`` for every pair of columns."""
    view = np.asarray(view, dtype=float)
    if view.ndim != 2 or view.shape[1] < 2:
        raise ValueError(f"view must be d x n with n >= 2, got {view.shape}")
    if not np.all(np.isfinite(view)):
        raise ValueError("view contains non-finite entries")
    gram = view.T @ view
    gram = 0.5 * (gram + gram.T)
    return view.shape[0] - gram


def init_neighbor_graph(dist: np.ndarray, k: int) -> np.ndarray:
    """Probabilistic k-nearest-neighbor graph.

    Row ``i`` puts weight proportional to ``e_(i,k+1) - e_ij`` on its ``k``
    nearest neighbors ``j != i`` (ties broken by ascending index). When the
    ``k+1`` smallest distances coincide the row is uniform over the ``k``
    neighbors instead.
    """
    dist = np.asarray(dist, dtype=float)
    n = dist.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    d = dist.copy()
    np.fill_diagonal(d, np.inf)
    order = np.argsort(d, axis=1, kind="stable")
    graph = np.zeros((n, n))
    rows = np.arange(n)[:, None]
    near = order[:, :k]
    d_near = d[rows, near]
    # with k = n - 1 there is no (k+1)-th neighbor; the farthest one plays its role
    d_next = d[rows[:, 0], order[:, k]] if k < n - 1 else d_near[:, -1]
    gaps = d_next[:, None] - d_near
    total = gaps.sum(axis=1)
    flat = total <= 0
    if np.any(flat):
        warnings.warn(
            f"{int(flat.sum())} row(s) with tied neighbor distances use uniform weights",
            DegenerateRowWarning,
            stacklevel=2,
        )
    weights = np.where(flat[:, None], 1.0 / k, gaps / np.where(flat, 1.0, total)[:, None])
    graph[rows, near] = weights
    return graph


def project_simplex_rows(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of every row of ``v`` onto the probability simplex."""
    v = np.atleast_2d(np.asarray(v, dtype=float))
    p = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(1, p + 1)
    cond = u - css / ind > 0
    # cond holds on a prefix and always at index 0
    r = p - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(v.shape[0]), r] / (r + 1)
    return np.maximum(v - theta[:, None], 0.0)


def project_simplex(v, fixed_zero: int | None = None) -> np.ndarray:
    """Projection onto the simplex, optionally pinning one coordinate to zero."""
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValueError("need a finite, non-empty vector")
    if fixed_zero is None:
        return project_simplex_rows(v)[0]
    keep = np.arange(v.size) != fixed_zero
    out = np.zeros_like(v)
    out[keep] = project_simplex_rows(v[keep])[0]
    return out


def project_rows_zero_diagonal(v: np.ndarray) -> np.ndarray:
    """Row-wise simplex projection of a square matrix with the diagonal held at 0."""
    n = v.shape[0]
    off = ~np.eye(n, dtype=bool)
    out = np.zeros_like(v, dtype=float)
    out[off] = project_simplex_rows(v[off].reshape(n, n - 1)).ravel()
    return out


def update_neighbor_graph(dist: np.ndarray, B: np.ndarray, alpha: float, rho: float) -> np.ndarray:
    """Closed-form A-update: project ``(rho*b_i - e_i) / (2*alpha + rho)`` row by row."""
    if alpha <= 0 or rho <= 0:
        raise ValueError("alpha and rho must be positive")
    return project_rows_zero_diagonal((rho * B - dist) / (2.0 * alpha + rho))


def graph_objective(dist: np.ndarray, A: np.ndarray, B: np.ndarray, alpha: float, rho: float) -> float:
    """Objective of the A-update for one view: e.a + alpha |a|^2 + rho/2 |a - b|^2 summed over rows."""
    return float(np.sum(dist * A) + alpha * np.sum(A**2) + 0.5 * rho * np.sum((A - B) ** 2))
