"""ADMM solver fusing per-view neighbor graphs into consistent, specific and noise tensors.

Every tensor variable has shape ``(n, n, m)``: frontal slice ``v`` belongs to view ``v``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import graph
from .tensor import fft_mode3, fold_mode3, ifft_mode3, tubal_shrinkage, unfold_mode3

logger = logging.getLogger(__name__)

VARIABLES = ("A", "S1", "S2", "E", "W", "K", "Q1", "Q2", "Q3")


class NonFinite(FloatingPointError):
    def __init__(self, iteration: int, variable: str):
        super().__init__(f"{variable} became non-finite at iteration {iteration}")
        self.iteration = iteration
        self.variable = variable


@dataclass
class Hyperparams:
    alpha: float = 10.0
    beta: float = 100.0
    gamma: float = 10.0
    mu: float = 2.0
    rho0: float = 0.1
    rho_max: float = 1e8
    k_neighbors: int = 10
    tol: float = 1e-6
    max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "rho0", "tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.mu > 1:
            raise ValueError("mu must exceed 1")
        if self.rho_max < self.rho0:
            raise ValueError("rho_max must be at least rho0")
        if self.k_neighbors < 1 or self.max_iter < 1:
            raise ValueError("k_neighbors and max_iter must be at least 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Residuals:
    # constraint residuals A = S1+S2+E, S1 = K, E = W, and ||S1_new - S1_old||_F^2
    r1: float
    r2: float
    r3: float
    dS1: float
    rho: float

    def as_tuple(self):
        return (self.r1, self.r2, self.r3, self.dS1)


@dataclass
class SolverState:
    A: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    E: np.ndarray
    W: np.ndarray
    K: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    Q3: np.ndarray
    rho: float
    iter: int = 0
    residual_history: list[Residuals] = field(default_factory=list)

    @classmethod
    def initial(cls, A: np.ndarray, rho: float) -> "SolverState":
        zeros = {name: np.zeros_like(A) for name in VARIABLES[1:]}
        return cls(A=A, rho=rho, **zeros)

    @property
    def shape(self):
        return self.A.shape


@dataclass
class SolverOutput:
    S1: np.ndarray
    S2: np.ndarray
    A: np.ndarray
    E: np.ndarray
    converged: bool
    iterations: int
    residual_history: list[Residuals]


def update_W(E: np.ndarray, Q3: np.ndarray, rho: float) -> np.ndarray:
    """Group soft-threshold of the mode-3 fibers of ``E + Q3/rho`` at level ``1/rho``."""
    C = unfold_mode3(E + Q3 / rho)
    norms = np.linalg.norm(C, axis=0)
    scale = np.zeros_like(norms)
    big = norms > 1.0 / rho
    scale[big] = (norms[big] - 1.0 / rho) / norms[big]
    return fold_mode3(C * scale, E.shape)


def update_K(S1: np.ndarray, Q2: np.ndarray, rho: float, beta: float, m: int) -> np.ndarray:
    return tubal_shrinkage(S1 + Q2 / rho, m * beta / rho)


def update_S2(A, Q1, S1, E, rho: float, gamma: float) -> np.ndarray:
    # slice-uniform scaling in the Fourier domain equals the same map on the real tensor
    return rho * (A + Q1 / rho - S1 - E) / (2.0 * gamma + rho)


def update_S2_fourier(A, Q1, S1, E, rho: float, gamma: float) -> np.ndarray:
    target = fft_mode3(A) + fft_mode3(Q1) / rho - fft_mode3(S1) - fft_mode3(E)
    return ifft_mode3(rho * target / (2.0 * gamma + rho))


def update_S1(A, Q1, Q2, S2, E, K, rho: float) -> np.ndarray:
    return (K - Q2 / rho - (S2 + E - (A + Q1 / rho))) / 2.0


def update_S1_fourier(A, Q1, Q2, S2, E, K, rho: float) -> np.ndarray:
    f = fft_mode3
    return ifft_mode3((f(K) - f(Q2) / rho - (f(S2) + f(E) - (f(A) + f(Q1) / rho))) / 2.0)


def update_E(A, Q1, Q3, W, S1, S2, rho: float) -> np.ndarray:
    return (A + Q1 / rho + W - S1 - S2 - Q3 / rho) / 2.0


def update_E_fourier(A, Q1, Q3, W, S1, S2, rho: float) -> np.ndarray:
    f = fft_mode3
    return ifft_mode3((f(A) + f(Q1) / rho + f(W) - f(S1) - f(S2) - f(Q3) / rho) / 2.0)


def update_multipliers(state: SolverState, mu: float, rho_max: float) -> SolverState:
    """Dual ascent on Q1..Q3, then grow the penalty (capped at ``rho_max``). Mutates ``state``."""
    rho = state.rho
    state.Q1 = state.Q1 + rho * (state.A - state.S1 - state.S2 - state.E)
    state.Q2 = state.Q2 + rho * (state.S1 - state.K)
    state.Q3 = state.Q3 + rho * (state.E - state.W)
    state.rho = min(mu * rho, rho_max)
    return state


def constraint_residuals(state: SolverState) -> tuple[float, float, float]:
    return (
        float(np.linalg.norm(state.A - state.S1 - state.S2 - state.E)),
        float(np.linalg.norm(state.S1 - state.K)),
        float(np.linalg.norm(state.E - state.W)),
    )


def slice_discrepancy(S1: np.ndarray) -> np.ndarray:
    """Pairwise ``||S1[:, :, i] - S1[:, :, j]||_F`` as an ``m x m`` matrix."""
    m = S1.shape[2]
    flat = S1.reshape(-1, m)
    return np.linalg.norm(flat[:, :, None] - flat[:, None, :], axis=0)


def consistency_ratio(S1: np.ndarray) -> float:
    """Largest slice discrepancy relative to the largest slice norm (0 for a zero tensor)."""
    top = float(np.linalg.norm(S1.reshape(-1, S1.shape[2]), axis=0).max())
    return float(slice_discrepancy(S1).max() / top) if top > 0 else 0.0


def build_distances(views: Sequence[np.ndarray], normalize: bool = True) -> list[np.ndarray]:
    if len(views) < 1:
        raise ValueError("need at least one view")
    n = views[0].shape[1]
    if any(v.shape[1] != n for v in views):
        raise ValueError("all views must share the sample count")
    if normalize:
        views = [graph.normalize_samples(v) for v in views]
    return [graph.pseudo_stiefel_distance(v) for v in views]


def initial_state(dists: Sequence[np.ndarray], params: Hyperparams) -> SolverState:
    n = dists[0].shape[0]
    k = min(params.k_neighbors, n - 1)
    A = np.stack([graph.init_neighbor_graph(d, k) for d in dists], axis=2)
    return SolverState.initial(A, params.rho0)


def step(state: SolverState, dists: Sequence[np.ndarray], params: Hyperparams) -> Residuals:
    """One pass of subproblems 1-7 in place."""
    rho = state.rho
    m = state.shape[2]
    B = state.S1 + state.S2 + state.E - state.Q1 / rho
    A = np.empty_like(state.A)
    for v, d in enumerate(dists):
        A[:, :, v] = graph.update_neighbor_graph(d, B[:, :, v], params.alpha, rho)
    state.A = A
    state.W = update_W(state.E, state.Q3, rho)
    state.K = update_K(state.S1, state.Q2, rho, params.beta, m)
    state.S2 = update_S2(state.A, state.Q1, state.S1, state.E, rho, params.gamma)
    S1_old = state.S1
    state.S1 = update_S1(state.A, state.Q1, state.Q2, state.S2, state.E, state.K, rho)
    state.E = update_E(state.A, state.Q1, state.Q3, state.W, state.S1, state.S2, rho)
    r1, r2, r3 = constraint_residuals(state)
    res = Residuals(r1, r2, r3, float(np.sum((state.S1 - S1_old) ** 2)), rho)
    update_multipliers(state, params.mu, params.rho_max)
    state.iter += 1
    state.residual_history.append(res)
    for name in VARIABLES:
        if not np.all(np.isfinite(getattr(state, name))):
            raise NonFinite(state.iter, name)
    return res


def run(views: Sequence[np.ndarray], params: Hyperparams, normalize: bool = True) -> SolverOutput:
    """Run the ADMM iterations on ``views`` (each ``d_v x n``)."""
    dists = build_distances(views, normalize)
    state = initial_state(dists, params)
    n, _, m = state.shape
    scale = math.sqrt(n * n * m)
    converged = False
    while state.iter < params.max_iter:
        res = step(state, dists, params)
        logger.info(
            "iter=%d r1=%.3e r2=%.3e r3=%.3e rho=%.3e dS1=%.3e",
            state.iter, res.r1, res.r2, res.r3, res.rho, res.dS1,
        )
        if max(res.r1, res.r2, res.r3) / scale <= params.tol:
            converged = True
            break
    return SolverOutput(
        S1=state.S1,
        S2=state.S2,
        A=state.A,
        E=state.E,
        converged=converged,
        iterations=state.iter,
        residual_history=state.residual_history,
    )
