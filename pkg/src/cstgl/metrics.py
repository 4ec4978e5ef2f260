"""External clustering metrics: matched accuracy, NMI, ARI and pairwise F-score."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    acc: float
    nmi: float
    ari: float
    fscore: float

    def to_dict(self) -> dict:
        return asdict(self)


def contingency(pred, truth) -> np.ndarray:
    pred, truth = np.asarray(pred).ravel(), np.asarray(truth).ravel()
    if pred.size != truth.size:
        raise LengthMismatch(f"{pred.size} predictions vs {truth.size} labels")
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    table = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(table, (p, t), 1)
    return table


def acc(pred, truth) -> float:
    table = contingency(pred, truth)
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum() / table.sum())


def _entropy(counts: np.ndarray, n: int) -> float:
    # fsum is correctly rounded, so relabeling cannot change the result
    p = counts[counts > 0] / n
    return -math.fsum(p * np.log(p))


def nmi(pred, truth) -> float:
    """Mutual information over the arithmetic mean of the two entropies.

    Returns 0 when either labeling has a single cluster.
    """
    table = contingency(pred, truth)
    n = table.sum()
    hp = _entropy(table.sum(axis=1), n)
    ht = _entropy(table.sum(axis=0), n)
    if hp == 0.0 or ht == 0.0:
        return 0.0
    nz = table > 0
    pij = table[nz] / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))[nz] / n**2
    mi = math.fsum(pij * np.log(pij / outer))
    return float(np.clip(mi / ((hp + ht) / 2.0), 0.0, 1.0))


def _pairs(x):
    return x * (x - 1) / 2.0


def ari(pred, truth) -> float:
    table = contingency(pred, truth)
    n = table.sum()
    sum_ij = _pairs(table).sum()
    sum_a = _pairs(table.sum(axis=1)).sum()
    sum_b = _pairs(table.sum(axis=0)).sum()
    expected = sum_a * sum_b / _pairs(n) if n > 1 else 0.0
    top = (sum_a + sum_b) / 2.0
    if top == expected:
        # both partitions trivial (all singletons or one block)
        return 1.0 if sum_ij == top else 0.0
    return float((sum_ij - expected) / (top - expected))


def fscore(pred, truth) -> float:
    """Harmonic mean of pairwise precision and recall over same-cluster pairs."""
    table = contingency(pred, truth)
    tp = _pairs(table).sum()
    pred_pairs = _pairs(table.sum(axis=1)).sum()
    true_pairs = _pairs(table.sum(axis=0)).sum()
    if tp == 0:
        return 1.0 if pred_pairs == 0 and true_pairs == 0 else 0.0
    precision, recall = tp / pred_pairs, tp / true_pairs
    return float(2 * precision * recall / (precision + recall))


def evaluate(pred, truth) -> MetricsReport:
    return MetricsReport(acc(pred, truth), nmi(pred, truth), ari(pred, truth), fscore(pred, truth))
