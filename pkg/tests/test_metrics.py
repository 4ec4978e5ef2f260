import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cstgl import metrics

import oracles

labelings = st.integers(2, 30).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
    )
)


def test_identity_and_relabeling():
    truth = np.array([0, 0, 1, 1, 2, 2, 2])
    for pred in (truth, np.array([2, 2, 0, 0, 1, 1, 1])):
        r = metrics.evaluate(pred, truth)
        assert (r.acc, r.ari, r.fscore) == (1.0, 1.0, 1.0)
        assert r.nmi == pytest.approx(1.0)


def test_hand_examples():
    assert metrics.acc([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75
    assert oracles.acc_exhaustive([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75
    assert oracles.pair_counts([0, 0, 1, 1], [0, 1, 0, 1]) == (0, 2, 2, 2)
    assert metrics.ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)


def test_single_cluster_nmi_is_zero():
    assert metrics.nmi([0, 0, 0, 0], [0, 1, 0, 1]) == 0.0
    assert metrics.nmi([1, 1, 1], [1, 1, 1]) == 0.0


def test_length_mismatch():
    with pytest.raises(metrics.LengthMismatch):
        metrics.acc([0, 1], [0, 1, 1])


def test_random_ari_near_zero():
    rng = np.random.default_rng(0)
    n = 10_000
    vals = [metrics.ari(rng.integers(0, 4, n), rng.integers(0, 4, n)) for _ in range(5)]
    assert abs(np.mean(vals)) <= 0.02
    assert max(abs(v) for v in vals) <= 0.02


@given(labelings)
def test_against_brute_force(pair):
    pred, truth = pair
    assert metrics.acc(pred, truth) == pytest.approx(oracles.acc_exhaustive(pred, truth), abs=1e-10)
    assert metrics.ari(pred, truth) == pytest.approx(oracles.ari_pairs(pred, truth), abs=1e-10)
    assert metrics.fscore(pred, truth) == pytest.approx(oracles.fscore_pairs(pred, truth), abs=1e-10)
    assert metrics.nmi(pred, truth) == pytest.approx(oracles.nmi_loops(pred, truth), abs=1e-10)


@given(labelings, st.permutations(range(6)), st.permutations(range(6)))
def test_ranges_and_permutation_invariance(pair, p1, p2):
    pred, truth = np.array(pair[0]), np.array(pair[1])
    r = metrics.evaluate(pred, truth)
    assert 0 <= r.acc <= 1 and 0 <= r.nmi <= 1 and -1 <= r.ari <= 1 and 0 <= r.fscore <= 1
    s = metrics.evaluate(np.array(p1)[pred], np.array(p2)[truth])
    assert r == s


@given(labelings)
def test_acc_symmetric_with_equal_cluster_counts(pair):
    pred, truth = pair
    if len(set(pred)) == len(set(truth)):
        assert metrics.acc(pred, truth) == pytest.approx(metrics.acc(truth, pred), abs=1e-12)
