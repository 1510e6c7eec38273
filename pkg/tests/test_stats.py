import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfc_eeg.stats import rank_features, welch_t


def brute_welch(a, b):
    na, nb = len(a), len(b)
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((v - ma) ** 2 for v in a) / (na - 1)
    vb = sum((v - mb) ** 2 for v in b) / (nb - 1)
    return (ma - mb) / np.sqrt(va / na + vb / nb)


def brute_rank(x, y):
    t = [brute_welch(list(x[y == 1, j]), list(x[y == 0, j])) for j in range(x.shape[1])]
    order = sorted(range(len(t)), key=lambda j: (-abs(t[j]), j))
    return np.array(order), np.array(t)


def test_welch_examples():
    assert welch_t([1, 2, 3], [1, 2, 3]) == 0.0
    assert welch_t([1, 2, 3], [4, 5, 6]) == pytest.approx(-3.6742, abs=1e-3)
    assert welch_t([1, 2, 3], [4, 5, 6]) == pytest.approx(-3 / np.sqrt(2 / 3), abs=1e-12)
    assert welch_t([4, 4], [4, 4]) == 0.0
    assert welch_t([5, 5], [4, 4]) == np.inf
    assert welch_t([3, 3, 3], [4, 4]) == -np.inf
    with pytest.raises(ValueError):
        welch_t([1], [2, 3])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(-1e3, 1e3))
def test_welch_location_invariance(seed, c):
    rng = np.random.default_rng(seed)
    a, b = rng.standard_normal(12), rng.standard_normal(9) + 0.5
    assert abs(welch_t(a + c, b + c) - welch_t(a, b)) <= 1e-9 * max(1, abs(c))
    assert welch_t(a, b) == pytest.approx(brute_welch(list(a), list(b)), abs=1e-12)


def test_rank_signal_beats_noise(rng):
    y = np.repeat([0, 1], 20)
    x = np.column_stack([y + rng.normal(0, 0.01, 40), rng.standard_normal(40)])
    assert rank_features(x, y).order.tolist() == [0, 1]


def test_rank_ties_keep_index_order(rng):
    y = np.repeat([0, 1], 5)
    col = rng.standard_normal(10)
    assert rank_features(np.tile(col[:, None], 6), y).order.tolist() == list(range(6))


def test_rank_column_permutation(rng):
    y = np.repeat([0, 1], 10)
    x = rng.standard_normal((20, 7))
    perm = rng.permutation(7)
    np.testing.assert_array_equal(rank_features(x[:, perm], y).t_values,
                                  rank_features(x, y).t_values[perm])


def test_rank_single_class():
    with pytest.raises(ValueError):
        rank_features(np.zeros((4, 2)), [1, 1, 1, 1])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_rank_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    y = rng.permutation(np.repeat([0, 1], 10))
    x = rng.standard_normal((20, 30)) + rng.normal(0, 1, 30) * y[:, None]
    ranked = rank_features(x, y)
    order, t = brute_rank(x, y)
    np.testing.assert_allclose(ranked.t_values, t, rtol=1e-10)
    np.testing.assert_array_equal(ranked.order, order)
    assert sorted(ranked.order.tolist()) == list(range(30))
    mags = np.abs(ranked.t_values[ranked.order])
    assert np.all(mags[:-1] >= mags[1:])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(0, 9), st.floats(1e-3, 1e3))
def test_rank_scale_invariance(seed, col, scale):
    rng = np.random.default_rng(seed)
    y = np.repeat([0, 1], 8)
    x = rng.standard_normal((16, 10)) + np.linspace(0, 2, 10) * y[:, None]
    scaled = x.copy()
    scaled[:, col] *= scale
    np.testing.assert_allclose(rank_features(scaled, y).t_values, rank_features(x, y).t_values,
                               rtol=1e-9)


def test_infinite_t_ranked_first():
    y = np.array([0, 0, 1, 1])
    x = np.array([[0.0, 1.0], [1.0, 1.0], [0.5, 2.0], [2.0, 2.0]])
    ranked = rank_features(x, y)
    assert ranked.t_values[1] == np.inf
    assert ranked.order.tolist() == [1, 0]
