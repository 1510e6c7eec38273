import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfc_eeg import evaluation, synth
from cfc_eeg.cfc import FeatureDescriptor, feature_descriptors
from cfc_eeg.classify import GaussianClassifier
from cfc_eeg.evaluation import (EvaluationError, evaluate_features, make_folds,
                                participation_report, run_case, sweep_levels, write_report)
from cfc_eeg.wavelet import SwtConfig, band_ids, swt_decompose


class ConstantClassifier:
    def __init__(self, label=0):
        self.label = label

    def fit(self, x, y):
        return self

    def predict(self, x):
        return np.full(len(x), self.label)


def toy_features(rng, n0=40, n1=40, d=12):
    y = np.repeat([0, 1], [n0, n1])
    x = rng.standard_normal((n0 + n1, d))
    x[:, :3] += y[:, None] * np.array([3.0, 1.0, 0.5])
    return x, y


def descriptors_for(d):
    ids = band_ids(7)
    return feature_descriptors(ids)[:d]


def test_fold_examples():
    plan = make_folds(np.repeat([0, 1], 100), k=10, repeats=3, seed=1)
    for r in range(3):
        for f in range(10):
            _, test = plan.split(r, f)
            assert test.size == 20 and np.sum(test >= 100) == 10
    plan = make_folds(np.repeat([0, 1], [400, 100]), k=10, repeats=2, seed=1)
    for f in range(10):
        _, test = plan.split(0, f)
        assert np.sum(test < 400) == 40 and np.sum(test >= 400) == 10
    again = make_folds(np.repeat([0, 1], [400, 100]), k=10, repeats=2, seed=1)
    np.testing.assert_array_equal(plan.assignments, again.assignments)
    assert not np.array_equal(plan.assignments[0], plan.assignments[1])


def test_fold_errors():
    with pytest.raises(ValueError, match="fewer than k"):
        make_folds(np.repeat([0, 1], [20, 5]), k=10)
    with pytest.raises(ValueError):
        make_folds(np.repeat([0, 1], 20), k=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 60), st.integers(0, 60), st.integers(0, 1000))
def test_fold_partition_properties(k, extra0, extra1, seed):
    n0, n1 = k + extra0, k + extra1
    labels = np.random.default_rng(seed).permutation(np.repeat([0, 1], [n0, n1]))
    plan = make_folds(labels, k=k, repeats=2, seed=seed)
    for r in range(2):
        a = plan.assignments[r]
        assert set(a.tolist()) == set(range(k))
        sizes = np.bincount(a, minlength=k)
        assert sizes.sum() == labels.size and sizes.max() - sizes.min() <= 1
        for c, n in ((0, n0), (1, n1)):
            per = np.bincount(a[labels == c], minlength=k)
            assert np.all(np.abs(per - n / k) <= 1)


def test_constant_predictor_gives_majority_share(rng):
    y = np.repeat([0, 1], [400, 100])
    x = rng.standard_normal((500, 5))
    plan = make_folds(y, 10, 2, 0)
    rep = evaluate_features(x, y, descriptors_for(5), plan, 3, make_classifier=ConstantClassifier)
    assert rep.mean_accuracy == 0.8
    np.testing.assert_array_equal(rep.confusion, [[800, 0], [200, 0]])


def test_report_invariants(rng):
    x, y = toy_features(rng)
    plan = make_folds(y, 5, 3, 7)
    rep = evaluate_features(x, y, descriptors_for(12), plan, np.arange(1, 13))
    curve = rep.accuracy_by_feature_count
    assert rep.fold_accuracy.shape == (12, 3, 5)
    assert 0 <= rep.mean_accuracy <= 1 and rep.mean_accuracy == curve.max()
    assert rep.optimal_feature_count == int(np.flatnonzero(curve == curve.max())[0]) + 1
    assert np.all(rep.confusions.sum(axis=(1, 2)) == 3 * 80)
    assert sum(rep.participation_kind.values()) == pytest.approx(1.0, abs=1e-12)
    assert sum(rep.participation_band.values()) == pytest.approx(1.0, abs=1e-12)
    assert rep.mean_accuracy > 0.9


def test_full_pool_equals_no_selection(rng):
    x, y = toy_features(rng)
    plan = make_folds(y, 5, 2, 3)
    sweep = evaluate_features(x, y, descriptors_for(12), plan, np.arange(1, 13))
    full = evaluate_features(x, y, descriptors_for(12), plan, None)
    np.testing.assert_array_equal(sweep.fold_accuracy[-1], full.fold_accuracy[0])
    np.testing.assert_array_equal(sweep.confusions[-1], full.confusions[0])


def test_leakage_guard(rng):
    x, y = toy_features(rng)
    plan = make_folds(y, 5, 1, 0)
    train, test = plan.split(0, 2)

    fitted = []

    def recording():
        clf = GaussianClassifier()
        fitted.append(clf)
        return clf

    order_a, acc_a, _ = evaluation._run_fold(x, y, train, test, [4], recording)
    corrupted = x.copy()
    corrupted[test] = rng.standard_normal((test.size, x.shape[1])) * 100
    order_b, acc_b, _ = evaluation._run_fold(corrupted, y, train, test, [4], recording)
    np.testing.assert_array_equal(order_a, order_b)
    m_a, m_b = fitted[0].model_, fitted[1].model_
    np.testing.assert_array_equal(m_a.means, m_b.means)
    np.testing.assert_array_equal(m_a.covariances, m_b.covariances)
    np.testing.assert_array_equal(m_a.log_priors, m_b.log_priors)


def test_determinism_of_written_reports(tmp_path, rng):
    x, y = toy_features(rng)
    outs = []
    for i in range(2):
        rep = evaluate_features(x, y, descriptors_for(12), make_folds(y, 5, 2, 11),
                                np.arange(1, 13), n_jobs=1 + 2 * i)
        write_report(rep, tmp_path / str(i))
        outs.append({p.name: p.read_bytes() for p in (tmp_path / str(i)).iterdir()})
    assert outs[0] == outs[1]
    assert set(outs[0]) == {"accuracy_curve.csv", "confusion.csv", "participation_kind.csv",
                            "participation_band.csv"}


def test_errors_carry_fold_context(rng):
    x, y = toy_features(rng, d=3)
    x[:, 1] = x[:, 0]
    plan = make_folds(y, 5, 1, 0)
    with pytest.raises(EvaluationError, match="repeat 0 fold 0"):
        evaluate_features(x, y, descriptors_for(3), plan, 3,
                          make_classifier=lambda: GaussianClassifier(reg=0.0))
    with pytest.raises(ValueError):
        evaluate_features(x, y, descriptors_for(3), plan, 4)


def test_global_ranking_mode(rng):
    x, y = toy_features(rng)
    plan = make_folds(y, 5, 2, 0)
    rep = evaluate_features(x, y, descriptors_for(12), plan, [1, 2], ranking="global")
    assert np.all(rep.rankings == rep.rankings[0, 0])


def test_participation_examples():
    sel = ["PPC(A7,D1)", "PAC(D2->D1)", "PPC(D3,D2)"]
    kinds, bands = participation_report([sel])
    assert kinds == pytest.approx({"PPC": 2 / 3, "PAC": 1 / 3, "AAC": 0.0})
    assert bands == pytest.approx({"A7": 1 / 6, "D3": 1 / 6, "D2": 2 / 6, "D1": 2 / 6})
    assert list(bands) == ["A7", "D3", "D2", "D1"]
    many = participation_report([sel] * 7)
    assert many[0] == pytest.approx(kinds) and many[1] == pytest.approx(bands)
    mixed = participation_report([sel, [FeatureDescriptor("AAC", "D2", "D1")]])
    assert mixed[0] == pytest.approx({"PPC": 1 / 3, "PAC": 1 / 6, "AAC": 1 / 2})
    with pytest.raises(ValueError):
        participation_report([])


def small_synth():
    spec = synth.SynthSpec(n_trials=20, length=1024, levels=5, seed=3)
    return synth.generate(spec), spec


def test_run_case_on_small_synth():
    ds, spec = small_synth()
    plan = make_folds(ds.labels, 5, 2, 0)
    rep = run_case(ds, SwtConfig(5), "sweep", fold_plan=plan)
    assert rep.n_values.tolist() == list(range(1, 61))
    assert rep.mean_accuracy >= 0.95
    assert all(len(sel) == 1 for sel in rep.selected_features(1))
    with pytest.raises(ValueError):
        run_case(ds, SwtConfig(5), "everything", fold_plan=plan)


def test_sweep_levels_table():
    ds, _ = small_synth()
    table = sweep_levels({"synth": ds}, levels=(4, 5), k=5, repeats=1)
    assert set(table) == {("synth", 4), ("synth", 5)}
    assert all(0 <= v <= 1 for v in table.values())


def test_sweep_levels_length_precondition():
    spec = synth.SynthSpec(n_trials=10, length=64, levels=5, f_low=10.0, f_high=40.0)
    ds = synth.generate(spec)
    assert swt_decompose(ds.records[0].samples, SwtConfig(5)).levels == 5
    with pytest.raises(ValueError, match="N=64"):
        swt_decompose(ds.records[0].samples, SwtConfig(7))
    with pytest.raises(ValueError, match="N=64"):
        sweep_levels({"s": ds}, levels=(7,), k=5, repeats=1)
