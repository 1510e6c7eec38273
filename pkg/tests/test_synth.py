import numpy as np
import pytest

from cfc_eeg import dataset, synth
from cfc_eeg.cfc import feature_matrix
from cfc_eeg.stats import welch_t
from cfc_eeg.wavelet import SwtConfig


def pac_by_class(spec):
    ds = synth.generate(spec)
    x, ds_desc = feature_matrix([r.samples for r in ds.records], SwtConfig(spec.levels))
    j = [d.name for d in ds_desc].index(spec.coupling_feature.name)
    return x[ds.labels == 1, j], x[ds.labels == 0, j]


def test_designated_band_pair():
    spec = synth.SynthSpec()
    assert spec.band_pair == ("D5", "D2")
    assert spec.coupling_feature.name == "PAC(D5->D2)"


def test_invalid_specs():
    with pytest.raises(ValueError):
        synth.SynthSpec(f_low=40.0, f_high=30.0)
    with pytest.raises(ValueError):
        synth.SynthSpec(f_high=100.0)
    with pytest.raises(ValueError, match="same band"):
        synth.SynthSpec(f_low=30.0, f_high=35.0)
    with pytest.raises(ValueError):
        synth.SynthSpec(depth=1.5)


def test_coupled_vs_uncoupled_pac():
    coupled, uncoupled = pac_by_class(synth.SynthSpec(depth=0.9, noise=0.1))
    assert coupled.mean() >= 0.8
    assert uncoupled.mean() <= 0.2


def test_no_modulation_is_indistinguishable():
    coupled, uncoupled = pac_by_class(synth.SynthSpec(depth=0.0, noise=0.1))
    assert abs(welch_t(coupled, uncoupled)) < 3


@pytest.mark.parametrize("depth,noise", [(0.5, 0.5), (0.7, 0.3), (1.0, 0.5)])
def test_coupled_dominates(depth, noise):
    coupled, uncoupled = pac_by_class(synth.SynthSpec(n_trials=40, depth=depth, noise=noise))
    assert coupled.mean() > uncoupled.mean()


def test_deterministic_and_labelled():
    a = synth.generate(synth.SynthSpec(n_trials=5, seed=9))
    b = synth.generate(synth.SynthSpec(n_trials=5, seed=9))
    c = synth.generate(synth.SynthSpec(n_trials=5, seed=10))
    assert all(np.array_equal(r.samples, s.samples) for r, s in zip(a.records, b.records))
    assert not np.array_equal(a.records[0].samples, c.records[0].samples)
    assert a.labels.tolist() == [0] * 5 + [1] * 5
    assert {r.set_label for r in a.records} == {"A", "E"}


def test_zero_mean_after_preprocessing():
    ds = synth.generate(synth.SynthSpec(n_trials=5))
    for r in ds.records:
        out = dataset.preprocess(r, 4096).samples
        assert abs(out.mean()) <= 1e-9


def test_write_bonn_tree_round_trip(tmp_path):
    ds = synth.generate(synth.SynthSpec(n_trials=3, length=256, levels=4, f_low=10.0, f_high=40.0))
    manifest = synth.write_bonn_tree(ds, tmp_path, scale=100)
    records = dataset.load_bonn(manifest)
    assert [r.id for r in records] == ds.ids
    for got, want in zip(records, ds.records):
        np.testing.assert_array_equal(got.samples, np.rint(want.samples * 100))
    case = dataset.build_case(dataset.CASES["I"], records)
    assert case.class_counts() == (3, 3)
