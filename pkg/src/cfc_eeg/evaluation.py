"""Repeated stratified k-fold evaluation of the CFC + t-test + QDA pipeline.

Per fold the features are ranked on the training rows only, the top ``n`` are
kept, the classifier is fit on the training rows and scored on the held-out
fold. A feature-count sweep reuses the fold plan and the per-fold rankings.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .cfc import KINDS, FeatureDescriptor, feature_matrix
from .classify import GaussianClassifier
from .dataset import LabeledDataset
from .stats import rank_features
from .wavelet import SwtConfig


class EvaluationError(RuntimeError):
    pass


@dataclass(frozen=True)
class FoldPlan:
    k: int
    repeats: int
    seed: int
    assignments: np.ndarray  # (repeats, n_trials) fold index per trial

    def split(self, repeat: int, fold: int):
        a = self.assignments[repeat]
        return np.flatnonzero(a != fold), np.flatnonzero(a == fold)


@dataclass
class EvaluationReport:
    n_values: np.ndarray
    fold_accuracy: np.ndarray  # (len(n_values), repeats, k)
    confusions: np.ndarray  # (len(n_values), 2, 2), rows = true class
    rankings: np.ndarray  # (repeats, k, pool) per-fold ranking order
    descriptors: tuple
    name: str = ""
    participation_kind: dict = field(default_factory=dict)
    participation_band: dict = field(default_factory=dict)

    @property
    def accuracy_by_feature_count(self) -> np.ndarray:
        flat = self.fold_accuracy.reshape(len(self.n_values), -1)
        return np.array([math.fsum(row) / row.size for row in flat])

    @property
    def std_by_feature_count(self) -> np.ndarray:
        return self.fold_accuracy.std(axis=(1, 2))

    @property
    def best_index(self) -> int:
        # argmax returns the first maximum, i.e. the smallest n
        return int(np.argmax(self.accuracy_by_feature_count))

    @property
    def optimal_feature_count(self) -> int:
        return int(self.n_values[self.best_index])

    @property
    def mean_accuracy(self) -> float:
        return float(self.accuracy_by_feature_count[self.best_index])

    @property
    def std(self) -> float:
        return float(self.std_by_feature_count[self.best_index])

    @property
    def confusion(self) -> np.ndarray:
        return self.confusions[self.best_index]

    def selected_features(self, n: int | None = None) -> list:
        """Selected descriptor lists, one per (repeat, fold), for ``n`` features."""
        n = self.optimal_feature_count if n is None else n
        r, k, _ = self.rankings.shape
        return [[self.descriptors[i] for i in self.rankings[a, b, :n]]
                for a in range(r) for b in range(k)]


def make_folds(labels, k: int = 10, repeats: int = 10, seed: int = 0) -> FoldPlan:
    """Stratified folds, reshuffled independently for every repeat.

    Each class is dealt round-robin into the folds; the deal continues where the
    previous class stopped so overall fold sizes differ by at most one.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    classes = np.unique(labels)
    for c in classes:
        count = int(np.sum(labels == c))
        if count < k:
            raise ValueError(f"class {c} has {count} trials, fewer than k={k}")
    assignments = np.empty((repeats, labels.size), dtype=np.int64)
    for r in range(repeats):
        rng = np.random.default_rng([seed, r])
        offset = 0
        for c in classes:
            idx = rng.permutation(np.flatnonzero(labels == c))
            assignments[r, idx] = (offset + np.arange(idx.size)) % k
            offset = (offset + idx.size) % k
    return FoldPlan(k, repeats, seed, assignments)


def _run_fold(x, y, train, test, n_values, make_classifier, global_order=None):
    if global_order is None:
        order = rank_features(x[train], y[train]).order
    else:
        order = global_order
    acc = np.empty(len(n_values))
    conf = np.zeros((len(n_values), 2, 2), dtype=np.int64)
    for j, n in enumerate(n_values):
        cols = np.sort(order[:n])
        clf = make_classifier().fit(x[np.ix_(train, cols)], y[train])
        pred = np.asarray(clf.predict(x[np.ix_(test, cols)]))
        acc[j] = np.mean(pred == y[test])
        np.add.at(conf[j], (y[test], pred), 1)
    return order, acc, conf


def evaluate_features(x, labels, descriptors, fold_plan: FoldPlan,
                      n_features: int | Sequence[int] | None = None,
                      make_classifier: Callable = GaussianClassifier,
                      ranking: str = "fold", n_jobs: int = 1,
                      name: str = "") -> EvaluationReport:
    """Cross-validate a precomputed feature matrix.

    ``n_features`` is one count, a sequence of counts (a sweep) or ``None`` for
    every feature. ``ranking="global"`` ranks once on all trials instead of per
    fold (leaks test information; kept for comparison only).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(labels).astype(np.int64)
    pool = x.shape[1]
    if n_features is None:
        n_values = np.array([pool])
    else:
        n_values = np.atleast_1d(np.asarray(n_features, dtype=np.int64))
    if n_values.size == 0 or n_values.min() < 1 or n_values.max() > pool:
        raise ValueError(f"feature counts must lie in [1, {pool}]")
    if ranking not in ("fold", "global"):
        raise ValueError(f"unknown ranking mode {ranking!r}")
    global_order = rank_features(x, y).order if ranking == "global" else None

    units = [(r, f) for r in range(fold_plan.repeats) for f in range(fold_plan.k)]

    def work(unit):
        r, f = unit
        train, test = fold_plan.split(r, f)
        try:
            return _run_fold(x, y, train, test, n_values, make_classifier, global_order)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise EvaluationError(f"{name or 'case'}: repeat {r} fold {f}: {exc}") from exc

    if n_jobs == 1:
        results = [work(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as ex:
            results = list(ex.map(work, units))

    rankings = np.empty((fold_plan.repeats, fold_plan.k, pool), dtype=np.int64)
    fold_acc = np.empty((n_values.size, fold_plan.repeats, fold_plan.k))
    confusions = np.zeros((n_values.size, 2, 2), dtype=np.int64)
    for (r, f), (order, acc, conf) in zip(units, results):
        rankings[r, f] = order
        fold_acc[:, r, f] = acc
        confusions += conf
    report = EvaluationReport(n_values, fold_acc, confusions, rankings,
                              tuple(descriptors), name=name)
    report.participation_kind, report.participation_band = participation_report(
        report.selected_features(), band_order=_band_order(descriptors))
    return report


def run_case(dataset: LabeledDataset, swt_config: SwtConfig = SwtConfig(),
             n_features: int | Sequence[int] | str | None = "sweep",
             make_classifier: Callable = GaussianClassifier,
             fold_plan: FoldPlan | None = None, n_jobs: int = 1,
             ranking: str = "fold") -> EvaluationReport:
    """Extract features for ``dataset`` and cross-validate them.

    ``n_features="sweep"`` evaluates every count from 1 to the pool size.
    """
    signals = [r.samples for r in dataset.records]
    x, descriptors = feature_matrix(signals, swt_config, n_jobs=n_jobs)
    if fold_plan is None:
        fold_plan = make_folds(dataset.labels)
    if isinstance(n_features, str):
        if n_features != "sweep":
            raise ValueError(f"unknown feature-count spec {n_features!r}")
        n_features = np.arange(1, x.shape[1] + 1)
    return evaluate_features(x, dataset.labels, descriptors, fold_plan, n_features,
                             make_classifier, ranking=ranking, n_jobs=n_jobs,
                             name=dataset.name)


def sweep_levels(datasets: dict, levels: Sequence[int] = (5, 6, 7, 8, 9),
                 k: int = 10, repeats: int = 10, seed: int = 0,
                 make_classifier: Callable = GaussianClassifier, n_jobs: int = 1) -> dict:
    """Best sweep accuracy per (case name, level)."""
    table = {}
    for name, ds in datasets.items():
        plan = make_folds(ds.labels, k, repeats, seed)
        for level in levels:
            report = run_case(ds, SwtConfig(level), "sweep", make_classifier, plan, n_jobs)
            table[name, level] = report.mean_accuracy
    return table


def _band_order(descriptors) -> list:
    bands = []
    for d in descriptors:
        for b in (d.band_a, d.band_b):
            if b not in bands:
                bands.append(b)
    return _canonical_bands(bands)


def _canonical_bands(bands) -> list:
    def key(b):
        return (0 if b.startswith("A") else 1, -int(b[1:]))
    return sorted(bands, key=key)


def participation_report(selections: Sequence[Sequence], band_order=None):
    """Share of selected-feature slots per kind and per band, averaged over folds.

    ``selections`` holds one list of selected features (descriptors or names)
    per fold. Every feature fills one kind slot and two band slots.
    """
    if not selections or any(len(s) == 0 for s in selections):
        raise ValueError("participation needs at least one non-empty selection")
    parsed = [[d if isinstance(d, FeatureDescriptor) else FeatureDescriptor.parse(d)
               for d in sel] for sel in selections]
    if band_order is None:
        band_order = _canonical_bands({b for sel in parsed for d in sel
                                       for b in (d.band_a, d.band_b)})
    kind_share = np.zeros(len(KINDS))
    band_share = np.zeros(len(band_order))
    for sel in parsed:
        kinds = np.zeros(len(KINDS))
        bands = np.zeros(len(band_order))
        for d in sel:
            kinds[KINDS.index(d.kind)] += 1
            bands[band_order.index(d.band_a)] += 1
            bands[band_order.index(d.band_b)] += 1
        kind_share += kinds / kinds.sum()
        band_share += bands / bands.sum()
    kind_share /= len(parsed)
    band_share /= len(parsed)
    return (dict(zip(KINDS, kind_share.tolist())),
            dict(zip(band_order, band_share.tolist())))


def _g(v) -> str:
    return format(float(v), ".17g")


def write_report(report: EvaluationReport, out_dir) -> None:
    """Write accuracy_curve, confusion and participation CSVs into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "accuracy_curve.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n_features", "mean", "std"])
        for n, m, s in zip(report.n_values, report.accuracy_by_feature_count,
                           report.std_by_feature_count):
            w.writerow([int(n), _g(m), _g(s)])
    with open(out / "confusion.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["true_class", "pred_0", "pred_1"])
        for c in range(2):
            w.writerow([c, int(report.confusion[c, 0]), int(report.confusion[c, 1])])
    with open(out / "participation_kind.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "share"])
        for kind, share in report.participation_kind.items():
            w.writerow([kind, _g(share)])
    with open(out / "participation_band.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["band", "share"])
        for band, share in report.participation_band.items():
            w.writerow([band, _g(share)])


def write_levels_table(table: dict, path) -> None:
    cases = list(dict.fromkeys(c for c, _ in table))
    levels = sorted({lv for _, lv in table})
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["case"] + [str(lv) for lv in levels])
        for c in cases:
            w.writerow([c] + [_g(table[c, lv]) if (c, lv) in table else "" for lv in levels])
