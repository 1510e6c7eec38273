"""Command-line entry point: ``cfc-eeg <command> [options]``.

Exit codes: 0 success, 1 runtime or compute failure, 2 configuration or usage error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import cfc, classify, dataset, evaluation, synth
from .config import ENV_DATA, ConfigError, RunConfig, load_config
from .stats import rank_features
from .wavelet import SwtConfig


class CommandError(RuntimeError):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--data", "--manifest", dest="data",
                   help=f"manifest file or dataset directory (fallback: ${ENV_DATA})")
    p.add_argument("--synth", action="store_true", default=None,
                   help="use the synthetic generator instead of Bonn data")
    p.add_argument("--case", dest="cases", help="case name(s): I..V, comma separated, or all")
    p.add_argument("--levels", help="SWT levels, e.g. 7, 5-9 or 5,7,9")
    p.add_argument("--lambda", dest="reg", type=float, help="covariance shrinkage in [0, 1)")
    p.add_argument("--mode", help="QDA or LDA")
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int, help="number of folds")
    p.add_argument("--repeats", type=int)
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--n-jobs", dest="n_jobs", type=int)
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfc-eeg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    commands = [
        ("extract", "write one feature CSV per case"),
        ("evaluate", "cross-validate and write report CSVs"),
        ("sweep-features", "accuracy against the number of selected features"),
        ("sweep-levels", "best accuracy per case and SWT level"),
        ("synth", "write synthetic trials as Bonn text files"),
    ]
    for name, help_text in commands:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "evaluate":
            p.add_argument("--features", nargs="+",
                           help="evaluate previously extracted feature CSV(s) instead")
    p = sub.add_parser("report", help="print the summary of an output directory")
    p.add_argument("out", nargs="?", default="results")
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {}
    for name in ("data", "synth", "cases", "levels", "reg", "mode", "seed", "k", "repeats",
                 "n_min", "n_max", "n_jobs", "out"):
        value = getattr(args, name, None)
        if value is not None:
            overrides["lambda" if name == "reg" else name] = value
    return load_config(getattr(args, "config", None), overrides)


def _datasets(cfg: RunConfig) -> dict:
    """Preprocessed labeled datasets keyed by case name."""
    if cfg.synth:
        ds = synth.generate(cfg.synth_spec)
        ds.records = [dataset.preprocess(r, cfg.synth_spec.length) for r in ds.records]
        return {"synth": ds}
    needed = sorted(set().union(*(dataset.get_case(c).sets for c in cfg.cases)))
    records = dataset.load_bonn(cfg.data, cfg.sampling_rate_hz, needed)
    return {name: dataset.prepare_case(dataset.get_case(name), records, cfg.length)
            for name in cfg.cases}


def _features(ds, level: int, n_jobs: int):
    try:
        return cfc.feature_matrix([r.samples for r in ds.records], SwtConfig(level), n_jobs)
    except cfc.FeatureExtractionError as exc:
        for i, err in exc.failures:
            print(f"case {ds.name}: trial {ds.records[i].id}: {err}", file=sys.stderr)
        raise CommandError(f"case {ds.name}: {len(exc.failures)} trial(s) failed") from None


def _n_range(cfg: RunConfig, pool: int) -> np.ndarray:
    hi = pool if cfg.n_max is None else min(cfg.n_max, pool)
    if cfg.n_min > hi:
        raise ConfigError(f"feature-count range {cfg.n_min}..{hi} is empty (pool {pool})")
    return np.arange(cfg.n_min, hi + 1)


def _classifier(cfg: RunConfig):
    return lambda: classify.GaussianClassifier(cfg.mode, cfg.reg, cfg.priors)


def _evaluate_matrix(cfg, name, ids, x, labels, descriptors):
    plan = evaluation.make_folds(labels, cfg.k, cfg.repeats, cfg.seed)
    report = evaluation.evaluate_features(
        x, labels, descriptors, plan, _n_range(cfg, x.shape[1]), _classifier(cfg),
        ranking=cfg.ranking, n_jobs=cfg.n_jobs, name=name)
    return report


def _case_dir(cfg: RunConfig, name: str) -> Path:
    return Path(cfg.out) / f"case_{name}"


def _write_extras(cfg, report, x, labels, descriptors, out_dir: Path) -> None:
    ranked = rank_features(x, labels)
    position = np.empty_like(ranked.order)
    position[ranked.order] = np.arange(ranked.order.size)
    with open(out_dir / "t_values.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["feature", "t", "rank"])
        for j, d in enumerate(descriptors):
            w.writerow([d.name, format(float(ranked.t_values[j]), ".17g"), int(position[j]) + 1])
    cols = np.sort(ranked.order[:report.optimal_feature_count])
    model = classify.fit(x[:, cols], labels, cfg.mode, cfg.reg, cfg.priors)
    (out_dir / "model.txt").write_text(
        "features " + " ".join(descriptors[j].name for j in cols) + "\n" + classify.dumps(model))


def _write_summary(rows, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["case", "trials", "optimal_n", "mean_accuracy", "std", "ppc", "pac", "aac"])
        for r in rows:
            w.writerow(r)


def _summary_row(name, n_trials, report):
    kinds = report.participation_kind
    g = evaluation._g
    return [name, n_trials, report.optimal_feature_count, g(report.mean_accuracy),
            g(report.std), g(kinds["PPC"]), g(kinds["PAC"]), g(kinds["AAC"])]


def cmd_extract(cfg: RunConfig) -> int:
    cfg.validate()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, ds in _datasets(cfg).items():
        x, descriptors = _features(ds, cfg.level, cfg.n_jobs)
        path = out / f"features_{name}.csv"
        cfc.write_feature_csv(path, ds.ids, x, ds.labels, descriptors)
        print(f"case {name}: {x.shape[0]} trials x {x.shape[1]} features -> {path}")
    return 0


def cmd_evaluate(cfg: RunConfig, feature_files=None) -> int:
    if feature_files:
        _validate_numeric(cfg)
    else:
        cfg.validate()
    inputs = []
    if feature_files:
        for path in feature_files:
            if not Path(path).is_file():
                raise ConfigError(f"feature file not found: {path}")
            ids, x, labels, descriptors = cfc.read_feature_csv(path)
            name = Path(path).stem.removeprefix("features_")
            inputs.append((name, ids, x, labels, descriptors))
    else:
        for name, ds in _datasets(cfg).items():
            x, descriptors = _features(ds, cfg.level, cfg.n_jobs)
            inputs.append((name, ds.ids, x, ds.labels, descriptors))
    rows = []
    for name, ids, x, labels, descriptors in inputs:
        report = _evaluate_matrix(cfg, name, ids, x, labels, descriptors)
        out_dir = _case_dir(cfg, name)
        evaluation.write_report(report, out_dir)
        _write_extras(cfg, report, x, labels, descriptors, out_dir)
        rows.append(_summary_row(name, len(ids), report))
        print(f"case {name}: mean accuracy {100 * report.mean_accuracy:.2f}% "
              f"(std {100 * report.std:.2f}), optimal n = {report.optimal_feature_count}")
    _write_summary(rows, Path(cfg.out))
    return 0


def _validate_numeric(cfg: RunConfig) -> None:
    saved = cfg.synth, cfg.data
    cfg.synth, cfg.data = True, None
    try:
        cfg.validate()
    finally:
        cfg.synth, cfg.data = saved


def cmd_sweep_features(cfg: RunConfig) -> int:
    cfg.validate()
    for name, ds in _datasets(cfg).items():
        x, descriptors = _features(ds, cfg.level, cfg.n_jobs)
        report = _evaluate_matrix(cfg, name, ds.ids, x, ds.labels, descriptors)
        out_dir = _case_dir(cfg, name)
        evaluation.write_report(report, out_dir)
        curve = report.accuracy_by_feature_count
        print(f"case {name}: accuracy {100 * curve.min():.2f}%..{100 * curve.max():.2f}% "
              f"over n = {report.n_values[0]}..{report.n_values[-1]}, "
              f"optimal n = {report.optimal_feature_count} -> {out_dir / 'accuracy_curve.csv'}")
    return 0


def cmd_sweep_levels(cfg: RunConfig) -> int:
    cfg.validate()
    table = {}
    datasets = _datasets(cfg)
    for level in cfg.levels:
        for name, ds in datasets.items():
            x, descriptors = _features(ds, level, cfg.n_jobs)
            report = _evaluate_matrix(cfg, name, ds.ids, x, ds.labels, descriptors)
            evaluation.write_report(report, _case_dir(cfg, name) / f"level_{level}")
            table[name, level] = report.mean_accuracy
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ordered = {(c, lv): table[c, lv] for c in datasets for lv in cfg.levels}
    evaluation.write_levels_table(ordered, out / "levels_table.csv")
    print("case  " + "  ".join(f"{lv:>7d}" for lv in cfg.levels))
    for c in datasets:
        print(f"{c:<5s} " + "  ".join(f"{100 * table[c, lv]:7.2f}" for lv in cfg.levels))
    return 0


def cmd_synth(cfg: RunConfig) -> int:
    cfg.synth, cfg.data = True, None
    cfg.validate()
    manifest = synth.write_bonn_tree(synth.generate(cfg.synth_spec), cfg.out)
    print(f"wrote {2 * cfg.synth_spec.n_trials} trials; manifest {manifest}")
    return 0


def cmd_report(out) -> int:
    path = Path(out) / "summary.csv"
    if not path.exists():
        raise ConfigError(f"no summary.csv in {out}; run 'evaluate' first")
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    print(f"{'case':<6s}{'trials':>7s}{'opt n':>7s}{'accuracy':>10s}{'PPC':>7s}{'PAC':>7s}{'AAC':>7s}")
    for r in rows:
        print(f"{r['case']:<6s}{r['trials']:>7s}{r['optimal_n']:>7s}"
              f"{100 * float(r['mean_accuracy']):>9.2f}%"
              f"{float(r['ppc']):>7.3f}{float(r['pac']):>7.3f}{float(r['aac']):>7.3f}")
    levels = Path(out) / "levels_table.csv"
    if levels.exists():
        print()
        print(levels.read_text(), end="")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            return cmd_report(args.out)
        cfg = _config_from_args(args)
        if args.command == "extract":
            return cmd_extract(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.features)
        if args.command == "sweep-features":
            return cmd_sweep_features(cfg)
        if args.command == "sweep-levels":
            return cmd_sweep_levels(cfg)
        if args.command == "synth":
            return cmd_synth(cfg)
    except ConfigError as exc:
        print(f"cfc-eeg: error: {exc}", file=sys.stderr)
        return 2
    except (CommandError, evaluation.EvaluationError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"cfc-eeg: failed: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
