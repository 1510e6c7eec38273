"""Bonn EEG ingestion: plain-text records, the five sets A-E and the binary cases.

Each Bonn file holds one ASCII sample per line (4097 samples at 173.61 Hz).
Sets may live in directories named by letter (``A`` .. ``E``) or by the
original Bonn folder names (``Z``, ``O``, ``N``, ``F``, ``S``), or be listed in
a manifest with lines ``SET <letter> <path>``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SET_LABELS = ("A", "B", "C", "D", "E")
BONN_FOLDERS = {"A": "Z", "B": "O", "C": "N", "D": "F", "E": "S"}
DEFAULT_SAMPLING_RATE = 173.61
DEFAULT_LENGTH = 4096


class IngestionError(ValueError):
    """A record or manifest could not be read."""


@dataclass(frozen=True)
class EegRecord:
    id: str
    set_label: str
    samples: np.ndarray = field(repr=False)
    sampling_rate_hz: float = DEFAULT_SAMPLING_RATE

    def __post_init__(self):
        if self.set_label not in SET_LABELS:
            raise ValueError(f"unknown set label {self.set_label!r}")

    @property
    def index(self) -> int:
        return int(self.id[1:])


@dataclass(frozen=True)
class CaseSpec:
    name: str
    negative_sets: frozenset
    positive_sets: frozenset = frozenset("E")

    def __post_init__(self):
        if self.negative_sets & self.positive_sets:
            raise ValueError("a set cannot be both positive and negative")

    @property
    def sets(self) -> frozenset:
        return self.negative_sets | self.positive_sets


CASES = {
    "I": CaseSpec("I", frozenset("A")),
    "II": CaseSpec("II", frozenset("B")),
    "III": CaseSpec("III", frozenset("C")),
    "IV": CaseSpec("IV", frozenset("D")),
    "V": CaseSpec("V", frozenset("ABCD")),
}


@dataclass
class LabeledDataset:
    """Records with binary classes (0 = seizure-free, 1 = seizure)."""

    records: list
    labels: np.ndarray
    name: str = ""

    def __len__(self):
        return len(self.records)

    @property
    def ids(self) -> list:
        return [r.id for r in self.records]

    def class_counts(self) -> tuple:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))


def get_case(name: str) -> CaseSpec:
    try:
        return CASES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown case {name!r}; expected one of {', '.join(CASES)}") from None


def load_record(path, set_label: str, index: int,
                sampling_rate_hz: float = DEFAULT_SAMPLING_RATE) -> EegRecord:
    """Parse one Bonn text file into an :class:`EegRecord`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read file ({exc.strerror})") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise IngestionError(f"{path}:{lineno}: non-numeric sample {token!r}") from None
    if len(values) < 2:
        raise IngestionError(f"{path}: expected at least 2 samples, found {len(values)}")
    return EegRecord(f"{set_label}{index:03d}", set_label, np.asarray(values), sampling_rate_hz)


def format_samples(samples: Iterable[float]) -> str:
    """One sample per line; integral values are written without a decimal point."""
    lines = []
    for v in samples:
        v = float(v)
        lines.append(str(int(v)) if v.is_integer() else repr(v))
    return "\n".join(lines) + "\n"


def write_record(record: EegRecord, path) -> None:
    Path(path).write_text(format_samples(record.samples))


def preprocess(record: EegRecord, target_length: int = DEFAULT_LENGTH) -> EegRecord:
    """Keep the first ``target_length`` samples and remove their mean."""
    x = record.samples
    if x.size < target_length:
        raise ValueError(f"record {record.id} has {x.size} samples, need {target_length}")
    kept = np.array(x[:target_length], dtype=np.float64)
    kept -= kept.mean()
    return replace(record, samples=kept)


_INDEX_RE = re.compile(r"(\d+)")


def _file_index(path: Path) -> int:
    digits = _INDEX_RE.findall(path.stem)
    if not digits:
        raise IngestionError(f"{path}: cannot infer record index from file name")
    return int(digits[-1])


def load_set_dir(directory, set_label: str,
                 sampling_rate_hz: float = DEFAULT_SAMPLING_RATE) -> list:
    directory = Path(directory)
    files = sorted(p for p in directory.iterdir()
                   if p.is_file() and p.suffix.lower() == ".txt")
    if not files:
        raise IngestionError(f"{directory}: no .txt records for set {set_label}")
    records = [load_record(p, set_label, _file_index(p), sampling_rate_hz) for p in files]
    return sorted(records, key=lambda r: r.index)


def read_manifest(path) -> dict:
    """Parse ``SET <letter> <path>`` lines; relative paths resolve against the manifest."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise IngestionError(f"{path}: cannot read manifest ({exc.strerror})") from exc
    sets = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(maxsplit=2)
        if len(parts) != 3 or parts[0].upper() != "SET" or parts[1].upper() not in SET_LABELS:
            raise IngestionError(f"{path}:{lineno}: expected 'SET <A-E> <path>', got {line!r}")
        target = Path(parts[2])
        if not target.is_absolute():
            target = path.parent / target
        sets[parts[1].upper()] = target
    return sets


def discover_sets(root) -> dict:
    """Map set letters to subdirectories of ``root`` (letter or Bonn folder names)."""
    root = Path(root)
    found = {}
    for label in SET_LABELS:
        for name in (label, label.lower(), BONN_FOLDERS[label], BONN_FOLDERS[label].lower()):
            if (root / name).is_dir():
                found[label] = root / name
                break
    return found


def load_bonn(source, sampling_rate_hz: float = DEFAULT_SAMPLING_RATE,
              sets: Sequence[str] = SET_LABELS) -> list:
    """Load records from a manifest file or a dataset root directory."""
    source = Path(source)
    if not source.exists():
        raise IngestionError(f"{source}: no such manifest or data directory")
    mapping = read_manifest(source) if source.is_file() else discover_sets(source)
    records = []
    for label in sets:
        if label in mapping:
            records.extend(load_set_dir(mapping[label], label, sampling_rate_hz))
    return records


def build_case(spec: CaseSpec, records: Sequence[EegRecord],
               expect_per_set: int | None = None) -> LabeledDataset:
    """Select the case's sets and label them, ordered by set letter then index."""
    present = {r.set_label for r in records}
    missing = sorted(spec.sets - present)
    if missing:
        raise ValueError(f"case {spec.name}: missing set(s) {', '.join(missing)}")
    chosen = sorted((r for r in records if r.set_label in spec.sets),
                    key=lambda r: (r.set_label, r.index))
    if expect_per_set is not None:
        for label in sorted(spec.sets):
            n = sum(r.set_label == label for r in chosen)
            if n != expect_per_set:
                raise ValueError(f"case {spec.name}: set {label} has {n} records, "
                                 f"expected {expect_per_set}")
    labels = np.array([1 if r.set_label in spec.positive_sets else 0 for r in chosen])
    return LabeledDataset(chosen, labels, name=spec.name)


def prepare_case(spec: CaseSpec, records: Sequence[EegRecord],
                 target_length: int = DEFAULT_LENGTH) -> LabeledDataset:
    ds = build_case(spec, records)
    ds.records = [preprocess(r, target_length) for r in ds.records]
    return ds

