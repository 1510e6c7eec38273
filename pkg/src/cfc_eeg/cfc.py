"""Cross-frequency coupling between SWT bands.

Three measures are taken over band pairs:

* PPC: phase-locking value between the instantaneous phases of two bands.
* PAC: phase-locking value between one band's phase and the phase of another
  band's (mean-removed) amplitude envelope. Pairs are ordered.
* AAC: Pearson correlation of two bands' amplitude envelopes.

For ``B`` bands the pool holds ``C(B,2)`` PPC, ``B(B-1)`` PAC and ``C(B,2)``
AAC values, 112 in total for a 7-level decomposition.
"""
from __future__ import annotations

import csv
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from ._kernels import plv_matrix
from .analytic import AnalyticBand, amplitude_phase, analytic_signal
from .wavelet import BandSet, SwtConfig, band_ids, swt_decompose

KINDS = ("PPC", "PAC", "AAC")
_CONSTANT_RTOL = 1e-12


class DegenerateBandError(ValueError):
    """A band (or its envelope) is constant, so its phase is undefined."""

    def __init__(self, band_id: str, what: str = "band"):
        super().__init__(f"{what} {band_id} is constant")
        self.band_id = band_id


@dataclass(frozen=True)
class FeatureDescriptor:
    kind: str
    band_a: str
    band_b: str

    @property
    def name(self) -> str:
        if self.kind == "PAC":
            return f"PAC({self.band_a}->{self.band_b})"
        return f"{self.kind}({self.band_a},{self.band_b})"

    @classmethod
    def parse(cls, name: str) -> "FeatureDescriptor":
        m = re.fullmatch(r"(PPC|AAC)\((\w+),(\w+)\)|PAC\((\w+)->(\w+)\)", name.strip())
        if m is None:
            raise ValueError(f"not a feature name: {name!r}")
        if m.group(1):
            return cls(m.group(1), m.group(2), m.group(3))
        return cls("PAC", m.group(4), m.group(5))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FeatureVector:
    descriptors: tuple
    values: np.ndarray

    @property
    def names(self) -> list:
        return [d.name for d in self.descriptors]

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


def feature_descriptors(ids: Sequence[str]) -> tuple:
    """Canonical order: all PPC pairs, then ordered PAC pairs, then AAC pairs."""
    ppc = [FeatureDescriptor("PPC", a, b) for a, b in combinations(ids, 2)]
    pac = [FeatureDescriptor("PAC", a, b) for a, b in permutations(ids, 2)]
    aac = [FeatureDescriptor("AAC", a, b) for a, b in combinations(ids, 2)]
    return tuple(ppc + pac + aac)


def pool_size(n_bands: int) -> int:
    return 2 * n_bands * (n_bands - 1)


def plv(phase_a, phase_b) -> float:
    """Phase-locking value ``|mean(exp(i(a - b)))|``, 1:1 locking."""
    a = np.asarray(phase_a, dtype=np.float64)
    b = np.asarray(phase_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"phase sequences differ in shape: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("phase sequences are empty")
    return min(1.0, float(np.abs(np.mean(np.exp(1j * (a - b))))))


def _is_constant(x: np.ndarray, scale: float | None = None) -> bool:
    if scale is None:
        scale = float(np.max(np.abs(x))) if x.size else 0.0
    return scale == 0.0 or float(np.ptp(x)) <= _CONSTANT_RTOL * scale


def envelope_phase(amplitude, band_id: str = "") -> np.ndarray:
    """Phase of the analytic signal of the mean-removed envelope."""
    env = np.asarray(amplitude, dtype=np.float64)
    if _is_constant(env):
        raise DegenerateBandError(band_id, "amplitude envelope of")
    return amplitude_phase(analytic_signal(env - env.mean())).phase


def pac(phase_band: AnalyticBand, amp_band: AnalyticBand) -> float:
    """Locking of ``phase_band``'s phase to the phase of ``amp_band``'s envelope."""
    if len(phase_band) != len(amp_band):
        raise ValueError("bands differ in length")
    return plv(phase_band.phase, envelope_phase(amp_band.amplitude, amp_band.source_band_id))


def aac(amp_a, amp_b) -> float:
    """Pearson correlation of two envelopes."""
    a = np.asarray(amp_a, dtype=np.float64)
    b = np.asarray(amp_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"sequences differ in shape: {a.shape} vs {b.shape}")
    if a.size < 2:
        raise ValueError("correlation needs at least 2 samples")
    da = a - a.mean()
    db = b - b.mean()
    sa = np.sqrt(np.dot(da, da))
    sb = np.sqrt(np.dot(db, db))
    if sa == 0.0 or sb == 0.0 or _is_constant(a) or _is_constant(b):
        raise ValueError("correlation undefined for a constant sequence")
    return float(np.clip(np.dot(da, db) / (sa * sb), -1.0, 1.0))


def extract_features(bands: BandSet) -> FeatureVector:
    ids = bands.band_ids
    coeffs = bands.coefficients
    scale = float(np.max(np.abs(coeffs)))
    for band_id, row in zip(ids, coeffs):
        if _is_constant(row, scale):
            raise DegenerateBandError(band_id)

    analytic = amplitude_phase(analytic_signal(coeffs))
    amps, phases = analytic.amplitude, analytic.phase
    for band_id, env in zip(ids, amps):
        if _is_constant(env):
            raise DegenerateBandError(band_id, "amplitude envelope of")
    env_phases = amplitude_phase(analytic_signal(amps - amps.mean(axis=1, keepdims=True))).phase

    ppc = np.minimum(plv_matrix(phases, phases), 1.0)
    pac_m = np.minimum(plv_matrix(phases, env_phases), 1.0)
    centred = amps - amps.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", centred, centred))
    corr = np.clip((centred @ centred.T) / np.outer(norms, norms), -1.0, 1.0)

    n = len(ids)
    upper = list(combinations(range(n), 2))
    ordered = list(permutations(range(n), 2))
    values = np.concatenate([
        [ppc[i, j] for i, j in upper],
        [pac_m[i, j] for i, j in ordered],
        [corr[i, j] for i, j in upper],
    ])
    return FeatureVector(feature_descriptors(ids), values)


class FeatureExtractionError(ValueError):
    """One or more trials could not be processed; ``failures`` lists ``(index, error)``."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__(f"{len(self.failures)} trial(s) failed feature extraction: "
                         + "; ".join(f"trial {i}: {e}" for i, e in self.failures[:5]))


def feature_matrix(signals, config: SwtConfig = SwtConfig(), n_jobs: int = 1):
    """Features for every row of ``signals``; returns ``(matrix, descriptors)``.

    All failing rows are collected into a single :class:`FeatureExtractionError`.
    """
    def one(x):
        try:
            return extract_features(swt_decompose(x, config)).values
        except ValueError as exc:
            return exc

    signals = list(signals)
    if n_jobs == 1:
        rows = [one(x) for x in signals]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            rows = list(pool.map(one, signals))
    failures = [(i, r) for i, r in enumerate(rows) if isinstance(r, Exception)]
    if failures:
        raise FeatureExtractionError(failures)
    descriptors = feature_descriptors(band_ids(config.levels))
    if not rows:
        return np.empty((0, len(descriptors))), descriptors
    return np.vstack(rows), descriptors


def write_feature_csv(path, ids, x, labels, descriptors) -> None:
    """Header ``id, <feature names>, class``; values with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + [d.name for d in descriptors] + ["class"])
        for trial_id, row, label in zip(ids, x, labels):
            w.writerow([trial_id] + [format(float(v), ".17g") for v in row] + [int(label)])


def read_feature_csv(path):
    """Inverse of :func:`write_feature_csv`: ``(ids, matrix, labels, descriptors)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "id" or rows[0][-1] != "class":
        raise ValueError(f"{path}: not a feature CSV (expected 'id,...,class' header)")
    descriptors = tuple(FeatureDescriptor.parse(n) for n in rows[0][1:-1])
    body = rows[1:]
    ids = [r[0] for r in body]
    x = np.array([[float(v) for v in r[1:-1]] for r in body]).reshape(len(body), len(descriptors))
    labels = np.array([int(r[-1]) for r in body], dtype=np.int64)
    return ids, x, labels, descriptors
