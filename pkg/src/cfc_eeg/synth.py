"""Synthetic two-class trials with controlled phase-amplitude coupling.

Coupled trials (class 1)::

    x(t) = (1 + m cos(2 pi f_L t + a)) cos(2 pi f_H t + phi) + cos(2 pi f_L t + a) + noise

Uncoupled trials (class 0) use the same components, but the modulator phase
follows a random walk, so the envelope of the f_H band drifts against the
phase of the f_L band. Both classes have the same line frequencies and power.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cfc import FeatureDescriptor
from .dataset import DEFAULT_SAMPLING_RATE, EegRecord, LabeledDataset, format_samples


@dataclass(frozen=True)
class SynthSpec:
    n_trials: int = 100
    length: int = 4096
    sampling_rate_hz: float = DEFAULT_SAMPLING_RATE
    f_high: float = 32.0
    f_low: float = 4.0
    depth: float = 0.9
    noise: float = 0.1
    seed: int = 0
    levels: int = 7
    phase_jitter: float = 0.3  # rad per sample, random-walk step of the null modulator

    def __post_init__(self):
        nyquist = self.sampling_rate_hz / 2
        if not 0 < self.f_low < self.f_high < nyquist:
            raise ValueError(f"need 0 < f_low < f_high < {nyquist:g} Hz, "
                             f"got f_low={self.f_low}, f_high={self.f_high}")
        if not 0.0 <= self.depth <= 1.0:
            raise ValueError(f"modulation depth must be in [0, 1], got {self.depth}")
        if self.noise < 0 or self.n_trials < 1 or self.length < 4:
            raise ValueError("noise must be >= 0, n_trials >= 1 and length >= 4")
        low, high = self.band_pair
        if low == high:
            raise ValueError(f"f_low and f_high fall in the same band {low}")

    def band_of(self, freq: float) -> str:
        """Nominal SWT band: D_l covers [fs/2^(l+1), fs/2^l), A_L the rest below."""
        fs = self.sampling_rate_hz
        for level in range(1, self.levels + 1):
            if freq >= fs / 2 ** (level + 1):
                return f"D{level}"
        return f"A{self.levels}"

    @property
    def band_pair(self) -> tuple:
        return self.band_of(self.f_low), self.band_of(self.f_high)

    @property
    def coupling_feature(self) -> FeatureDescriptor:
        """The PAC descriptor that carries the injected coupling."""
        return FeatureDescriptor("PAC", *self.band_pair)


def _trial(spec: SynthSpec, coupled: bool, rng: np.random.Generator) -> np.ndarray:
    t = np.arange(spec.length) / spec.sampling_rate_hz
    a = rng.uniform(-np.pi, np.pi)
    phi = rng.uniform(-np.pi, np.pi)
    low = 2 * np.pi * spec.f_low * t + a
    if coupled:
        mod = low
    else:
        walk = np.cumsum(rng.normal(0.0, spec.phase_jitter, spec.length))
        mod = low + rng.uniform(-np.pi, np.pi) + walk
    x = (1 + spec.depth * np.cos(mod)) * np.cos(2 * np.pi * spec.f_high * t + phi) + np.cos(low)
    return x + spec.noise * rng.standard_normal(spec.length)


def generate(spec: SynthSpec = SynthSpec()) -> LabeledDataset:
    """Class 0 trials get set label ``A`` and class 1 trials ``E``."""
    records, labels = [], []
    for cls, set_label in ((0, "A"), (1, "E")):
        for i in range(spec.n_trials):
            rng = np.random.default_rng([spec.seed, cls, i])
            x = _trial(spec, coupled=bool(cls), rng=rng)
            records.append(EegRecord(f"{set_label}{i + 1:03d}", set_label, x,
                                     spec.sampling_rate_hz))
            labels.append(cls)
    return LabeledDataset(records, np.array(labels), name="synth")


def write_bonn_tree(dataset: LabeledDataset, root, scale: float = 100.0) -> Path:
    """Write trials as Bonn-style integer text files under ``root/<set>/``.

    Samples are multiplied by ``scale`` and rounded. Returns the manifest path.
    """
    root = Path(root)
    dirs = {}
    for rec in dataset.records:
        d = root / rec.set_label
        if rec.set_label not in dirs:
            d.mkdir(parents=True, exist_ok=True)
            dirs[rec.set_label] = d
        (d / f"{rec.id}.txt").write_text(format_samples(np.rint(rec.samples * scale)))
    manifest = root / "manifest.txt"
    manifest.write_text("".join(f"SET {s} {s}\n" for s in sorted(dirs)))
    return manifest
