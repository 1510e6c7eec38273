"""Analytic signal by the one-sided spectrum method, plus amplitude and phase."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AnalyticBand:
    amplitude: np.ndarray
    phase: np.ndarray
    source_band_id: str = ""

    def __len__(self):
        return self.amplitude.size


def _spectral_weights(n: int) -> np.ndarray:
    w = np.zeros(n)
    w[0] = 1.0
    w[n // 2] = 1.0
    w[1:n // 2] = 2.0
    return w


def analytic_signal(x) -> np.ndarray:
    """Complex signal whose real part is ``x`` and with no negative frequencies.

    Works along the last axis, so a 2-D array is transformed row by row.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    if n < 4 or n % 2:
        raise ValueError(f"analytic signal needs an even length >= 4, got {n}")
    spectrum = np.fft.fft(x, axis=-1)
    return np.fft.ifft(spectrum * _spectral_weights(n), axis=-1)


def amplitude_phase(z, source_band_id: str = "") -> AnalyticBand:
    """Modulus and four-quadrant angle in (-pi, pi]; zero samples get phase 0."""
    z = np.asarray(z, dtype=np.complex128)
    amplitude = np.abs(z)
    phase = np.arctan2(z.imag, z.real)
    # arctan2 returns -pi for (-x, -0.0); fold onto +pi.
    phase[phase == -np.pi] = np.pi
    phase[amplitude == 0] = 0.0
    return AnalyticBand(amplitude, phase, source_band_id)


def analytic_band(x, source_band_id: str = "") -> AnalyticBand:
    return amplitude_phase(analytic_signal(x), source_band_id)
