"""Stationary (undecimated) wavelet transform with Daubechies-4 filters.

The à-trous recursion convolves the running approximation with filters whose
taps are spread ``2**(level-1)`` samples apart, so every band keeps the input
length. Boundaries are periodic and no phase-alignment shift is applied;
upsampled filters longer than the signal simply wrap around.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import atrous_conv

MAX_LEVELS = 9

# Daubechies orthonormal scaling filter, 4 vanishing moments (8 taps).
_DB4_LOWPASS = np.array([
    0.23037781330885523,
    0.7148465705525415,
    0.6308807679295904,
    -0.02798376941698385,
    -0.18703481171888114,
    0.030841381835986965,
    0.032883011666982945,
    -0.010597401784997278,
])
_DB4_LOWPASS.setflags(write=False)
_DB4_HIGHPASS = np.array([(-1) ** k * _DB4_LOWPASS[7 - k] for k in range(8)])
_DB4_HIGHPASS.setflags(write=False)


@dataclass(frozen=True)
class SwtConfig:
    levels: int = 7
    boundary: str = "periodic"

    def __post_init__(self):
        if not 1 <= self.levels <= MAX_LEVELS:
            raise ValueError(f"levels must be in [1, {MAX_LEVELS}], got {self.levels}")
        if self.boundary != "periodic":
            raise ValueError(f"unsupported boundary mode {self.boundary!r}")


@dataclass(frozen=True)
class BandSet:
    """SWT output, ordered ``[A_L, D_L, ..., D_1]``."""

    band_ids: tuple
    coefficients: np.ndarray  # shape (levels + 1, N)

    @property
    def levels(self) -> int:
        return len(self.band_ids) - 1

    @property
    def signal_length(self) -> int:
        return self.coefficients.shape[1]

    def __getitem__(self, band_id: str) -> np.ndarray:
        return self.coefficients[self.band_ids.index(band_id)]

    def __len__(self):
        return len(self.band_ids)


def band_ids(levels: int) -> tuple:
    return (f"A{levels}",) + tuple(f"D{l}" for l in range(levels, 0, -1))


def db4_filters():
    """Return the (lowpass, highpass) decomposition pair; read-only arrays."""
    return _DB4_LOWPASS, _DB4_HIGHPASS


def upsample_filter(taps, level: int) -> np.ndarray:
    """Insert ``2**(level-1) - 1`` zeros between consecutive taps."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    taps = np.asarray(taps, dtype=np.float64)
    step = 2 ** (level - 1)
    out = np.zeros((taps.size - 1) * step + 1)
    out[::step] = taps
    return out


def swt_decompose(signal, config: SwtConfig = SwtConfig()) -> BandSet:
    x = np.ascontiguousarray(signal, dtype=np.float64)
    n = x.size
    levels = config.levels
    if x.ndim != 1 or n == 0 or n % 2 ** levels:
        raise ValueError(
            f"signal of length N={n} cannot be decomposed to {levels} levels: "
            f"N must be divisible by {2 ** levels}")
    lo, hi = db4_filters()
    details = []
    approx = x
    for level in range(1, levels + 1):
        step = 2 ** (level - 1)
        details.append(atrous_conv(approx, hi, step))
        approx = atrous_conv(approx, lo, step)
    coeffs = np.vstack([approx] + details[::-1])
    return BandSet(band_ids(levels), coeffs)
