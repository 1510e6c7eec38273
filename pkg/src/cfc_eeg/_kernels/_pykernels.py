"""Pure numpy versions of the compiled kernels (same signatures, same results)."""
import numpy as np


def atrous_conv(x, taps, step):
    """Circular convolution of ``x`` with ``taps`` spread ``step`` samples apart."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    taps = np.ascontiguousarray(taps, dtype=np.float64)
    out = np.zeros_like(x)
    for k, tap in enumerate(taps):
        out += tap * np.roll(x, k * step)
    return out


def plv_matrix(phases_a, phases_b):
    """Phase-locking value for every row pair of two phase matrices."""
    phases_a = np.ascontiguousarray(phases_a, dtype=np.float64)
    phases_b = np.ascontiguousarray(phases_b, dtype=np.float64)
    if phases_a.shape[1] != phases_b.shape[1]:
        raise ValueError("phase arrays must share their sample axis")
    if phases_a.shape[1] == 0:
        raise ValueError("phase arrays are empty")
    ua = np.exp(1j * phases_a)
    ub = np.exp(1j * phases_b)
    return np.abs(ua @ ub.conj().T) / phases_a.shape[1]
