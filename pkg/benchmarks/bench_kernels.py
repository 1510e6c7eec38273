"""Compare the compiled and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]

Times ``atrous_conv`` and ``plv_matrix`` on trial-sized inputs, then full
per-trial feature extraction with each backend patched in.
"""
import argparse
import timeit
from contextlib import contextmanager

import numpy as np

from cfc_eeg import cfc, wavelet
from cfc_eeg._kernels import _pykernels

try:
    from cfc_eeg._kernels import _ckernels
except ImportError:
    _ckernels = None


@contextmanager
def backend(module):
    saved = wavelet.atrous_conv, cfc.plv_matrix
    wavelet.atrous_conv, cfc.plv_matrix = module.atrous_conv, module.plv_matrix
    try:
        yield
    finally:
        wavelet.atrous_conv, cfc.plv_matrix = saved


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return
    rng = np.random.default_rng(0)
    x = rng.standard_normal(4096)
    taps = wavelet.upsample_filter(wavelet.db4_filters()[0], 1)
    phases = rng.uniform(-np.pi, np.pi, (8, 4096))
    signal = rng.standard_normal(4096)
    config = wavelet.SwtConfig(7)

    def extract():
        cfc.extract_features(wavelet.swt_decompose(signal, config))

    cases = [
        ("atrous_conv N=4096 step=64", lambda m: (lambda: m.atrous_conv(x, taps, 64)), 200),
        ("plv_matrix 8x8 N=4096", lambda m: (lambda: m.plv_matrix(phases, phases)), 50),
    ]
    print(f"{'kernel':32s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}")
    for label, make, number in cases:
        tp = best(make(_pykernels), args.repeat, number)
        tc = best(make(_ckernels), args.repeat, number)
        print(f"{label:32s} {1e3 * tp:12.4f} {1e3 * tc:12.4f} {tp / tc:8.2f}")
    timings = {}
    for name, module in (("python", _pykernels), ("cython", _ckernels)):
        with backend(module):
            timings[name] = best(extract, args.repeat, 10)
    print(f"{'extract_features 7 levels':32s} {1e3 * timings['python']:12.4f} "
          f"{1e3 * timings['cython']:12.4f} {timings['python'] / timings['cython']:8.2f}")


if __name__ == "__main__":
    main()
