# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the à-trous convolution and batched phase locking."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt

cnp.import_array()


def atrous_conv(const double[::1] x, const double[::1] taps, Py_ssize_t step):
    cdef Py_ssize_t n_samples = x.shape[0]
    cdef Py_ssize_t n_taps = taps.shape[0]
    cdef Py_ssize_t n, k, shift
    cdef double t
    out = np.zeros(n_samples, dtype=np.float64)
    cdef double[::1] y = out
    with nogil:
        # tap-outer, split at the wrap point so both inner loops are contiguous
        for k in range(n_taps):
            t = taps[k]
            shift = (k * step) % n_samples
            for n in range(shift):
                y[n] = y[n] + t * x[n - shift + n_samples]
            for n in range(shift, n_samples):
                y[n] = y[n] + t * x[n - shift]
    return out


def plv_matrix(const double[:, ::1] phases_a, const double[:, ::1] phases_b):
    cdef Py_ssize_t rows_a = phases_a.shape[0]
    cdef Py_ssize_t rows_b = phases_b.shape[0]
    cdef Py_ssize_t n_samples = phases_a.shape[1]
    if phases_b.shape[1] != n_samples:
        raise ValueError("phase arrays must share their sample axis")
    if n_samples == 0:
        raise ValueError("phase arrays are empty")
    ca_arr = np.cos(phases_a)
    sa_arr = np.sin(phases_a)
    cb_arr = np.cos(phases_b)
    sb_arr = np.sin(phases_b)
    cdef double[:, ::1] ca = ca_arr
    cdef double[:, ::1] sa = sa_arr
    cdef double[:, ::1] cb = cb_arr
    cdef double[:, ::1] sb = sb_arr
    out = np.empty((rows_a, rows_b), dtype=np.float64)
    cdef double[:, ::1] res = out
    cdef Py_ssize_t i, j, n
    cdef double re, im
    with nogil:
        for i in range(rows_a):
            for j in range(rows_b):
                re = 0.0
                im = 0.0
                # e^{i(a-b)} = (ca + i sa)(cb - i sb)
                for n in range(n_samples):
                    re = re + ca[i, n] * cb[j, n] + sa[i, n] * sb[j, n]
                    im = im + sa[i, n] * cb[j, n] - ca[i, n] * sb[j, n]
                res[i, j] = sqrt(re * re + im * im) / n_samples
    return out
