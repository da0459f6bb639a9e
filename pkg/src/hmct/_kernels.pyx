# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; semantics mirror ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()

# phasor recurrence drifts by ~1 ulp per step; re-anchor periodically
cdef Py_ssize_t RESYNC = 256


def sos_gains(amplitudes, doppler, Py_ssize_t length):
    cdef const double complex[:, ::1] a = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    cdef const double[:, ::1] nu = np.ascontiguousarray(doppler, dtype=np.float64)
    cdef Py_ssize_t n_taps = a.shape[0], n_osc = a.shape[1]
    out_arr = np.zeros((n_taps, length), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, q, k
    cdef double w
    cdef double complex p, step
    with nogil:
        for i in range(n_taps):
            for q in range(n_osc):
                w = 2.0 * M_PI * nu[i, q]
                step = cos(w) + 1j * sin(w)
                p = a[i, q]
                for k in range(length):
                    if k % RESYNC == 0:
                        p = a[i, q] * (cos(w * k) + 1j * sin(w * k))
                    out[i, k] = out[i, k] + p
                    p = p * step
    return out_arr


def tdl_apply(x, gains, delays):
    cdef const double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const double complex[:, ::1] g = np.ascontiguousarray(gains, dtype=np.complex128)
    cdef const long long[::1] d = np.ascontiguousarray(delays, dtype=np.int64)
    cdef Py_ssize_t n = xv.shape[0], n_taps = d.shape[0]
    y_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] y = y_arr
    cdef Py_ssize_t i, k, di
    with nogil:
        for i in range(n_taps):
            di = d[i]
            for k in range(di, n):
                y[k] = y[k] + g[i, k] * xv[k - di]
    return y_arr


def fold_product(segment, weights, Py_ssize_t period):
    cdef const double complex[::1] s = np.ascontiguousarray(segment, dtype=np.complex128)
    cdef const double complex[::1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef Py_ssize_t n = s.shape[0], k, j = 0
    out_arr = np.zeros(period, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    with nogil:
        for k in range(n):
            out[j] = out[j] + s[k] * w[k]
            j += 1
            if j == period:
                j = 0
    return out_arr
