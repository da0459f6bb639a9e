"""Pure numpy implementations of the hot kernels.

These are the reference semantics; the compiled module in ``_kernels.pyx``
must agree with them to rounding error.
"""
import numpy as np


def sos_gains(amplitudes, doppler, length):
    """Sum-of-sinusoids tap processes.

    ``out[i, k] = sum_q amplitudes[i, q] * exp(j 2 pi doppler[i, q] k)``
    """
    amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    doppler = np.ascontiguousarray(doppler, dtype=np.float64)
    k = np.arange(length, dtype=np.float64)
    out = np.empty((amplitudes.shape[0], length), dtype=np.complex128)
    for i in range(amplitudes.shape[0]):
        out[i] = amplitudes[i] @ np.exp(2j * np.pi * np.multiply.outer(doppler[i], k))
    return out


def tdl_apply(x, gains, delays):
    """Time-varying tapped delay line ``y[k] = sum_i gains[i, k] x[k - delays[i]]``."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    y = np.zeros(n, dtype=np.complex128)
    for i, d in enumerate(np.asarray(delays, dtype=np.int64)):
        if d >= n:
            continue
        y[d:] += gains[i, d:n] * x[: n - d]
    return y


def fold_product(segment, weights, period):
    """Hadamard product ``segment * weights`` folded modulo ``period``."""
    prod = np.asarray(segment, dtype=np.complex128) * weights
    q = -(-prod.size // period)
    padded = np.zeros(q * period, dtype=np.complex128)
    padded[: prod.size] = prod
    return padded.reshape(q, period).sum(axis=0)
