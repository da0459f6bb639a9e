"""The compiled and numpy backends must agree."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmct import kernels
from hmct._kernels_py import fold_product, sos_gains, tdl_apply

from .conftest import crandn


def test_backend_reported():
    assert kernels.BACKEND in kernels.BACKENDS


def test_sos_gains_matches_direct_sum(backend, rng):
    amps = crandn(rng, 3, 5)
    nus = rng.uniform(-0.02, 0.02, (3, 5))
    k = np.arange(1000)
    expected = np.array([[np.sum(amps[i] * np.exp(2j * np.pi * nus[i] * kk)) for kk in k] for i in range(3)])
    assert np.allclose(backend.sos_gains(amps, nus, 1000), expected, atol=1e-12)


def test_tdl_apply_matches_loop(backend, rng):
    x = crandn(rng, 64)
    gains = crandn(rng, 3, 64)
    delays = np.array([0, 2, 70])
    expected = np.zeros(64, complex)
    for k in range(64):
        for i, d in enumerate(delays):
            if 0 <= k - d < 64:
                expected[k] += gains[i, k] * x[k - d]
    assert np.allclose(backend.tdl_apply(x, gains, delays), expected, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 300), period=st.integers(1, 64), seed=st.integers(0, 2**32 - 1))
def test_fold_backends_agree(n, period, seed):
    rng = np.random.default_rng(seed)
    seg, w = crandn(rng, n), crandn(rng, n)
    expected = np.zeros(period, complex)
    for k in range(n):
        expected[k % period] += seg[k] * w[k]
    for impl in kernels.BACKENDS.values():
        assert np.allclose(impl.fold_product(seg, w, period), expected, atol=1e-12)


def test_backends_agree_on_long_sos(rng):
    if "cython" not in kernels.BACKENDS:
        pytest.skip("compiled extension not built")
    amps, nus = crandn(rng, 8, 32), rng.uniform(-0.01, 0.01, (8, 32))
    a = kernels.BACKENDS["cython"].sos_gains(amps, nus, 20000)
    b = sos_gains(amps, nus, 20000)
    assert np.max(np.abs(a - b)) < 1e-10


def test_python_reference_functions_exported():
    assert callable(fold_product) and callable(tdl_apply)
