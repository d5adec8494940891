"""Compiled and fallback kernels must agree bit-for-bit in semantics."""

import numpy as np
import pytest

from gjrep import _kernels_py, kernels

try:
    from gjrep import _kernels
except ImportError:
    _kernels = None

RNG = np.random.default_rng(321)


def _pair(shape):
    return RNG.standard_normal(shape) + 1j * RNG.standard_normal(shape)


def test_impl_selected():
    assert kernels.IMPL in ("cython", "python")


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
def test_arma_recursion_parity():
    step = 0.4 * _pair((3, 3))
    drive = _pair((57, 3, 4))
    x0 = _pair((3, 4))
    got_c = np.asarray(_kernels.arma_recursion(step, drive, x0))
    got_py = _kernels_py.arma_recursion(step, drive, x0)
    assert got_c.shape == got_py.shape == (57, 3, 4)
    assert np.max(np.abs(got_c - got_py)) <= 1e-13


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
def test_causal_stack_parity():
    stack = _pair((9, 4, 4))
    signal = _pair((40, 4))
    got_c = np.asarray(_kernels.causal_stack_apply(stack, signal))
    got_py = _kernels_py.causal_stack_apply(stack, signal)
    assert got_c.shape == got_py.shape == (40, 4)
    assert np.max(np.abs(got_c - got_py)) <= 1e-13


def test_arma_recursion_semantics():
    # Direct unrolled check against the recurrence definition.
    step = 0.3 * _pair((2, 2))
    drive = _pair((5, 2, 1))
    x0 = _pair((2, 1))
    out = kernels.arma_recursion(step, drive, x0)
    prev = x0
    for t in range(5):
        prev = step @ prev + drive[t]
        assert np.max(np.abs(out[t] - prev)) <= 1e-14


def test_causal_stack_semantics():
    stack = _pair((3, 2, 2))
    signal = _pair((6, 2))
    out = kernels.causal_stack_apply(stack, signal)
    for t in range(6):
        want = np.zeros(2, dtype=complex)
        for s in range(min(t, 2) + 1):
            want += stack[s] @ signal[t - s]
        assert np.max(np.abs(out[t] - want)) <= 1e-13


def test_stack_shorter_than_signal_and_longer():
    signal = _pair((4, 2))
    long_stack = _pair((10, 2, 2))
    short_stack = long_stack[:2]
    out_long = kernels.causal_stack_apply(long_stack, signal)
    # entries past the signal length never contribute
    out_trunc = kernels.causal_stack_apply(long_stack[:4], signal)
    assert np.max(np.abs(out_long - out_trunc)) <= 1e-14
    out_short = kernels.causal_stack_apply(short_stack, signal)
    want = np.array(
        [
            short_stack[0] @ signal[0],
            short_stack[0] @ signal[1] + short_stack[1] @ signal[0],
            short_stack[0] @ signal[2] + short_stack[1] @ signal[1],
            short_stack[0] @ signal[3] + short_stack[1] @ signal[2],
        ]
    )
    assert np.max(np.abs(out_short - want)) <= 1e-13
