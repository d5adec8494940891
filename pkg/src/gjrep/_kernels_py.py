"""Pure-numpy fallback for the compiled kernels.

Signatures and semantics must match ``gjrep._kernels`` exactly; the test
suite runs both implementations against each other.
"""

from __future__ import annotations

import numpy as np

IMPL = "python"


def arma_recursion(step: np.ndarray, drive: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """Iterate ``x[t] = step @ x[t-1] + drive[t]`` for t = 0..T-1.

    Parameters
    ----------
    step : (n, n) complex ndarray
    drive : (T, n, m) complex ndarray
        Forcing term per step; m is a batch axis (independent columns).
    x0 : (n, m) complex ndarray
        State at t = -1.

    Returns
    -------
    (T, n, m) complex ndarray with the state at t = 0..T-1.
    """
    T = drive.shape[0]
    out = np.empty_like(drive)
    prev = x0
    for t in range(T):
        prev = step @ prev + drive[t]
        out[t] = prev
    return out


def causal_stack_apply(stack: np.ndarray, signal: np.ndarray) -> np.ndarray:
    """Causal convolution ``out[t] = sum_{s=0}^{min(t, S-1)} stack[s] @ signal[t-s]``.

    Parameters
    ----------
    stack : (S, n, n) complex ndarray
    signal : (T, n) complex ndarray

    Returns
    -------
    (T, n) complex ndarray.
    """
    T = signal.shape[0]
    S = stack.shape[0]
    out = np.zeros_like(signal)
    for t in range(T):
        s_hi = min(t, S - 1)
        # window of signal[t-s] for s = 0..s_hi, oldest first
        window = signal[t - s_hi : t + 1][::-1]
        out[t] = np.einsum("sij,sj->i", stack[: s_hi + 1], window)
    return out
