"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set ``GJREP_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and to reproduce results on hosts without a compiler).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

if os.environ.get("GJREP_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPL: str = _impl.IMPL


def arma_recursion(step: np.ndarray, drive: np.ndarray, x0: np.ndarray) -> np.ndarray:
    step = np.ascontiguousarray(step, dtype=np.complex128)
    drive = np.ascontiguousarray(drive, dtype=np.complex128)
    x0 = np.ascontiguousarray(x0, dtype=np.complex128)
    return np.asarray(_impl.arma_recursion(step, drive, x0))


def causal_stack_apply(stack: np.ndarray, signal: np.ndarray) -> np.ndarray:
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    signal = np.ascontiguousarray(signal, dtype=np.complex128)
    return np.asarray(_impl.causal_stack_apply(stack, signal))
