# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping kernels.

Same contracts as gjrep._kernels_py; that module is the reference
implementation and the equivalence is covered by tests.
"""

import numpy as np

IMPL = "cython"


def arma_recursion(double complex[:, :] step,
                   double complex[:, :, :] drive,
                   double complex[:, :] x0):
    cdef Py_ssize_t T = drive.shape[0]
    cdef Py_ssize_t n = drive.shape[1]
    cdef Py_ssize_t m = drive.shape[2]
    out_arr = np.empty((T, n, m), dtype=np.complex128)
    prev_arr = np.array(x0, dtype=np.complex128, copy=True)
    cdef double complex[:, :, :] out = out_arr
    cdef double complex[:, :] prev = prev_arr
    cdef double complex acc
    cdef Py_ssize_t t, i, j, b
    for t in range(T):
        for i in range(n):
            for b in range(m):
                acc = drive[t, i, b]
                for j in range(n):
                    acc = acc + step[i, j] * prev[j, b]
                out[t, i, b] = acc
        for i in range(n):
            for b in range(m):
                prev[i, b] = out[t, i, b]
    return out_arr


def causal_stack_apply(double complex[:, :, :] stack,
                       double complex[:, :] signal):
    cdef Py_ssize_t T = signal.shape[0]
    cdef Py_ssize_t S = stack.shape[0]
    cdef Py_ssize_t n = signal.shape[1]
    out_arr = np.zeros((T, n), dtype=np.complex128)
    cdef double complex[:, :] out = out_arr
    cdef double complex acc
    cdef Py_ssize_t t, s, i, j, s_hi
    for t in range(T):
        s_hi = t if t < S - 1 else S - 1
        for i in range(n):
            acc = 0
            for s in range(s_hi + 1):
                for j in range(n):
                    acc = acc + stack[s, i, j] * signal[t - s, j]
            out[t, i] = acc
    return out_arr
