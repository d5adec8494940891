"""Timing comparison of the compiled kernels against the numpy fallback.

Run as ``python3 benchmarks/bench_kernels.py``.  Both implementations are
imported directly so one process can time them side by side; agreement is
asserted before any number is printed.
"""

from __future__ import annotations

import time

import numpy as np

from gjrep import _kernels_py

try:
    from gjrep import _kernels
except ImportError:
    _kernels = None

RNG = np.random.default_rng(99)


def cplx(shape):
    return RNG.standard_normal(shape) + 1j * RNG.standard_normal(shape)


def contraction(n):
    # keep the iteration bounded so the comparison is meaningful
    g = cplx((n, n))
    return 0.5 * g / np.linalg.norm(g, 2)


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_case(label, make_args, runner):
    args = make_args()
    t_py, out_py = best_of(lambda: runner(_kernels_py, *args))
    row = f"{label:<44} python {t_py * 1e3:8.2f} ms"
    if _kernels is not None:
        t_c, out_c = best_of(lambda: runner(_kernels, *args))
        err = np.max(np.abs(np.asarray(out_c) - np.asarray(out_py)))
        assert err <= 1e-12, f"{label}: implementations disagree by {err:.2e}"
        row += f"   compiled {t_c * 1e3:8.2f} ms   speedup {t_py / t_c:5.1f}x"
    print(row)


def run_recursion(impl, step, drive, x0):
    return impl.arma_recursion(step, drive, x0)


def run_stack(impl, stack, signal):
    return impl.causal_stack_apply(stack, signal)


def main():
    if _kernels is None:
        print("compiled extension not available; timing the fallback only")
    cases = [
        ("recursion T=2000 n=10 m=1", lambda: (contraction(10), cplx((2000, 10, 1)), cplx((10, 1)))),
        ("recursion T=2000 n=10 m=100", lambda: (contraction(10), cplx((2000, 10, 100)), cplx((10, 100)))),
        ("recursion T=20000 n=4 m=16", lambda: (contraction(4), cplx((20000, 4, 16)), cplx((4, 16)))),
    ]
    for label, make_args in cases:
        bench_case(label, make_args, run_recursion)
    cases = [
        ("causal stack S=64 T=1000 n=10", lambda: (cplx((64, 10, 10)), cplx((1000, 10)))),
        ("causal stack S=200 T=2000 n=4", lambda: (cplx((200, 4, 4)), cplx((2000, 4)))),
    ]
    for label, make_args in cases:
        bench_case(label, make_args, run_stack)


if __name__ == "__main__":
    main()
