"""Independent oracles used by the test suite.

Everything here is deliberately written against the bare definitions with
plain numpy loops, sharing no code with the package internals, so the two
sides of every comparison fail independently.
"""

from __future__ import annotations

from math import comb

import numpy as np


def trapezoid_laurent(c0, c1, j, radius, nodes=4096):
    """Laurent coefficient by direct quadrature of the Cauchy integral.

    T_j = (1/2 pi i) \\oint R(z) (z - 1)^{-j-1} dz over |z - 1| = radius,
    evaluated with a plain uniform trapezoid rule and numpy.linalg.inv.
    """
    c0 = np.asarray(c0, dtype=np.complex128)
    c1 = np.asarray(c1, dtype=np.complex128)
    n = c0.shape[0]
    acc = np.zeros((n, n), dtype=np.complex128)
    for m in range(nodes):
        w = radius * np.exp(2j * np.pi * m / nodes)
        acc += np.linalg.inv(c0 + c1 * w) * w ** (-j)
    return acc / nodes


def binom_diff(y, ell):
    """ell-fold backward difference via the explicit binomial sum.

    Input rows are y[t]; output rows are sum_i (-1)^i C(ell, i) y[t - i],
    defined for t >= ell (the output is shorter by ell rows).
    """
    y = np.asarray(y)
    T = y.shape[0]
    out = np.zeros((T - ell,) + y.shape[1:], dtype=y.dtype)
    for t in range(ell, T):
        for i in range(ell + 1):
            out[t - ell] += (-1) ** i * comb(ell, i) * y[t - i]
    return out


def arma_pq_path(a_coeffs, f_coeffs, w_values, w_start, t_end):
    """Direct ARMA(p, q) recursion with zero presample state.

    Solves a_0 x(t) + ... + a_p x(t-p) = f_0 w(t) + ... + f_q w(t-q) for
    t = 0..t_end, with x(s) = 0 for s < 0.  ``w_values[i]`` is w(w_start + i)
    and must cover [-q, t_end].
    """
    a_coeffs = [np.asarray(a, dtype=np.complex128) for a in a_coeffs]
    f_coeffs = [np.asarray(f, dtype=np.complex128) for f in f_coeffs]
    p = len(a_coeffs) - 1
    q = len(f_coeffs) - 1
    n = a_coeffs[0].shape[0]
    assert w_start <= -q

    def w_at(t):
        return np.asarray(w_values[t - w_start], dtype=np.complex128)

    xs = {}

    def x_at(t):
        if t < 0:
            return np.zeros(n, dtype=np.complex128)
        return xs[t]

    for t in range(t_end + 1):
        rhs = np.zeros(n, dtype=np.complex128)
        for jj in range(q + 1):
            rhs += f_coeffs[jj] @ w_at(t - jj)
        for i in range(1, p + 1):
            rhs -= a_coeffs[i] @ x_at(t - i)
        xs[t] = np.linalg.solve(a_coeffs[0], rhs)
    return np.stack([xs[t] for t in range(t_end + 1)])


def scalar_laurent(c0, c1, j):
    """Closed-form Laurent coefficient of 1 / (c0 + c1 (z-1)) at z = 1."""
    if c0 == 0:
        return 1.0 / c1 if j == -1 else 0.0
    if j < 0:
        return 0.0
    return (-1) ** j * c1**j / c0 ** (j + 1)


def random_unit_root_pencil(rng, n, order, mu_min=0.4, mu_max=4.0):
    """Engineered pencil with a pole of the requested order at z = 1.

    Builds M = S (J_order(0) + diag(mu)) S^{-1} with |mu| in
    [mu_min, mu_max], then C1 invertible random and C0 = C1 M, so
    A(z) = C1 (M + (z-1) I): the nilpotent block forces a pole of order
    ``order`` and the mu's are the other singularity offsets.
    """
    assert 1 <= order <= n
    jordan = np.zeros((n, n), dtype=np.complex128)
    for i in range(order - 1):
        jordan[i, i + 1] = 1.0
    n_extra = n - order
    radii = mu_min + (mu_max - mu_min) * rng.random(n_extra)
    angles = 2 * np.pi * rng.random(n_extra)
    for i, (r, a) in enumerate(zip(radii, angles)):
        jordan[order + i, order + i] = r * np.exp(1j * a)
    while True:
        s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(s) < 50:
            break
    m = s @ jordan @ np.linalg.inv(s)
    while True:
        c1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(c1) < 50:
            break
    c0 = c1 @ m
    return c0, c1
