"""Jordan-type chains of the pencil and the invariant subspaces they span.

A singular chain extends a seed backwards through
``C_0 x_{-n} + C_1 x_{-n-1} = 0``; its root-test rate bounds the inner
radius of the resolvent annulus.  A regular chain extends forwards through
``C_1 x_n + C_0 x_{n+1} = 0``; its rate is the reciprocal of the outer
radius.  The chain subspaces coincide with the ranges of the spectral
projections computed from the basic solution, which gives an independent
cross-check between the two routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ChainStepError, SingularMatrixError, UnsupportedModelError
from .pencil import COND_CAP, Array, LinearPencil, as_vector, spectral_norm


@dataclass(frozen=True)
class ChainResult:
    """A finite stretch of a chain with its decay/growth diagnostics.

    ``vectors[0]`` is the seed.  ``root_rates[i]`` is ``||x_n||^{1/n}``
    for n = i + 1; ``tail_ratio`` is the last consecutive norm ratio,
    which converges much faster than the root test on exactly geometric
    chains.  ``terminated`` marks a chain that hit (numerical) zero.
    """

    vectors: tuple[Array, ...]
    norms: tuple[float, ...]
    root_rates: tuple[float, ...]
    tail_ratio: float
    terminated: bool


def _extend(
    matrix: Array,
    partner: Array,
    seed: Array,
    steps: int,
    tol: float,
    project: Array | None,
) -> ChainResult:
    # Each step solves matrix @ x_next = -partner @ x_cur by least squares
    # and rejects inconsistent systems: the chain simply does not extend.
    scale = max(spectral_norm(matrix), spectral_norm(partner), 1.0)
    vectors = [seed]
    norms = [float(np.linalg.norm(seed))]
    if norms[0] == 0.0:
        raise ChainStepError("chain seed is the zero vector")
    terminated = False
    for _ in range(steps):
        rhs = -(partner @ vectors[-1])
        x_next, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
        if project is not None:
            # the coefficients respect the spectral split, so a projected
            # solution still solves; this strips cross-subspace seepage that
            # the ladder directions would otherwise amplify without bound
            x_next = project @ x_next
        residual = float(np.linalg.norm(matrix @ x_next - rhs))
        if residual > tol * scale * max(norms[-1], 1.0):
            raise ChainStepError(
                f"chain step has no solution: residual {residual:.3e} "
                f"at chain position {len(vectors)}"
            )
        nrm = float(np.linalg.norm(x_next))
        vectors.append(x_next)
        norms.append(nrm)
        if nrm <= tol * norms[0]:
            terminated = True
            break
    root_rates = tuple(norms[n] ** (1.0 / n) for n in range(1, len(norms)))
    tail_ratio = 0.0
    if len(norms) >= 2 and norms[-2] > 0:
        tail_ratio = norms[-1] / norms[-2]
    return ChainResult(
        vectors=tuple(vectors),
        norms=tuple(norms),
        root_rates=root_rates,
        tail_ratio=tail_ratio,
        terminated=terminated,
    )


def singular_chain(
    pencil: LinearPencil,
    seed,
    *,
    steps: int = 16,
    tol: float = 1e-9,
    project: Array | None = None,
) -> ChainResult:
    """Extend ``seed = x_{-1}`` through ``C_0 x_{-n} + C_1 x_{-n-1} = 0``.

    ``project`` optionally re-projects each iterate (pass the singular
    domain projection) to stop rounding noise from seeding a cross-subspace
    component that later steps amplify.
    """
    seed = as_vector(seed, pencil.dim, "seed")
    return _extend(pencil.c1, pencil.c0, seed, steps, tol, project)


def regular_chain(
    pencil: LinearPencil,
    seed,
    *,
    steps: int = 16,
    tol: float = 1e-9,
    project: Array | None = None,
) -> ChainResult:
    """Extend ``seed = x_1`` through ``C_1 x_n + C_0 x_{n+1} = 0``.

    ``C_0`` is singular at a unit root, so each step is a consistency-checked
    least-squares solve; seeds whose chain leaves the solvable set raise
    ChainStepError.  The minimum-norm solve picks one of many valid
    continuations; pass the regular domain projection as ``project`` to pin
    the chain to its subspace, otherwise a seeded singular-ladder component
    can dominate the growth diagnostics.
    """
    seed = as_vector(seed, pencil.dim, "seed")
    return _extend(pencil.c0, pencil.c1, seed, steps, tol, project)


def _slope_matrix(pencil: LinearPencil) -> Array:
    # M = C_1^{-1} C_0 carries the whole spectral picture: the anchor
    # singularity is its eigenvalue 0 and every other singularity sits at
    # offset -mu for an eigenvalue mu.
    cond = np.linalg.cond(pencil.c1)
    if not np.isfinite(cond) or cond > COND_CAP:
        raise UnsupportedModelError(
            "chain bases need an invertible slope coefficient "
            f"(condition estimate {cond:.3e})"
        )
    try:
        return np.linalg.solve(pencil.c1, pencil.c0)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - cond cap fires first
        raise SingularMatrixError("slope coefficient is singular") from exc


def sin_basis(pencil: LinearPencil, *, zero_tol: float = 1e-6) -> Array:
    """Orthonormal basis of the singular subspace (columns).

    Computed as the reordered-Schur invariant subspace of
    ``M = C_1^{-1} C_0`` for the eigenvalue cluster at zero, which is the
    span of all terminating singular chains.
    """
    m = _slope_matrix(pencil)
    thr = zero_tol * (1.0 + spectral_norm(m))
    _, z, sdim = scipy.linalg.schur(
        m, output="complex", sort=lambda lam: bool(abs(lam) <= thr)
    )
    return z[:, :sdim]


def reg_basis(
    pencil: LinearPencil,
    *,
    zero_tol: float = 1e-6,
    rate_cap: float | None = None,
) -> Array:
    """Orthonormal basis of the regular subspace (columns).

    Complementary cluster to sin_basis.  ``rate_cap`` optionally keeps only
    chains whose growth rate ``1/|mu|`` stays at or below the cap, narrowing
    the subspace to a wider annulus.
    """
    m = _slope_matrix(pencil)
    thr = zero_tol * (1.0 + spectral_norm(m))

    def keep(lam: complex) -> bool:
        if abs(lam) <= thr:
            return False
        return rate_cap is None or 1.0 / abs(lam) <= rate_cap

    _, z, sdim = scipy.linalg.schur(m, output="complex", sort=keep)
    return z[:, :sdim]


def max_principal_angle(a: Array, b: Array) -> float:
    """Largest principal angle between the column spans (radians)."""
    if a.shape[1] != b.shape[1]:
        return float(np.pi / 2)
    if a.shape[1] == 0:
        return 0.0
    angles = scipy.linalg.subspace_angles(a, b)
    return float(angles.max()) if angles.size else 0.0
