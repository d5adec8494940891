"""Laurent analysis of a linear matrix pencil around an isolated singular point.

The pencil is stored in anchored form ``A(z) = C0 + C1*(z - 1)``: ``C0`` is the
(typically singular) value at the anchor ``z = 1`` and ``C1`` is the slope.  The
resolvent ``R(z) = A(z)^{-1}`` then has a Laurent expansion
``R(z) = sum_j T_j (z - 1)^j`` on a punctured annulus around the anchor, and the
pair ``(T_{-1}, T_0)`` determines every other coefficient through a pair of
one-step recurrences.  This module computes that pair by contour quadrature,
expands it, verifies the defining identities, classifies the singularity, and
evaluates the closed-form (partial-fraction) resolvent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.linalg

from .errors import (
    ContourNotConverged,
    FundamentalResidualError,
    InputError,
    ProjectionError,
    SingularMatrixError,
)

Array = np.ndarray

# Default tolerances; every check below scales them by the magnitude of the
# matrices involved, so they are relative, not absolute.
TOL_SOLVE = 1e-9
TOL_CONTOUR = 1e-9
TOL_FUND = 1e-9
COND_CAP = 1e12


def as_matrix(value, name: str = "matrix") -> Array:
    """Validate and convert to a square complex128 ndarray."""
    a = np.asarray(value, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InputError(f"{name} has non-finite entries")
    return a


def as_vector(value, dim: int | None = None, name: str = "vector") -> Array:
    a = np.asarray(value, dtype=np.complex128).reshape(-1)
    if dim is not None and a.shape[0] != dim:
        raise InputError(f"{name} must have length {dim}, got {a.shape[0]}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InputError(f"{name} has non-finite entries")
    return a


def spectral_norm(a: Array) -> float:
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


@dataclass(frozen=True)
class LinearPencil:
    """Anchored pencil ``A(z) = c0 + c1*(z - 1)``."""

    c0: Array
    c1: Array

    def __post_init__(self):
        object.__setattr__(self, "c0", as_matrix(self.c0, "c0"))
        object.__setattr__(self, "c1", as_matrix(self.c1, "c1"))
        if self.c0.shape != self.c1.shape:
            raise InputError(
                f"c0 and c1 must match, got {self.c0.shape} vs {self.c1.shape}"
            )

    @property
    def dim(self) -> int:
        return self.c0.shape[0]

    # Lag-polynomial view A(z) = a0 + a1*z of the same pencil.
    @property
    def a0(self) -> Array:
        return self.c0 - self.c1

    @property
    def a1(self) -> Array:
        return self.c1

    def evaluate(self, z: complex) -> Array:
        return self.c0 + (z - 1.0) * self.c1

    def scale(self) -> float:
        return max(spectral_norm(self.c0), spectral_norm(self.c1), 1.0)


@dataclass(frozen=True)
class BasicSolution:
    """The determining Laurent pair ``(T_{-1}, T_0)`` of a pencil resolvent."""

    t_minus_one: Array
    t_zero: Array


@dataclass(frozen=True)
class SpectralPair:
    """Complementary projections separating singular and regular dynamics.

    ``domain_sin + domain_reg = I`` on the solution space and
    ``range_sin + range_reg = I`` on the equation space.
    """

    domain_sin: Array
    domain_reg: Array
    range_sin: Array
    range_reg: Array


@dataclass
class LaurentExpansion:
    """Coefficient table ``j -> T_j`` plus how it was obtained."""

    coefficients: dict[int, Array]
    method: str  # "contour" or "recurrence"
    radius: float | None = None
    inner_radius: float | None = None
    outer_radius: float | None = None

    def __getitem__(self, j: int) -> Array:
        return self.coefficients[j]


@dataclass(frozen=True)
class SingularityClass:
    """Outcome of the singularity dichotomy at the anchor point.

    kind is one of ``removable``, ``pole``, ``essential_at_truncation``,
    ``inconclusive``; ``order`` is the pole order / collapse index where
    that applies.
    """

    kind: str
    order: int | None = None
    power_norms: tuple[float, ...] = field(default=())


def solve_at(
    pencil: LinearPencil,
    z: complex,
    *,
    tol: float = TOL_SOLVE,
    cond_cap: float = COND_CAP,
) -> Array:
    """Resolvent value ``A(z)^{-1}`` with a conditioning guard.

    Raises SingularMatrixError when the point is (numerically) singular:
    condition estimate above ``cond_cap`` or an exactly singular factor.
    """
    a = pencil.evaluate(z)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularMatrixError(
            f"pencil is singular at z = {z}: condition estimate {cond:.3e}"
        )
    try:
        r = np.linalg.solve(a, np.eye(pencil.dim, dtype=np.complex128))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"pencil is singular at z = {z}") from exc
    residual = spectral_norm(a @ r - np.eye(pencil.dim))
    if residual > tol * max(1.0, spectral_norm(a) * spectral_norm(r)):
        raise SingularMatrixError(
            f"solve at z = {z} failed residual check: {residual:.3e}"
        )
    return r


def singular_offsets(pencil: LinearPencil) -> Array:
    """Finite offsets ``mu`` (from the anchor) where ``C0 + mu*C1`` is singular."""
    with np.errstate(all="ignore"):
        mu = scipy.linalg.eigvals(pencil.c0, -pencil.c1)
    return mu[np.isfinite(mu)]


def default_radius(pencil: LinearPencil, *, zero_tol: float = 1e-8) -> float:
    """Contour radius: half the distance to the nearest other singularity.

    The anchor itself appears as a (cluster of) zero offsets and is ignored.
    When no other finite singularity exists the resolvent is analytic on the
    whole punctured plane and any radius works; 1.0 is returned.
    """
    mu = singular_offsets(pencil)
    if mu.size == 0:
        return 1.0
    mags = np.abs(mu)
    nonzero = mags[mags > zero_tol * (1.0 + mags.max())]
    if nonzero.size == 0:
        return 1.0
    return float(nonzero.min()) / 2.0


class _NodeCache:
    """Resolvent values on contour nodes, shared across node-doubling rounds.

    Keyed by the angle fraction k/m in lowest terms so that every node of an
    m-point grid is reused by the 2m-point grid.
    """

    def __init__(self, pencil: LinearPencil, radius: float):
        self.pencil = pencil
        self.radius = radius
        self._values: dict[tuple[int, int], Array] = {}

    def grid(self, m: int) -> list[Array]:
        out = []
        for k in range(m):
            g = gcd(k, m) if k else m
            key = (k // g, m // g)
            if key not in self._values:
                z = 1.0 + self.radius * np.exp(2j * np.pi * k / m)
                a = self.pencil.evaluate(z)
                try:
                    self._values[key] = np.linalg.solve(
                        a, np.eye(self.pencil.dim, dtype=np.complex128)
                    )
                except np.linalg.LinAlgError as exc:
                    raise SingularMatrixError(
                        f"contour of radius {self.radius} passes through a "
                        f"singular point near angle {2 * np.pi * k / m:.4f}"
                    ) from exc
            out.append(self._values[key])
        return out


def _trapezoid_coefficient(values: list[Array], radius: float, j: int) -> Array:
    m = len(values)
    phases = np.exp(-2j * np.pi * j * np.arange(m) / m)
    acc = np.zeros_like(values[0])
    for k in range(m):
        acc = acc + values[k] * phases[k]
    return acc * (radius ** (-j) / m)


def contour_coefficients(
    pencil: LinearPencil,
    js: tuple[int, ...] | list[int],
    radius: float | None = None,
    *,
    tol: float = TOL_CONTOUR,
    start_nodes: int = 32,
    max_nodes: int = 1 << 14,
) -> tuple[dict[int, Array], dict]:
    """Laurent coefficients by trapezoid quadrature with node doubling.

    Equispaced nodes on the circle ``|z - 1| = radius``; the node count
    doubles until every requested coefficient moves by no more than
    ``tol * max(1, ||T_j||)`` between rounds.  Returns the coefficient
    table and an info dict (radius, node count).
    """
    if radius is None:
        radius = default_radius(pencil)
    if radius <= 0:
        raise InputError(f"contour radius must be positive, got {radius}")
    cache = _NodeCache(pencil, radius)
    m = max(8, start_nodes)
    current = {j: _trapezoid_coefficient(cache.grid(m), radius, j) for j in js}
    while m < max_nodes:
        m *= 2
        values = cache.grid(m)
        refined = {j: _trapezoid_coefficient(values, radius, j) for j in js}
        worst = max(
            spectral_norm(refined[j] - current[j])
            / max(1.0, spectral_norm(refined[j]))
            for j in js
        )
        current = refined
        if worst <= tol:
            return current, {"radius": radius, "nodes": m}
    raise ContourNotConverged(
        f"contour quadrature did not stabilise within {max_nodes} nodes "
        f"(radius {radius})"
    )


def contour_coefficient(
    pencil: LinearPencil,
    j: int,
    radius: float | None = None,
    *,
    tol: float = TOL_CONTOUR,
    start_nodes: int = 32,
    max_nodes: int = 1 << 14,
) -> Array:
    coeffs, _ = contour_coefficients(
        pencil, (j,), radius, tol=tol, start_nodes=start_nodes, max_nodes=max_nodes
    )
    return coeffs[j]


def basic_residuals(basic: BasicSolution, pencil: LinearPencil) -> dict[str, float]:
    """Residual norms of the four identities characterising a basic solution."""
    tm, t0 = basic.t_minus_one, basic.t_zero
    c0, c1 = pencil.c0, pencil.c1
    eye = np.eye(pencil.dim)
    out = {
        "left_unit": spectral_norm(tm @ c1 + t0 @ c0 - eye),
        "right_unit": spectral_norm(c1 @ tm + c0 @ t0 - eye),
    }
    for i, ci in enumerate((c0, c1)):
        out[f"cross_neg_pos_c{i}"] = spectral_norm(tm @ ci @ t0)
        out[f"cross_pos_neg_c{i}"] = spectral_norm(t0 @ ci @ tm)
    return out


def _basic_scale(basic: BasicSolution, pencil: LinearPencil) -> float:
    t = max(spectral_norm(basic.t_minus_one), spectral_norm(basic.t_zero))
    return max(1.0, t * pencil.scale())


def basic_solution(
    pencil: LinearPencil,
    radius: float | None = None,
    *,
    nodes: int = 32,
    tol: float = TOL_CONTOUR,
    verify_tol: float = TOL_FUND,
) -> BasicSolution:
    """Compute ``(T_{-1}, T_0)`` by contour quadrature and verify it.

    The verification covers the unit identities on both sides and the
    four cross-annihilation products; failure raises
    FundamentalResidualError rather than returning doubtful data.
    """
    coeffs, _ = contour_coefficients(pencil, (-1, 0), radius, tol=tol, start_nodes=nodes)
    basic = BasicSolution(coeffs[-1], coeffs[0])
    residuals = basic_residuals(basic, pencil)
    worst = max(residuals.values())
    if worst > verify_tol * _basic_scale(basic, pencil):
        raise FundamentalResidualError(
            f"basic solution residuals too large: {residuals}"
        )
    return basic


def laurent_coefficient(basic: BasicSolution, pencil: LinearPencil, j: int) -> Array:
    """Single coefficient ``T_j`` from the one-step recurrences.

    ``T_{-k} = (-1)^{k-1} (T_{-1} C_0)^{k-1} T_{-1}`` for the principal part
    and ``T_l = (-1)^l (T_0 C_1)^l T_0`` for the regular part.
    """
    if j == -1:
        return basic.t_minus_one.copy()
    if j == 0:
        return basic.t_zero.copy()
    if j < 0:
        step = basic.t_minus_one @ pencil.c0
        acc = basic.t_minus_one
        for _ in range(-j - 1):
            acc = -(step @ acc)
        return acc
    step = basic.t_zero @ pencil.c1
    acc = basic.t_zero
    for _ in range(j):
        acc = -(step @ acc)
    return acc


def laurent_range(
    basic: BasicSolution,
    pencil: LinearPencil,
    j_lo: int,
    j_hi: int,
) -> LaurentExpansion:
    """Coefficient table for ``j_lo <= j <= j_hi`` via the recurrences."""
    if j_lo > j_hi:
        raise InputError(f"empty coefficient range [{j_lo}, {j_hi}]")
    coeffs: dict[int, Array] = {}
    neg_step = basic.t_minus_one @ pencil.c0
    pos_step = basic.t_zero @ pencil.c1
    if j_lo <= -1:
        acc = basic.t_minus_one
        coeffs[-1] = acc
        for j in range(-2, j_lo - 1, -1):
            acc = -(neg_step @ acc)
            coeffs[j] = acc
    if j_hi >= 0:
        acc = basic.t_zero
        coeffs[0] = acc
        for j in range(1, j_hi + 1):
            acc = -(pos_step @ acc)
            coeffs[j] = acc
    coeffs = {j: coeffs[j] for j in range(j_lo, j_hi + 1)}
    return LaurentExpansion(coefficients=coeffs, method="recurrence")


def projections(
    basic: BasicSolution,
    pencil: LinearPencil,
    *,
    tol: float = TOL_FUND,
) -> SpectralPair:
    """Spectral projections from the basic solution, with idempotency checks.

    Domain side: ``P = T_{-1} C_1``, complement ``T_0 C_0``.
    Range side:  ``Q = C_1 T_{-1}``, complement ``C_0 T_0``.
    """
    p = basic.t_minus_one @ pencil.c1
    p_c = basic.t_zero @ pencil.c0
    q = pencil.c1 @ basic.t_minus_one
    q_c = pencil.c0 @ basic.t_zero
    eye = np.eye(pencil.dim)
    scale = _basic_scale(basic, pencil)
    checks = {
        "domain_idempotent": spectral_norm(p @ p - p),
        "domain_complement": spectral_norm(p + p_c - eye),
        "range_idempotent": spectral_norm(q @ q - q),
        "range_complement": spectral_norm(q + q_c - eye),
    }
    worst = max(checks.values())
    if worst > tol * max(scale, scale**2):
        raise ProjectionError(f"projection checks failed: {checks}")
    return SpectralPair(domain_sin=p, domain_reg=p_c, range_sin=q, range_reg=q_c)


@dataclass(frozen=True)
class FundamentalReport:
    """Residuals of the left/right fundamental identities over a j-window."""

    js: tuple[int, ...]
    left: tuple[float, ...]
    right: tuple[float, ...]
    max_residual: float
    tol: float
    passed: bool


def verify_fundamental(
    pencil: LinearPencil,
    coefficients: dict[int, Array],
    j_lo: int,
    j_hi: int,
    *,
    tol: float = TOL_FUND,
) -> FundamentalReport:
    """Check ``T_{j-1} C_1 + T_j C_0 = [j = 0] I`` and its right-hand twin.

    Needs ``T_{j-1}`` for the lowest j, i.e. the table must cover
    ``[j_lo - 1, j_hi]``.
    """
    for j in range(j_lo - 1, j_hi + 1):
        if j not in coefficients:
            raise InputError(f"coefficient table is missing T_{j}")
    eye = np.eye(pencil.dim)
    js, left, right = [], [], []
    for j in range(j_lo, j_hi + 1):
        target = eye if j == 0 else 0.0
        prev, cur = coefficients[j - 1], coefficients[j]
        left.append(spectral_norm(prev @ pencil.c1 + cur @ pencil.c0 - target))
        right.append(spectral_norm(pencil.c1 @ prev + pencil.c0 @ cur - target))
        js.append(j)
    worst = max(max(left), max(right))
    return FundamentalReport(
        js=tuple(js),
        left=tuple(left),
        right=tuple(right),
        max_residual=worst,
        tol=tol,
        passed=bool(worst <= tol),
    )


def classify_singularity(
    basic: BasicSolution,
    pencil: LinearPencil,
    *,
    tol: float = TOL_FUND,
    k_max: int | None = None,
    cliff_factor: float = 1e-3,
) -> SingularityClass:
    """Dichotomy at the anchor from powers of ``N = T_{-1} C_0``.

    A pole of order d means N is nilpotent with index d.  Numerically the
    collapse shows as a cliff: ``||N^k||`` drops by orders of magnitude in
    one step AND lands below ``tol * ||T_{-1}|| * ||C_0||``.  A smooth decay
    that only crosses the tolerance without a cliff (quadrature-style
    quasi-nilpotent truncations) is scanned further for the hard collapse;
    when that happens exactly at the truncation dimension the singular part
    is an essential-singularity truncation, not a genuine pole.  Norms that
    plateau without collapsing by ``k_max`` give ``inconclusive``.
    """
    n = pencil.dim
    if k_max is None:
        k_max = n + 2
    t_scale = max(spectral_norm(basic.t_zero), 1.0)
    if spectral_norm(basic.t_minus_one) <= tol * t_scale:
        return SingularityClass(kind="removable", order=None)
    nil = basic.t_minus_one @ pencil.c0
    anchor = max(
        spectral_norm(basic.t_minus_one) * spectral_norm(pencil.c0), np.finfo(float).tiny
    )
    norms: list[float] = []
    power = np.eye(n, dtype=np.complex128)
    prev_ratio = 1.0
    for k in range(1, k_max + 1):
        power = power @ nil
        a_k = spectral_norm(power)
        norms.append(a_k)
        prev = norms[k - 2] if k >= 2 else anchor
        ratio = a_k / prev if prev > 0 else 0.0
        collapsed = a_k <= tol * anchor and ratio <= cliff_factor * prev_ratio
        if prev == 0.0:
            collapsed = True  # already exactly nilpotent at the previous index
        if collapsed:
            kind = "essential_at_truncation" if k == n else "pole"
            return SingularityClass(kind=kind, order=k, power_norms=tuple(norms))
        prev_ratio = ratio
    return SingularityClass(kind="inconclusive", order=None, power_norms=tuple(norms))


def annulus_estimate(
    basic: BasicSolution,
    pencil: LinearPencil,
    *,
    k_max: int = 12,
    l_max: int = 48,
) -> tuple[float, float]:
    """Root-test estimates of the annulus of convergence.

    Returns ``(s_hat, r_hat)``: the inner radius estimate
    ``max ||T_{-k}||^{1/k}`` and the outer radius estimate
    ``1 / max ||T_l||^{1/l}``, each maximised over the top half of the
    sampled index range.  An identically-zero regular part gives
    ``r_hat = inf``; a terminating principal part gives ``s_hat = 0``.
    """
    neg_norms = []
    acc = basic.t_minus_one
    step = basic.t_minus_one @ pencil.c0
    for _ in range(k_max):
        neg_norms.append(spectral_norm(acc))
        acc = -(step @ acc)
    pos_norms = []
    acc = basic.t_zero
    step = basic.t_zero @ pencil.c1
    for _ in range(l_max + 1):
        pos_norms.append(spectral_norm(acc))
        if pos_norms[-1] > 1e200:
            break
        acc = -(step @ acc)

    # A principal part that terminates inside the window converges on the
    # whole punctured disc: a vanishing trailing norm forces s_hat = 0.
    scale = max(neg_norms)
    if scale == 0.0 or neg_norms[-1] <= 1e-13 * scale:
        s_hat = 0.0
    else:
        s_candidates = [
            neg_norms[k - 1] ** (1.0 / k)
            for k in range(max(1, k_max // 2), len(neg_norms) + 1)
            if neg_norms[k - 1] > 0
        ]
        s_hat = max(s_candidates) if s_candidates else 0.0

    l_top = len(pos_norms) - 1
    r_candidates = [
        pos_norms[ell] ** (1.0 / ell)
        for ell in range(max(1, l_top // 2), l_top + 1)
        if pos_norms[ell] > 0
    ]
    r_hat = float("inf") if not r_candidates else 1.0 / max(r_candidates)
    return s_hat, r_hat


def closed_form_parts(
    basic: BasicSolution,
    pencil: LinearPencil,
    z: complex,
    *,
    cond_cap: float = COND_CAP,
) -> tuple[Array, Array]:
    """Singular and regular resolvent parts at ``z`` in closed form.

    ``R_sin(z) = [ (z-1) I + T_{-1} C_0 ]^{-1} T_{-1}`` sums the whole
    principal series; ``R_reg(z) = [ I + T_0 C_1 (z-1) ]^{-1} T_0`` sums the
    regular series.  Valid on the annulus of the expansion.
    """
    n = pencil.dim
    eye = np.eye(n, dtype=np.complex128)
    w = z - 1.0
    sin_core = w * eye + basic.t_minus_one @ pencil.c0
    reg_core = eye + basic.t_zero @ pencil.c1 * w
    for name, m in (("singular", sin_core), ("regular", reg_core)):
        cond = np.linalg.cond(m)
        if not np.isfinite(cond) or cond > cond_cap:
            raise SingularMatrixError(
                f"closed-form {name} factor is singular at z = {z}"
            )
    r_sin = np.linalg.solve(sin_core, basic.t_minus_one)
    r_reg = np.linalg.solve(reg_core, basic.t_zero)
    return r_sin, r_reg


def closed_form_resolvent(
    basic: BasicSolution,
    pencil: LinearPencil,
    z: complex,
    *,
    cond_cap: float = COND_CAP,
) -> Array:
    r_sin, r_reg = closed_form_parts(basic, pencil, z, cond_cap=cond_cap)
    return r_sin + r_reg


@dataclass(frozen=True)
class SeparationReport:
    """Restriction of the pencil coefficients to the singular/regular split."""

    sin_blocks: tuple[Array, Array]  # Q C_i P for i = 0, 1
    reg_blocks: tuple[Array, Array]  # Q^c C_i P^c for i = 0, 1
    off_residuals: dict[str, float]
    tol: float
    passed: bool


def separate(
    pair: SpectralPair,
    pencil: LinearPencil,
    *,
    tol: float = TOL_FUND,
) -> SeparationReport:
    """Verify the coefficients act block-diagonally across the split.

    Both cross blocks ``Q C_i P^c`` and ``Q^c C_i P`` must vanish; the
    retained diagonal blocks reconstruct ``C_i`` exactly.
    """
    off: dict[str, float] = {}
    sin_blocks, reg_blocks = [], []
    scale = pencil.scale()
    for i, ci in enumerate((pencil.c0, pencil.c1)):
        sin_blocks.append(pair.range_sin @ ci @ pair.domain_sin)
        reg_blocks.append(pair.range_reg @ ci @ pair.domain_reg)
        off[f"sin_to_reg_c{i}"] = spectral_norm(pair.range_reg @ ci @ pair.domain_sin)
        off[f"reg_to_sin_c{i}"] = spectral_norm(pair.range_sin @ ci @ pair.domain_reg)
        off[f"reassemble_c{i}"] = spectral_norm(sin_blocks[i] + reg_blocks[i] - ci)
    proj_scale = max(
        1.0, spectral_norm(pair.domain_sin) * spectral_norm(pair.range_sin)
    )
    worst = max(off.values())
    return SeparationReport(
        sin_blocks=tuple(sin_blocks),
        reg_blocks=tuple(reg_blocks),
        off_residuals=off,
        tol=tol,
        passed=bool(worst <= tol * scale * proj_scale),
    )
