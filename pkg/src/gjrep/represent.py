"""Additive decompositions of the solution of a singular linear state equation.

Every form writes the path solving ``A_0 x(t) + A_1 x(t-1) = g(t)``,
``x(-1) = c``, as

    x(t) = stochastic_trend + stationary + det_sin + det_reg + k_term

and is checked against the plain recursion.  The trend collects the
cumulation directions (principal Laurent coefficients of the resolvent),
the stationary part inverts the regular directions, the deterministic terms
carry the initial state split across the two spectral subspaces, and the
k-term accounts for presample drive history in the ``_s`` variants.

Forms:
  * ``natural_ns``: stationary part as a difference series in the regular
    Laurent coefficients, drive treated as zero before t = 0.
  * ``natural_s``: same series on actual (full) differences of the
    presample history, plus a history correction through the k vector.
  * ``extended_ns``: stationary part as a causal convolution in the
    decaying component of the companion power coefficients.
  * ``extended_s``: the convolution run over the presample too, with the
    matching correction; algebraically identical to ``extended_ns``.

The natural variants require the regular Laurent series to converge on a
disc of radius above one (divergence raises NaturalFormDiverges) and
certify their truncation with the worst-case difference-operator bound,
which needs radius above two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .arma import ArmaModel, NoiseSpec, Trajectory, diff_neg, ma1_g, simulate_noise, simulate_recursion
from .errors import (
    ClassificationInconclusive,
    InputError,
    NaturalFormDiverges,
    OrderUndefined,
    SingularMatrixError,
    TailNotConverged,
)
from .pencil import (
    COND_CAP,
    Array,
    BasicSolution,
    LinearPencil,
    SingularityClass,
    SpectralPair,
    annulus_estimate,
    basic_solution,
    classify_singularity,
    default_radius,
    spectral_norm,
)

FORMS = ("natural_ns", "natural_s", "extended_ns", "extended_s")


def _checked_inverse(a: Array, what: str) -> Array:
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_CAP:
        raise SingularMatrixError(f"{what} is singular (condition {cond:.3e})")
    return np.linalg.solve(a, np.eye(a.shape[0], dtype=np.complex128))


def coeff_u(basic: BasicSolution, pencil: LinearPencil, t_max: int) -> Array:
    """Stack ``U_t = -(I - T_{-1} C_0)^{-(t+1)} T_{-1}`` for t = 0..t_max.

    These carry the singular-direction response to the initial state; for a
    pole of order d the factor is a nilpotent resolvent and U_t grows like
    t^(d-1).
    """
    if t_max < 0:
        raise InputError("t_max must be >= 0")
    n = pencil.dim
    w = _checked_inverse(
        np.eye(n) - basic.t_minus_one @ pencil.c0, "I - T_{-1} C_0"
    )
    out = np.empty((t_max + 1, n, n), dtype=np.complex128)
    out[0] = -(w @ basic.t_minus_one)
    for t in range(1, t_max + 1):
        out[t] = w @ out[t - 1]
    return out


def coeff_v(basic: BasicSolution, pencil: LinearPencil, s_max: int) -> Array:
    """Stack ``V_s = (-1)^s (I - T_0 C_1)^{-(s+1)} (T_0 C_1)^s T_0``.

    The causal moving-average weights of the regular directions: the
    binomial resummation of the regular Laurent coefficients.
    """
    if s_max < 0:
        raise InputError("s_max must be >= 0")
    n = pencil.dim
    m = basic.t_zero @ pencil.c1
    w = _checked_inverse(np.eye(n) - m, "I - T_0 C_1")
    step = -(w @ m)
    out = np.empty((s_max + 1, n, n), dtype=np.complex128)
    out[0] = w @ basic.t_zero
    for s in range(1, s_max + 1):
        out[s] = step @ out[s - 1]
    return out


def coeff_r(pencil: LinearPencil, s_max: int) -> Array:
    """Companion power weights ``R_s = (-1)^s (A_0^{-1} A_1)^s A_0^{-1}``.

    Requires an invertible contemporaneous coefficient ``A_0 = C_0 - C_1``.
    """
    if s_max < 0:
        raise InputError("s_max must be >= 0")
    a0_inv = _checked_inverse(pencil.a0, "contemporaneous coefficient A_0")
    step = -(a0_inv @ pencil.a1)
    out = np.empty((s_max + 1, pencil.dim, pencil.dim), dtype=np.complex128)
    out[0] = a0_inv
    for s in range(1, s_max + 1):
        out[s] = step @ out[s - 1]
    return out


def coeff_q(basic: BasicSolution, pencil: LinearPencil, s_max: int) -> Array:
    """Decaying component ``Q_s = R_s - U_s`` of the companion powers.

    Annihilated on the left by the singular domain projection; agrees with
    the V weights wherever both converge.
    """
    return coeff_r(pencil, s_max) - coeff_u(basic, pencil, s_max)


def k_vector(
    basic: BasicSolution,
    pencil: LinearPencil,
    g: Trajectory,
    depth: int,
    *,
    tol_tail: float = 1e-10,
) -> Array:
    """History aggregate ``k = sum_r (-1)^r (I-T_0C_1)^{-r} (T_0C_1)^{r-1} T_0 g(-r)``.

    Truncated at r = depth; the dropped tail is estimated from the decay of
    the coefficient norms and must fall below tol_tail (relative to the
    presample scale), otherwise TailNotConverged.  Lives in the regular
    domain subspace.
    """
    if depth < 1:
        raise InputError("k vector needs at least one presample value")
    if g.start > -depth:
        raise InputError(
            f"presample depth {depth} exceeds available history (start {g.start})"
        )
    n = pencil.dim
    m = basic.t_zero @ pencil.c1
    w = _checked_inverse(np.eye(n) - m, "I - T_0 C_1")
    step = -(w @ m)
    coef = -(w @ basic.t_zero)
    k = np.zeros(n, dtype=np.complex128)
    norms = []
    for r in range(1, depth + 1):
        k += coef @ g.at(-r)
        norms.append(spectral_norm(coef))
        coef = step @ coef
    g_scale = max(1.0, float(np.max(np.abs(g.window(-depth, -1)))))
    last = norms[-1]
    if len(norms) >= 4:
        prev = norms[-4]
        ratio = (last / prev) ** (1.0 / 3.0) if prev > 0 else 0.0
    else:
        ratio = 0.5
    if ratio >= 1.0:
        raise TailNotConverged(
            f"history coefficients do not decay (ratio {ratio:.3f})"
        )
    tail = last * ratio / (1.0 - ratio) * g_scale
    if tail > tol_tail * g_scale * 1e3:
        raise TailNotConverged(
            f"history tail estimate {tail:.3e} too large at depth {depth}; "
            "increase the presample burn-in"
        )
    return k


def natural_budget(
    basic: BasicSolution,
    pencil: LinearPencil,
    *,
    g_scale: float = 1.0,
    tol_tail: float = 1e-10,
    l_cap: int = 400,
) -> tuple[int, float, float]:
    """Truncation depth for the natural difference series.

    Returns ``(cutoff, tail_estimate, r_hat)`` where the worst-case bound
    ``||T_l|| 2^l g_scale`` summed past the cutoff stays below tol_tail.
    Raises NaturalFormDiverges when the regular series has convergence
    radius at or below one, TailNotConverged when the radius is too small
    for the difference-operator bound to close (at or below two) or the cap
    is hit.
    """
    _, r_hat = annulus_estimate(basic, pencil, l_max=32)
    if r_hat <= 1.0:
        raise NaturalFormDiverges(
            f"regular Laurent series has convergence radius {r_hat:.4f} <= 1; "
            "the natural form does not exist"
        )
    step = basic.t_zero @ pencil.c1
    acc = basic.t_zero
    bounds = []
    target = tol_tail
    for ell in range(l_cap + 1):
        bounds.append(spectral_norm(acc) * (2.0**ell) * g_scale)
        if ell >= 4:
            prev, last = bounds[-5], bounds[-1]
            ratio = (last / prev) ** 0.25 if prev > 0 else 0.0
            if last == 0.0:
                return ell, 0.0, r_hat
            if ratio < 1.0 and last * ratio / (1.0 - ratio) <= target:
                return ell, last * ratio / (1.0 - ratio), r_hat
        elif bounds[-1] == 0.0:
            return ell, 0.0, r_hat
        acc = -(step @ acc)
    if r_hat <= 2.0:
        raise TailNotConverged(
            f"convergence radius {r_hat:.4f} <= 2: the worst-case bound on the "
            "truncated difference operator does not contract"
        )
    raise TailNotConverged(
        f"series bound still {bounds[-1]:.3e} > {target:.3e} at cutoff cap {l_cap}"
    )


def _matvec_stack(stack: Array, vec: Array) -> Array:
    return np.einsum("tij,j->ti", stack, vec)


def _difference_series(
    t_stack: Array,
    signal: Array,
    *,
    drop: int = 0,
) -> Array:
    """Accumulate ``sum_l (-1)^l T_l (diff^l signal)`` at the last rows.

    ``signal`` holds the drive from some start time; differences shrink the
    front by one row each order.  ``drop`` rows are discarded from the
    front of the order-0 signal alignment, so the output has
    ``signal.shape[0] - drop`` rows.  With drop >= cutoff every difference
    window exists (full mode); drop = 0 with a causal signal reproduces the
    zero-padded (truncated) differences via in-place prepend.
    """
    cutoff = t_stack.shape[0] - 1
    out = np.zeros((signal.shape[0] - drop, signal.shape[1]), np.complex128)
    if drop == 0:
        d = signal
        for ell in range(cutoff + 1):
            sign = -1.0 if ell % 2 else 1.0
            out += sign * (d @ t_stack[ell].T)
            if ell < cutoff:
                d = np.diff(d, axis=0, prepend=np.zeros((1, d.shape[1])))
        return out
    if drop < cutoff:
        raise InputError(
            f"presample depth {drop} is shallower than the series cutoff {cutoff}"
        )
    d = signal
    for ell in range(cutoff + 1):
        sign = -1.0 if ell % 2 else 1.0
        out += sign * (d[drop - ell :] @ t_stack[ell].T)
        if ell < cutoff:
            d = np.diff(d, axis=0)
    return out


@dataclass(frozen=True)
class RepresentationReport:
    """One decomposition of a simulated path, with its reconstruction check."""

    form: str
    t_end: int
    components: dict[str, Array]
    xhat: Array
    oracle: Array
    residual_max: float
    residual_mean: float
    budgets: dict[str, float]
    s_hat: float
    r_hat: float
    singularity: SingularityClass
    tol_rep: float
    tol_tail: float
    passed: bool


def represent(
    form: str,
    model: ArmaModel,
    noise: NoiseSpec,
    t_end: int,
    *,
    basic: BasicSolution | None = None,
    tol_rep: float = 1e-6,
    tol_tail: float = 1e-10,
    radius: float | None = None,
) -> RepresentationReport:
    """Decompose the simulated path per ``form`` and verify the reconstruction.

    Simulates the seeded noise, builds the MA(1) drive, runs the plain
    recursion as the oracle, assembles the five components of the requested
    form, and reports the worst reconstruction error.
    """
    if form not in FORMS:
        raise InputError(f"unknown form {form!r}; expected one of {FORMS}")
    if t_end < 0:
        raise InputError("t_end must be >= 0")
    pencil = model.pencil()
    if basic is None:
        rho = default_radius(pencil) if radius is None else radius
        basic = basic_solution(pencil, radius=rho)

    path = simulate_noise(noise, t_end)
    g = ma1_g(model, path)  # covers [-burn_in, t_end]
    oracle = simulate_recursion(model, g, t_end)

    sclass = classify_singularity(basic, pencil)
    if sclass.kind == "removable":
        trend_depth = 0
    elif sclass.kind in ("pole", "essential_at_truncation"):
        trend_depth = int(sclass.order)
    else:
        raise ClassificationInconclusive(
            "cannot pick the cumulation depth: singularity classification "
            f"came back {sclass.kind!r}"
        )
    s_hat, r_hat = annulus_estimate(basic, pencil)

    n = model.dim
    horizon = t_end + 1
    presample = -g.start
    g_causal = g.window(0, t_end)
    g_scale = max(1.0, float(np.max(np.abs(g.values))))

    trend = np.zeros((horizon, n), dtype=np.complex128)
    tkm = basic.t_minus_one
    neg_step = basic.t_minus_one @ pencil.c0
    cum = g_causal
    for k in range(1, trend_depth + 1):
        cum = np.cumsum(cum, axis=0)
        sign = -1.0 if k % 2 else 1.0
        trend += sign * (cum @ tkm.T)
        tkm = -(neg_step @ tkm)

    u_stack = coeff_u(basic, pencil, t_end)
    c1c = pencil.c1 @ model.c
    det_sin = -_matvec_stack(u_stack, c1c)

    budgets: dict[str, float] = {
        "trend_depth": float(trend_depth),
        "presample": float(presample),
    }
    k_term = np.zeros((horizon, n), dtype=np.complex128)

    if form.startswith("natural"):
        cutoff, tail_est, _ = natural_budget(
            basic, pencil, g_scale=g_scale, tol_tail=tol_tail
        )
        budgets["series_cutoff"] = float(cutoff)
        budgets["tail_estimate"] = tail_est
        t_stack = np.empty((cutoff + 1, n, n), dtype=np.complex128)
        t_stack[0] = basic.t_zero
        pos_step = basic.t_zero @ pencil.c1
        for ell in range(1, cutoff + 1):
            t_stack[ell] = -(pos_step @ t_stack[ell - 1])
        v_stack = coeff_v(basic, pencil, t_end)
        det_reg = -_matvec_stack(v_stack, c1c)
        if form == "natural_ns":
            stationary = _difference_series(t_stack, g_causal)
        else:
            if presample < cutoff:
                raise TailNotConverged(
                    f"stationary-history form needs presample depth >= series "
                    f"cutoff {cutoff}, got {presample}"
                )
            stationary = _difference_series(
                t_stack, g.values, drop=presample
            )
            kvec = k_vector(basic, pencil, g, presample, tol_tail=tol_tail)
            k_term = -_matvec_stack(v_stack, pencil.c1 @ kvec)
    else:
        depth = t_end + (presample if form == "extended_s" else 0)
        q_stack = coeff_q(basic, pencil, depth)
        det_reg = -_matvec_stack(q_stack[: t_end + 1], c1c)
        if form == "extended_ns":
            stationary = kernels.causal_stack_apply(q_stack, g_causal)
        else:
            stationary = kernels.causal_stack_apply(q_stack, g.values)[presample:]
            for r in range(1, presample + 1):
                k_term -= np.einsum(
                    "tij,j->ti", q_stack[r : r + horizon], g.at(-r)
                )
        budgets["convolution_depth"] = float(depth)

    components = {
        "stochastic_trend": trend,
        "stationary": stationary,
        "det_sin": det_sin,
        "det_reg": det_reg,
        "k_term": k_term,
    }
    xhat = trend + stationary + det_sin + det_reg + k_term
    err = np.abs(xhat - oracle.values)
    residual_max = float(err.max())
    residual_mean = float(err.mean())
    return RepresentationReport(
        form=form,
        t_end=t_end,
        components=components,
        xhat=xhat,
        oracle=oracle.values,
        residual_max=residual_max,
        residual_mean=residual_mean,
        budgets=budgets,
        s_hat=s_hat,
        r_hat=r_hat,
        singularity=sclass,
        tol_rep=tol_rep,
        tol_tail=tol_tail,
        passed=residual_max <= tol_rep,
    )


@dataclass(frozen=True)
class SplitReport:
    """Projection purity of the two halves of a decomposition."""

    x_sin: Array
    x_reg: Array
    max_reg_leak: float  # worst ||P_reg applied to the singular half||
    max_sin_leak: float  # worst ||P_sin applied to the regular half||
    tol: float
    passed: bool


def split_projection(
    report: RepresentationReport,
    pair: SpectralPair,
    *,
    tol: float = 1e-8,
) -> SplitReport:
    """Check that trend + det_sin and the rest live in complementary subspaces.

    The singular half must be annihilated by the regular domain projection
    and vice versa, uniformly over the sample path.
    """
    comp = report.components
    x_sin = comp["stochastic_trend"] + comp["det_sin"]
    x_reg = comp["stationary"] + comp["det_reg"] + comp["k_term"]
    reg_leak = float(
        np.max(np.linalg.norm(x_sin @ pair.domain_reg.T, axis=1), initial=0.0)
    )
    sin_leak = float(
        np.max(np.linalg.norm(x_reg @ pair.domain_sin.T, axis=1), initial=0.0)
    )
    return SplitReport(
        x_sin=x_sin,
        x_reg=x_reg,
        max_reg_leak=reg_leak,
        max_sin_leak=sin_leak,
        tol=tol,
        passed=max(reg_leak, sin_leak) <= tol,
    )


def integration_order(sclass: SingularityClass) -> str:
    """Integration order label implied by the singularity class."""
    if sclass.kind == "removable":
        return "I(0)"
    if sclass.kind == "pole":
        return f"I({sclass.order})"
    raise OrderUndefined(
        f"no finite integration order for singularity kind {sclass.kind!r}"
    )


@dataclass(frozen=True)
class ProbeReport:
    """Monte Carlo integration-order probe of one linear functional."""

    functional: Array
    t_end: int
    n_seeds: int
    level_slopes: Array
    diff_slopes: Array
    labels: tuple[str, ...]
    counts: dict[str, int]
    majority: str
    thresholds: tuple[float, float, float]


def _variance_time_slopes(y: Array, scales: Array) -> Array:
    """Log-log slope of the window sample variance against window length.

    y has shape (T+1, m); for each scale w the within-window variance is
    averaged over half-overlapping windows, which concentrates the per-path
    statistic enough for threshold classification.  Returns one slope per
    column.
    """
    rows, m = y.shape
    zero = np.zeros((1, m))
    s1 = np.concatenate([zero, np.cumsum(y, axis=0)])
    s2 = np.concatenate([zero, np.cumsum(y * y, axis=0)])
    log_var = np.empty((scales.shape[0], m))
    for i, w in enumerate(scales):
        offs = np.arange(0, rows - w + 1, max(1, w // 2))
        mu = (s1[offs + w] - s1[offs]) / w
        var = (s2[offs + w] - s2[offs]) / w - mu * mu
        log_var[i] = np.log(np.maximum(var.mean(axis=0), 1e-300))
    lt = np.log(scales.astype(float))[:, None]
    lt_c = lt - lt.mean(axis=0)
    return (lt_c * (log_var - log_var.mean(axis=0))).sum(axis=0) / (
        lt_c**2
    ).sum(axis=0)


def cointegration_probe(
    model: ArmaModel,
    functional: Array,
    *,
    t_end: int = 2000,
    n_seeds: int = 100,
    base_seed: int = 0,
    sigma: float = 1.0,
    n_scales: int = 10,
    thresholds: tuple[float, float, float] = (0.3, 0.6, 1.4),
) -> ProbeReport:
    """Estimate the integration order of ``f . x(t)`` by variance growth.

    Drives the state equation with seeded gaussian noise (zero initial
    state), one path per seed, and fits the growth rate of the window
    sample variance of the functional against the window length on a
    geometric scale grid: the variance is flat for a stationary
    functional, grows linearly for a once-integrated one, and at least
    quadratically beyond that.  Slopes below the first threshold read as
    I(0); between the second and third as I(1); above the third, with the
    differenced series reading I(1), as I(2).
    """
    f = np.asarray(functional, dtype=np.complex128).reshape(-1)
    if f.shape[0] != model.dim:
        raise InputError(f"functional must have length {model.dim}")
    if t_end < 32:
        raise InputError("probe horizon too short")
    n, m = model.dim, n_seeds
    length = t_end + 2  # noise on [-1, t_end]
    noise = np.empty((length, n, m), dtype=np.complex128)
    for i in range(m):
        rng = np.random.default_rng(base_seed + i)
        noise[:, :, i] = rng.standard_normal((length, n)) * sigma
    drive = np.einsum("ij,tjm->tim", model.f0, noise[1:]) + np.einsum(
        "ij,tjm->tim", model.f1, noise[:-1]
    )
    a0_inv = _checked_inverse(model.a0, "contemporaneous coefficient A_0")
    step = -(a0_inv @ model.a1)
    drive = np.einsum("ij,tjm->tim", a0_inv, drive)
    x = kernels.arma_recursion(step, drive, np.zeros((n, m), np.complex128))
    y = np.real(np.einsum("j,tjm->tm", np.conj(f), x))

    scales = np.unique(
        np.geomspace(16, max(64, t_end // 4), n_scales).astype(int)
    )
    level = _variance_time_slopes(y, scales)
    diff = _variance_time_slopes(np.diff(y, axis=0), scales)

    t0, t1, t2 = thresholds
    labels = []
    for sl, sd in zip(level, diff):
        if sl < t0:
            labels.append("I(0)")
        elif t1 < sl < t2:
            labels.append("I(1)")
        elif sl >= t2 and t1 < sd < t2:
            labels.append("I(2)")
        else:
            labels.append("inconclusive")
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    majority = max(sorted(counts), key=lambda lab: counts[lab])
    return ProbeReport(
        functional=f,
        t_end=t_end,
        n_seeds=n_seeds,
        level_slopes=level,
        diff_slopes=diff,
        labels=tuple(labels),
        counts=counts,
        majority=majority,
        thresholds=thresholds,
    )
