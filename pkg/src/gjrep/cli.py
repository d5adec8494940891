"""Command-line front end.

Three commands: ``analyze`` runs the full pencil pipeline on a pencil
JSON file, ``represent`` decomposes a simulated model path, ``demo``
replays a bundled worked example against its closed forms.  All reports
are deterministic for a fixed config and seed.

Exit codes: 0 all good, 2 a verification check failed, 3 bad input,
4 numeric failure (singular solve, divergent series, no convergence).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import io as gio
from .arma import NoiseSpec
from .augment import PolynomialPencil, augment, unpack_laurent, verify_polynomial_fundamental
from .corpus import MAKERS, make
from .errors import GjrepError, InputError, NumericError, VerificationError
from .pencil import (
    TOL_CONTOUR,
    TOL_FUND,
    TOL_SOLVE,
    LinearPencil,
    annulus_estimate,
    basic_residuals,
    basic_solution,
    classify_singularity,
    closed_form_resolvent,
    default_radius,
    laurent_range,
    projections,
    separate,
    solve_at,
    spectral_norm,
    verify_fundamental,
)
from .represent import represent

J_LO, J_HI = -3, 6  # default Laurent window for analyze reports


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _analyze_linear(pencil: LinearPencil, args) -> tuple[dict, bool]:
    radius = args.radius if args.radius is not None else default_radius(pencil)
    basic = basic_solution(
        pencil,
        radius=radius,
        nodes=args.nodes,
        tol=args.tol_contour,
        verify_tol=args.tol_fund,
    )
    residuals = basic_residuals(basic, pencil)
    expansion = laurent_range(basic, pencil, J_LO, J_HI)
    fund = verify_fundamental(
        pencil, expansion.coefficients, J_LO + 1, J_HI, tol=args.tol_fund
    )
    pair = projections(basic, pencil, tol=args.tol_fund)
    sep = separate(pair, pencil, tol=args.tol_fund)
    sclass = classify_singularity(basic, pencil)
    s_hat, r_hat = annulus_estimate(basic, pencil)
    probe_z = 1.0 + radius * 0.5
    closed_err = spectral_norm(
        closed_form_resolvent(basic, pencil, probe_z)
        - solve_at(pencil, probe_z, tol=args.tol_solve)
    )
    report = {
        "dim": pencil.dim,
        "radius": radius,
        "default_radius": default_radius(pencil),
        "basic_residuals": residuals,
        "laurent": {
            str(j): gio.encode_complex(expansion[j])
            for j in range(J_LO, J_HI + 1)
        },
        "laurent_norms": {
            str(j): spectral_norm(expansion[j]) for j in range(J_LO, J_HI + 1)
        },
        "fundamental": {
            "window": [J_LO + 1, J_HI],
            "max_residual": fund.max_residual,
            "passed": fund.passed,
        },
        "projections": {
            "domain_sin": gio.encode_complex(pair.domain_sin),
            "range_sin": gio.encode_complex(pair.range_sin),
            "domain_sin_rank": int(round(np.trace(pair.domain_sin).real)),
            "range_sin_rank": int(round(np.trace(pair.range_sin).real)),
        },
        "separation": {
            "off_residuals": sep.off_residuals,
            "passed": sep.passed,
        },
        "singularity": {"kind": sclass.kind, "order": sclass.order},
        "annulus": {"inner": s_hat, "outer": r_hat},
        "closed_form_error": closed_err,
    }
    ok = fund.passed and sep.passed and max(residuals.values()) <= args.tol_fund * 10
    return report, ok


def cmd_analyze(args) -> int:
    obj = _load_json(args.pencil)
    pencil = gio.load_pencil(obj)
    if isinstance(pencil, PolynomialPencil):
        aug = augment(pencil)
        report, ok = _analyze_linear(aug.pencil, args)
        basic = basic_solution(
            aug.pencil,
            radius=args.radius
            if args.radius is not None
            else default_radius(aug.pencil),
            nodes=args.nodes,
            tol=args.tol_contour,
            verify_tol=args.tol_fund,
        )
        expansion = laurent_range(basic, aug.pencil, J_LO, J_HI)
        tmap, disagreement = unpack_laurent(aug, expansion.coefficients)
        pfund = verify_polynomial_fundamental(
            pencil, tmap, J_LO + pencil.degree, J_HI, tol=args.tol_fund
        )
        report["polynomial"] = {
            "degree": pencil.degree,
            "base_dim": pencil.dim,
            "unpack_disagreement": disagreement,
            "fundamental_max_residual": pfund.max_residual,
            "fundamental_passed": pfund.passed,
        }
        ok = ok and pfund.passed and disagreement <= args.tol_fund
    else:
        report, ok = _analyze_linear(pencil, args)
    if args.format == "csv":
        raise InputError("csv output applies to trajectory reports; use --format json")
    _write_out(gio.dumps_report(report), args.out)
    if not ok:
        raise VerificationError("analysis checks failed; see report")
    return 0


def cmd_represent(args) -> int:
    obj = _load_json(args.model)
    model, spec = gio.load_model(obj)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    if args.burn_in is not None:
        spec = dataclasses.replace(spec, burn_in=args.burn_in)
    report = represent(
        args.form,
        model,
        spec,
        args.T,
        tol_rep=args.tol_rep,
        tol_tail=args.tol_tail,
        radius=args.radius,
    )
    summary = {
        "form": report.form,
        "t_end": report.t_end,
        "seed": spec.seed,
        "burn_in": spec.burn_in,
        "residual_max": report.residual_max,
        "residual_mean": report.residual_mean,
        "passed": report.passed,
        "budgets": report.budgets,
        "annulus": {"inner": report.s_hat, "outer": report.r_hat},
        "singularity": {
            "kind": report.singularity.kind,
            "order": report.singularity.order,
        },
        "tol_rep": report.tol_rep,
        "tol_tail": report.tol_tail,
    }
    if args.format == "csv":
        tables = dict(report.components)
        tables["xhat"] = report.xhat
        tables["oracle"] = report.oracle
        body = gio.components_to_csv(tables, start=0)
    else:
        body = gio.dumps_report(summary)
    _write_out(body, args.out)
    if args.out is not None:
        sys.stdout.write(
            f"residual_max={report.residual_max:.6e} passed={report.passed}\n"
        )
    if not report.passed:
        raise VerificationError(
            f"reconstruction residual {report.residual_max:.3e} exceeds "
            f"tol_rep={report.tol_rep:.1e}"
        )
    return 0


def _demo_checks(entry) -> list[dict]:
    pencil, basic, exp = entry.pencil, entry.basic, entry.expected
    checks: list[dict] = []

    def add(name: str, observed, expected, tol: float) -> None:
        if isinstance(observed, (int, float)) and isinstance(expected, (int, float)):
            err = abs(observed - expected)
        else:
            err = float(np.max(np.abs(np.asarray(observed) - np.asarray(expected))))
        checks.append(
            {
                "check": name,
                "passed": bool(err <= tol),
                "error": err,
                "tol": tol,
            }
        )

    res = basic_residuals(basic, pencil)
    checks.append(
        {
            "check": "basic_residuals",
            "passed": max(res.values()) <= 1e-10,
            "error": max(res.values()),
            "tol": 1e-10,
        }
    )
    sclass = classify_singularity(basic, pencil)
    if "pole_order" in exp:
        checks.append(
            {
                "check": "pole_order",
                "passed": sclass.kind == "pole" and sclass.order == exp["pole_order"],
                "observed": f"{sclass.kind}({sclass.order})",
                "expected": f"pole({exp['pole_order']})",
            }
        )
    if "collapse_index" in exp:
        checks.append(
            {
                "check": "collapse_index",
                "passed": sclass.kind == "essential_at_truncation"
                and sclass.order == exp["collapse_index"],
                "observed": f"{sclass.kind}({sclass.order})",
                "expected": f"essential_at_truncation({exp['collapse_index']})",
            }
        )
    if "default_radius" in exp:
        add("default_radius", default_radius(pencil), exp["default_radius"], 1e-9)
    pair = projections(basic, pencil)
    if "domain_sin" in exp:
        add("domain_sin_projection", pair.domain_sin, exp["domain_sin"], 1e-10)
    if "range_sin" in exp:
        add("range_sin_projection", pair.range_sin, exp["range_sin"], 1e-10)
    if "range_reg" in exp:
        add("range_reg_projection", pair.range_reg, exp["range_reg"], 1e-10)
    if "range_reg_rank" in exp:
        rank = int(round(np.trace(pair.domain_reg).real))
        checks.append(
            {
                "check": "reg_projection_rank",
                "passed": rank == exp["range_reg_rank"],
                "observed": rank,
                "expected": exp["range_reg_rank"],
            }
        )
    if "t_neg" in exp:
        from .pencil import laurent_coefficient

        err = max(
            float(
                np.abs(laurent_coefficient(basic, pencil, -k) - exp["t_neg"](k)).max()
            )
            for k in range(1, 4)
        )
        checks.append(
            {"check": "principal_coefficients", "passed": err <= 1e-9, "error": err, "tol": 1e-9}
        )
    if "t_pos" in exp:
        from .pencil import laurent_coefficient

        err = max(
            float(
                np.abs(laurent_coefficient(basic, pencil, ell) - exp["t_pos"](ell)).max()
            )
            for ell in range(0, 4)
        )
        checks.append(
            {"check": "regular_coefficients", "passed": err <= 1e-9, "error": err, "tol": 1e-9}
        )
    if "resolvent" in exp:
        rho = default_radius(pencil)
        zs = [1.0 + rho, 1.0 + 1j * rho, 1.0 - 0.5 * rho, 1.0 + rho * (0.6 + 0.8j), 1.0 - 1j * rho]
        err = max(
            float(np.abs(exp["resolvent"](z) - solve_at(pencil, z)).max()) for z in zs
        )
        checks.append(
            {"check": "resolvent_law", "passed": err <= 1e-9, "error": err, "tol": 1e-9}
        )
    if "eigenpair" in exp:
        v, sig = exp["eigenpair"]
        err = float(np.abs(pencil.c0 @ v - sig * v).max())
        checks.append(
            {"check": "aggregate_eigenpair", "passed": err <= 1e-10, "error": err, "tol": 1e-10}
        )
    if "operator_norm_limit" in exp:
        err = abs(spectral_norm(pencil.c0) - exp["operator_norm_limit"])
        checks.append(
            {
                "check": "operator_norm_limit",
                "passed": err <= 5e-2,
                "observed": spectral_norm(pencil.c0),
                "expected": exp["operator_norm_limit"],
                "error": err,
                "tol": 5e-2,
            }
        )
    if "annulus" in exp:
        s_hat, r_hat = annulus_estimate(basic, pencil)
        inner, outer = exp["annulus"]
        ok_in = s_hat <= inner + 0.1 * max(inner, 1e-6)
        ok_out = np.isinf(outer) or abs(r_hat - outer) <= 0.1 * outer
        checks.append(
            {
                "check": "annulus_estimate",
                "passed": bool(ok_in and ok_out),
                "observed": [s_hat, r_hat],
                "expected": [inner, outer],
            }
        )
    return checks


def cmd_demo(args) -> int:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise InputError(f"--param expects NAME=VALUE, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            params[key] = int(raw)
        except ValueError:
            try:
                params[key] = float(raw)
            except ValueError:
                raise InputError(f"--param {key}: {raw!r} is not a number") from None
    entry = make(args.name, **params)
    checks = _demo_checks(entry)
    if args.format == "json":
        body = gio.dumps_report(
            {"name": entry.name, "params": entry.params, "checks": checks}
        )
    else:
        lines = []
        for ch in checks:
            status = "PASS" if ch["passed"] else "FAIL"
            detail = ", ".join(
                f"{k}={_fmt(v)}" for k, v in ch.items() if k not in ("check", "passed")
            )
            lines.append(f"{status} {entry.name}.{ch['check']}: {detail}")
        body = "\n".join(lines) + "\n"
    _write_out(body, args.out)
    if not all(ch["passed"] for ch in checks):
        raise VerificationError(f"demo {entry.name}: some checks failed")
    return 0


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6e}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gjrep",
        description="Laurent analysis of singular pencils and unit-root ARMA representations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    pa = sub.add_parser("analyze", help="Laurent/projection/classification report for a pencil")
    pa.add_argument("--pencil", required=True, help="pencil JSON file")
    pa.add_argument("--radius", type=float, default=None)
    pa.add_argument("--nodes", type=int, default=32)
    pa.add_argument("--tol-solve", dest="tol_solve", type=float, default=TOL_SOLVE)
    pa.add_argument("--tol-contour", dest="tol_contour", type=float, default=TOL_CONTOUR)
    pa.add_argument("--tol-fund", dest="tol_fund", type=float, default=TOL_FUND)
    common(pa)
    pa.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("represent", help="decompose a simulated model path")
    pr.add_argument("--model", required=True, help="model JSON file")
    pr.add_argument(
        "--form",
        required=True,
        choices=("natural_ns", "natural_s", "extended_ns", "extended_s"),
    )
    pr.add_argument("--T", dest="T", type=int, default=100, help="horizon (last time index)")
    pr.add_argument("--burn-in", dest="burn_in", type=int, default=None)
    pr.add_argument("--seed", type=int, default=None)
    pr.add_argument("--radius", type=float, default=None)
    pr.add_argument("--tol-rep", dest="tol_rep", type=float, default=1e-6)
    pr.add_argument("--tol-tail", dest="tol_tail", type=float, default=1e-10)
    common(pr)
    pr.set_defaults(func=cmd_represent)

    pd = sub.add_parser("demo", help="replay a bundled worked example")
    pd.add_argument("--name", required=True, choices=sorted(MAKERS))
    pd.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override an example parameter (repeatable)",
    )
    pd.add_argument("--out", default=None, help="write the report here instead of stdout")
    pd.add_argument("--format", choices=("text", "json"), default="text")
    pd.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the input-error code
        return 0 if exc.code in (0, None) else 3
    try:
        nodes = getattr(args, "nodes", 16)
        if nodes < 16 or nodes & (nodes - 1):
            raise InputError("--nodes must be a power of two >= 16")
        for name in ("tol_solve", "tol_contour", "tol_fund", "tol_rep", "tol_tail"):
            tol = getattr(args, name, None)
            if tol is not None and not tol > 0:
                flag = "--" + name.replace("_", "-")
                raise InputError(f"{flag} must be positive, got {tol}")
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except GjrepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
