"""Serialization: pencils and models from JSON, trajectories to CSV, reports to JSON.

Complex scalars travel as two-element ``[re, im]`` arrays.  All emitted
JSON is deterministic: keys sorted, trailing newline, no timestamps.
"""

from __future__ import annotations

import csv
import io as _io
import json
from typing import Any

import numpy as np

from .arma import ArmaModel, NoiseSpec, Trajectory
from .augment import PolynomialPencil
from .errors import InputError
from .pencil import Array, LinearPencil


def encode_complex(value) -> Any:
    """Nested lists with complex entries as [re, im]."""
    arr = np.asarray(value)
    if arr.ndim == 0:
        z = complex(arr)
        return [z.real, z.imag]
    return [encode_complex(row) for row in arr]


def decode_complex(obj, name: str = "value", ndim: int | None = None) -> Array:
    """Inverse of encode_complex: strips the trailing [re, im] axis."""
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a numeric array: {exc}") from None
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise InputError(f"{name}: complex entries must be [re, im] pairs")
    out = (arr[..., 0] + 1j * arr[..., 1]).astype(np.complex128)
    if ndim is not None and out.ndim != ndim:
        raise InputError(f"{name}: expected a rank-{ndim} array, got rank {out.ndim}")
    return out


def dump_pencil(pencil: LinearPencil | PolynomialPencil) -> dict:
    if isinstance(pencil, PolynomialPencil):
        return {
            "n": pencil.dim,
            "degree": pencil.degree,
            "coeffs": [encode_complex(c) for c in pencil.coeffs],
        }
    return {
        "n": pencil.dim,
        "c0": encode_complex(pencil.c0),
        "c1": encode_complex(pencil.c1),
    }


def load_pencil(obj: dict) -> LinearPencil | PolynomialPencil:
    """Linear pencil from {"n", "c0", "c1"}; polynomial from {"n", "degree", "coeffs"}."""
    if not isinstance(obj, dict):
        raise InputError("pencil document must be a JSON object")
    if "coeffs" in obj or "degree" in obj:
        coeffs = obj.get("coeffs")
        if coeffs is None:
            raise InputError("polynomial pencil needs a 'coeffs' list")
        degree = obj.get("degree", len(coeffs) - 1)
        if degree != len(coeffs) - 1:
            raise InputError(
                f"degree {degree} inconsistent with {len(coeffs)} coefficients"
            )
        mats = [decode_complex(c, f"coeffs[{i}]", ndim=2) for i, c in enumerate(coeffs)]
        poly = PolynomialPencil(coeffs=tuple(mats))
        _check_dim(obj, poly.dim)
        return poly
    for key in ("c0", "c1"):
        if key not in obj:
            raise InputError(f"pencil document missing {key!r}")
    pen = LinearPencil(
        c0=decode_complex(obj["c0"], "c0", ndim=2), c1=decode_complex(obj["c1"], "c1", ndim=2)
    )
    _check_dim(obj, pen.dim)
    return pen


def _check_dim(obj: dict, dim: int) -> None:
    if "n" in obj and int(obj["n"]) != dim:
        raise InputError(f"declared n={obj['n']} but matrices are {dim}-dimensional")


def dump_model(model: ArmaModel, noise: NoiseSpec) -> dict:
    return {
        "n": model.dim,
        "a0": encode_complex(model.a0),
        "a1": encode_complex(model.a1),
        "f0": encode_complex(model.f0),
        "f1": encode_complex(model.f1),
        "c": encode_complex(model.c),
        "noise": {
            "kind": noise.kind,
            "seed": noise.seed,
            "burn_in": noise.burn_in,
            "params": noise.params,
        },
    }


def load_model(obj: dict) -> tuple[ArmaModel, NoiseSpec]:
    """Model plus noise spec from one JSON document."""
    if not isinstance(obj, dict):
        raise InputError("model document must be a JSON object")
    for key in ("a0", "a1", "f0", "f1", "c", "noise"):
        if key not in obj:
            raise InputError(f"model document missing {key!r}")
    model = ArmaModel(
        a0=decode_complex(obj["a0"], "a0", ndim=2),
        a1=decode_complex(obj["a1"], "a1", ndim=2),
        f0=decode_complex(obj["f0"], "f0", ndim=2),
        f1=decode_complex(obj["f1"], "f1", ndim=2),
        c=decode_complex(obj["c"], "c", ndim=1),
    )
    _check_dim(obj, model.dim)
    nz = obj["noise"]
    if not isinstance(nz, dict) or "kind" not in nz or "seed" not in nz:
        raise InputError("noise spec needs at least 'kind' and 'seed'")
    spec = NoiseSpec(
        kind=str(nz["kind"]),
        dim=model.dim,
        seed=int(nz["seed"]),
        burn_in=int(nz.get("burn_in", 0)),
        params=dict(nz.get("params", {})),
    )
    return model, spec


def components_to_csv(
    components: dict[str, Array],
    start: int,
) -> str:
    """CSV with columns t, component, coordinate, re, im.

    Components are emitted in sorted name order inside each time step so
    the output is deterministic.
    """
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "component", "coordinate", "re", "im"])
    names = sorted(components)
    if not names:
        return buf.getvalue()
    rows = {name: np.asarray(components[name]) for name in names}
    length = {arr.shape[0] for arr in rows.values()}
    if len(length) != 1:
        raise InputError("all components must share one time range")
    for i in range(length.pop()):
        t = start + i
        for name in names:
            vec = rows[name][i]
            for coord, z in enumerate(np.atleast_1d(vec)):
                z = complex(z)
                writer.writerow([t, name, coord, repr(z.real), repr(z.imag)])
    return buf.getvalue()


def trajectory_to_csv(traj: Trajectory, component: str = "x") -> str:
    return components_to_csv({component: traj.values}, traj.start)


def json_ready(obj):
    """Recursively convert numpy scalars/arrays and complex values for json.dumps."""
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_complex(obj) if np.iscomplexobj(obj) else obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def dumps_report(report: dict) -> str:
    """Deterministic JSON text for a report dictionary."""
    return json.dumps(json_ready(report), sort_keys=True, indent=2) + "\n"
