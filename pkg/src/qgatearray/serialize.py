"""JSON interchange for states, operators, density matrices, channels and records.

Every object is ``{"num_qubits": n, "kind": ..., "data": ...}`` with complex
numbers written as ``[re, im]`` pairs. Floats use Python's shortest
round-trip repr, so identical values always serialize to identical bytes.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from .bell import BellOutcome
from .core import TOL_ALG, KrausChannel, num_qubits_of

KINDS = ("state", "operator", "density", "channel")


class FormatError(ValueError):
    pass


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0 else x  # drop negative zero


def _pair(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _vector(a: np.ndarray) -> list:
    return [_pair(z) for z in a]


def _matrix(a: np.ndarray) -> list:
    return [_vector(row) for row in a]


def to_obj(value, kind: str) -> dict:
    if kind == "channel":
        ops = value.kraus_ops
        return {"num_qubits": value.num_qubits, "kind": kind, "data": [_matrix(k) for k in ops]}
    value = np.asarray(value)
    data = _vector(value) if kind == "state" else _matrix(value)
    return {"num_qubits": num_qubits_of(value), "kind": kind, "data": data}


def _complex_array(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1:] != (2,):
        raise FormatError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def from_obj(obj: Any, expect: str | None = None, tol: float = TOL_ALG):
    """Parse an interchange object; returns an ndarray or a KrausChannel."""
    if not isinstance(obj, dict) or not {"num_qubits", "kind", "data"} <= obj.keys():
        raise FormatError("expected an object with num_qubits, kind and data")
    kind = obj["kind"]
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    if expect is not None and kind != expect:
        raise FormatError(f"expected kind {expect!r}, got {kind!r}")
    n = obj["num_qubits"]
    if not isinstance(n, int) or n < 1:
        raise FormatError("num_qubits must be a positive integer")
    try:
        if kind == "channel":
            ops = [_complex_array(block) for block in obj["data"]]
            value = ops
            shapes = {op.shape for op in ops}
        else:
            value = _complex_array(obj["data"])
            shapes = {value.shape}
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed data: {exc}") from None
    dim = 1 << n
    want = (dim,) if kind == "state" else (dim, dim)
    if shapes != {want}:
        raise FormatError(f"data shape {sorted(shapes)} does not match num_qubits={n}")
    if kind == "channel":
        return KrausChannel(tuple(value), tol)
    return value


def record_obj(rec) -> dict:
    return {
        "outcomes": [o.value for o in rec.outcomes],
        "success": bool(rec.success),
        "branch_probability": _num(rec.branch_probability),
        "final_data": to_obj(rec.final_data, "state"),
    }


def parse_outcomes(labels) -> list[BellOutcome]:
    return [BellOutcome(str(s).lower()) for s in labels]


def certificate_obj(cert) -> dict:
    return {
        "implemented": bool(cert.implemented),
        "max_deviation": _num(cert.max_deviation),
        "unitary": None if cert.unitary is None else to_obj(cert.unitary, "operator"),
    }


def stats_obj(stats) -> dict:
    mean = stats.mean_attempts_to_success
    return {
        "trials": stats.trials,
        "successes": stats.successes,
        "p_hat": _num(stats.p_hat),
        "std_err": _num(stats.std_err),
        "mean_attempts_to_success": None if mean is None else _num(mean),
        "master_seed": stats.master_seed,
    }


def _plain(o):
    if isinstance(o, np.generic):
        return _num(o) if isinstance(o, np.floating) else o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False, default=_plain) + "\n"


def load(path: str, expect: str | None = None, tol: float = TOL_ALG):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return from_obj(obj, expect, tol)
