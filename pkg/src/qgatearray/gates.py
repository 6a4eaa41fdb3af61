"""Named gates, the three-CNOT swap and the program-controlled select operator."""
from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .core import TOL_ALG, DimensionError, NotUnitaryError, apply, expand, is_unitary, num_qubits_of


class GateName(str, enum.Enum):
    I = "i"
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    CNOT = "cnot"

    @classmethod
    def parse(cls, name: "GateName | str") -> "GateName":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown gate name {name!r}") from None


_MATRICES = {
    GateName.I: np.eye(2, dtype=np.complex128),
    GateName.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateName.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateName.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    GateName.H: np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2),
    # control is the first (most significant) qubit
    GateName.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
}
for _m in _MATRICES.values():
    _m.setflags(write=False)


def gate(name: GateName | str) -> np.ndarray:
    """Matrix for a named gate. Returns a fresh writable copy."""
    return _MATRICES[GateName.parse(name)].copy()


def swap_circuit(q1: int, q2: int) -> list[tuple[np.ndarray, list[int]]]:
    """The three CNOTs that exchange q1 and q2, as (matrix, targets) steps."""
    if q1 == q2:
        raise DimensionError("swap needs two distinct qubits")
    cx = _MATRICES[GateName.CNOT]
    return [(cx, [q1, q2]), (cx, [q2, q1]), (cx, [q1, q2])]


def apply_swap(state: np.ndarray, q1: int, q2: int) -> np.ndarray:
    for op, targets in swap_circuit(q1, q2):
        state = apply(op, state, targets)
    return state


def swap_via_cnots(q1: int, q2: int, n: int) -> np.ndarray:
    """CNOT(q1->q2) CNOT(q2->q1) CNOT(q1->q2) expanded to an n-qubit matrix."""
    for q in (q1, q2):
        if not 0 <= q < n:
            raise DimensionError(f"qubit index {q} out of range for {n} qubits")
    full = np.eye(1 << n, dtype=np.complex128)
    for op, targets in swap_circuit(q1, q2):
        full = expand(op, targets, n) @ full
    return full


def controlled_select(unitaries: Sequence[np.ndarray], program_qubits: int, tol: float = TOL_ALG) -> np.ndarray:
    """G = sum_i U_i (x) |i><i| on data (high qubits) + program (low qubits).

    Program basis states beyond ``len(unitaries)`` select the identity.
    """
    if not unitaries:
        raise ValueError("need at least one unitary")
    if len(unitaries) > 1 << program_qubits:
        raise ValueError(
            f"{len(unitaries)} unitaries do not fit in {program_qubits} program qubits"
        )
    us = [np.asarray(u, dtype=np.complex128) for u in unitaries]
    m = num_qubits_of(us[0])
    for i, u in enumerate(us):
        if u.shape != us[0].shape:
            raise DimensionError("all unitaries must act on the same number of qubits")
        if not is_unitary(u, tol):
            raise NotUnitaryError(f"unitaries[{i}] is not unitary")
    dim_p = 1 << program_qubits
    g = np.zeros(((1 << m) * dim_p,) * 2, dtype=np.complex128)
    eye = np.eye(1 << m, dtype=np.complex128)
    for i in range(dim_p):
        proj = np.zeros((dim_p, dim_p))
        proj[i, i] = 1.0
        g += np.kron(us[i] if i < len(us) else eye, proj)
    return g
