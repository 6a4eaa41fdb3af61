"""Dense linear algebra over qubit registers.

States are 1-D complex arrays of length 2**n, operators and density matrices
are 2-D (2**n, 2**n) arrays. Qubit 0 is the most significant bit of the
amplitude index, so ``tensor_product(a, b)`` places ``a`` on the high-order
qubits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

TOL_ALG = 1e-10
TOL_NORM = 1e-9


class DimensionError(ValueError):
    """Shapes, kinds or qubit indices do not fit together."""


class NotUnitaryError(ValueError):
    pass


class InvalidChannelError(ValueError):
    pass


def num_qubits_of(x: np.ndarray) -> int:
    """Number of qubits of a state (1-D) or square operator (2-D)."""
    x = np.asarray(x)
    if x.ndim == 2 and x.shape[0] != x.shape[1]:
        raise DimensionError(f"operator must be square, got shape {x.shape}")
    if x.ndim not in (1, 2):
        raise DimensionError(f"expected a 1-D state or 2-D operator, got ndim={x.ndim}")
    dim = x.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return n


def as_state(amplitudes, tol: float = TOL_NORM) -> np.ndarray:
    """Validate and return a normalized state vector as complex128."""
    psi = np.asarray(amplitudes, dtype=np.complex128)
    if psi.ndim != 1:
        raise DimensionError("state vector must be 1-D")
    num_qubits_of(psi)
    if not np.all(np.isfinite(psi)):
        raise ValueError("state has non-finite amplitudes")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized (norm={norm!r})")
    return psi


def as_operator(entries) -> np.ndarray:
    op = np.asarray(entries, dtype=np.complex128)
    if op.ndim != 2:
        raise DimensionError("operator must be 2-D")
    num_qubits_of(op)
    if not np.all(np.isfinite(op)):
        raise ValueError("operator has non-finite entries")
    return op


def basis_state(index: int, num_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << num_qubits, dtype=np.complex128)
    psi[index] = 1.0
    return psi


def density(psi: np.ndarray) -> np.ndarray:
    """|psi><psi|."""
    return np.outer(psi, psi.conj())


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise DimensionError(
            f"tensor_product needs two states or two operators, got ndim {a.ndim} and {b.ndim}"
        )
    return np.kron(a, b)


def _check_targets(targets: Sequence[int], n: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise DimensionError(f"duplicate target qubits {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise DimensionError(f"qubit index {t} out of range for {n} qubits")
    return targets


def _apply_on_axes(op: np.ndarray, tensor: np.ndarray, axes: list[int]) -> np.ndarray:
    # tensor has one length-2 axis per qubit; op acts on `axes` in order
    k = len(axes)
    op_t = op.reshape((2,) * (2 * k))
    out = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply(op: np.ndarray, state: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Apply a k-qubit operator to the listed qubits of an n-qubit state.

    ``targets[0]`` is the operator's most significant qubit. Qubits not in
    ``targets`` see the identity.
    """
    op = np.asarray(op, dtype=np.complex128)
    state = np.asarray(state, dtype=np.complex128)
    n = num_qubits_of(state)
    k = num_qubits_of(op)
    targets = _check_targets(targets, n)
    if len(targets) != k:
        raise DimensionError(f"{k}-qubit operator given {len(targets)} targets")
    out = _apply_on_axes(op, state.reshape((2,) * n), targets)
    return out.reshape(-1)


def expand(op: np.ndarray, targets: Sequence[int], num_qubits: int) -> np.ndarray:
    """Full 2**n x 2**n matrix of ``op`` acting on ``targets``."""
    dim = 1 << num_qubits
    eye = np.eye(dim, dtype=np.complex128)
    # columns of the identity are basis states; apply op to each at once
    cols = eye.reshape((2,) * num_qubits + (dim,))
    targets = _check_targets(targets, num_qubits)
    if len(targets) != num_qubits_of(op):
        raise DimensionError("target count does not match operator size")
    out = _apply_on_axes(np.asarray(op, dtype=np.complex128), cols, targets)
    return out.reshape(dim, dim)


def apply_to_density(op: np.ndarray, rho: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """op rho op^dagger with op restricted to ``targets``."""
    rho = np.asarray(rho, dtype=np.complex128)
    n = num_qubits_of(rho)
    k = num_qubits_of(op)
    targets = _check_targets(targets, n)
    if len(targets) != k:
        raise DimensionError(f"{k}-qubit operator given {len(targets)} targets")
    t = rho.reshape((2,) * (2 * n))
    t = _apply_on_axes(op, t, targets)
    t = _apply_on_axes(np.conj(op), t, [n + q for q in targets])
    return t.reshape(1 << n, 1 << n)


def contract(state: np.ndarray, targets: Sequence[int], vector: np.ndarray) -> np.ndarray:
    """<vector|_targets |state>, leaving the other qubits in ascending order.

    The result is not renormalized.
    """
    state = np.asarray(state, dtype=np.complex128)
    n = num_qubits_of(state)
    targets = _check_targets(targets, n)
    k = len(targets)
    if k >= n or num_qubits_of(vector) != k:
        raise DimensionError("cannot contract these qubits")
    bra = np.conj(np.asarray(vector, dtype=np.complex128)).reshape((2,) * k)
    out = np.tensordot(bra, state.reshape((2,) * n), axes=(list(range(k)), targets))
    return out.reshape(-1)


def inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"inner product of shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|**2 for pure states."""
    return abs(inner_product(a, b)) ** 2


def is_unitary(op: np.ndarray, tol: float = TOL_ALG) -> bool:
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        return False
    dev = op.conj().T @ op - np.eye(op.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL_ALG) -> bool:
    """Compare two states (by overlap) or two operators (entrywise after phase fix).

    For operators the phase is fixed by the largest-magnitude entry of ``a``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    if not np.any(a) or not np.any(b):
        raise ValueError("cannot compare phase of an all-zero input")
    if a.ndim == 1:
        return abs(np.vdot(a, b)) >= 1.0 - tol
    idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    ratio = b[idx] / a[idx]
    if ratio == 0:
        return False
    phase = ratio / abs(ratio)
    return bool(np.max(np.abs(b - phase * a)) <= tol)


def random_haar_unitary(num_qubits: int, seed: int) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix.

    The phases of R's diagonal are folded back into Q so the distribution is
    exactly Haar rather than QR-convention dependent.
    """
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    dim = 1 << num_qubits
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_state(num_qubits: int, seed: int) -> np.ndarray:
    """Uniformly random pure state (normalized complex Gaussian vector)."""
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    dim = 1 << num_qubits
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def is_density_matrix(rho: np.ndarray, tol: float = TOL_ALG) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return bool(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) >= -tol)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``keep`` (in the listed order)."""
    rho = np.asarray(rho, dtype=np.complex128)
    n = num_qubits_of(rho)
    keep = _check_targets(keep, n)
    if not keep:
        raise DimensionError("keep must name at least one qubit")
    traced = [q for q in range(n) if q not in keep]
    dk, dt = 1 << len(keep), 1 << len(traced)
    t = rho.reshape((2,) * (2 * n))
    perm = keep + traced + [n + q for q in keep] + [n + q for q in traced]
    t = t.transpose(perm).reshape(dk, dt, dk, dt)
    return np.trace(t, axis1=1, axis2=3)


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by its Kraus operators; completeness is checked on construction."""

    kraus_ops: tuple
    tol: float = TOL_ALG

    def __post_init__(self):
        ops = tuple(as_operator(k) for k in self.kraus_ops)
        if not ops:
            raise InvalidChannelError("channel needs at least one Kraus operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1:
            raise InvalidChannelError(f"Kraus operators have mixed shapes {sorted(shapes)}")
        total = sum(k.conj().T @ k for k in ops)
        dev = float(np.max(np.abs(total - np.eye(total.shape[0]))))
        if dev > self.tol:
            raise InvalidChannelError(f"sum of K^dagger K deviates from identity by {dev:.3e}")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def num_qubits(self) -> int:
        return num_qubits_of(self.kraus_ops[0])

    def __len__(self):
        return len(self.kraus_ops)


def apply_channel(ch: KrausChannel, rho: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    if len(targets) != ch.num_qubits:
        raise DimensionError(f"{ch.num_qubits}-qubit channel given {len(targets)} targets")
    return sum(apply_to_density(k, rho, targets) for k in ch.kraus_ops)


def identity_channel(num_qubits: int = 1) -> KrausChannel:
    return KrausChannel((np.eye(1 << num_qubits),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((u,))


def amplitude_damping(gamma: float) -> KrausChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return KrausChannel((k0, k1))


def dephasing(p: float) -> KrausChannel:
    """Phase flip with probability p."""
    k0 = np.sqrt(1 - p) * np.eye(2)
    k1 = np.sqrt(p) * np.diag([1.0, -1.0])
    return KrausChannel((k0, k1))
