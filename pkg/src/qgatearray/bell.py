"""Bell basis states and two-qubit Bell measurements.

A Bell vector on the pair ``(qa, qb)`` is written with ``qa`` as the first
(most significant) qubit of the pair. The four projectors do not depend on
that ordering, but the sign of the Psi- vector does, which matters whenever
a post-measurement state is factored into Bell pair (x) remainder.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import TOL_ALG, DimensionError, apply, density, num_qubits_of

_S = 1 / np.sqrt(2)


class BellOutcome(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    @property
    def index(self) -> int:
        return CANONICAL_ORDER.index(self)


CANONICAL_ORDER = (
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
)

_VECTORS = {
    BellOutcome.PHI_PLUS: np.array([_S, 0, 0, _S], dtype=np.complex128),
    BellOutcome.PHI_MINUS: np.array([_S, 0, 0, -_S], dtype=np.complex128),
    BellOutcome.PSI_PLUS: np.array([0, _S, _S, 0], dtype=np.complex128),
    BellOutcome.PSI_MINUS: np.array([0, _S, -_S, 0], dtype=np.complex128),
}
_PROJECTORS = {k: density(v) for k, v in _VECTORS.items()}


class ZeroProbabilityBranch(ArithmeticError):
    """Post-selection on a Bell outcome that has probability zero."""

    def __init__(self, kind: BellOutcome, probability: float):
        super().__init__(f"branch {kind.value} has probability {probability:.3e}")
        self.kind = kind
        self.probability = probability


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: BellOutcome
    probability: float
    post_state: np.ndarray


def bell_state(kind: BellOutcome) -> np.ndarray:
    return _VECTORS[kind].copy()


def bell_projector(kind: BellOutcome) -> np.ndarray:
    return density(_VECTORS[kind])


def _check_pair(state, qa, qb):
    n = num_qubits_of(state)
    if qa == qb:
        raise DimensionError("Bell measurement needs two distinct qubits")
    for q in (qa, qb):
        if not 0 <= q < n:
            raise DimensionError(f"qubit index {q} out of range for {n} qubits")
    return n


def branch_probabilities(state: np.ndarray, qa: int, qb: int) -> np.ndarray:
    """Probabilities of the four outcomes in canonical order."""
    _check_pair(state, qa, qb)
    probs = []
    for k in CANONICAL_ORDER:
        projected = apply(_PROJECTORS[k], state, [qa, qb])
        probs.append(float(np.real(np.vdot(projected, projected))))
    return np.array(probs)


def branch_bell(state: np.ndarray, qa: int, qb: int, kind: BellOutcome,
                tol: float = TOL_ALG) -> tuple[float, np.ndarray]:
    """Project (qa, qb) onto one Bell state; return (probability, renormalized state).

    Raises ZeroProbabilityBranch when the branch weight is below ``tol``.
    """
    _check_pair(state, qa, qb)
    projected = apply(_PROJECTORS[kind], state, [qa, qb])
    p = float(np.real(np.vdot(projected, projected)))
    if p <= tol:
        raise ZeroProbabilityBranch(kind, p)
    return p, projected / np.sqrt(p)


def measure_bell(state: np.ndarray, qa: int, qb: int, rand: float) -> MeasurementRecord:
    """Sample a Bell measurement with one uniform draw.

    The outcome is the first in canonical order whose cumulative probability
    exceeds ``rand``.
    """
    if not 0.0 <= rand < 1.0:
        raise ValueError(f"rand must lie in [0, 1), got {rand!r}")
    probs = branch_probabilities(state, qa, qb)
    kind = CANONICAL_ORDER[select_outcome(probs, rand)]
    p, post = branch_bell(state, qa, qb, kind, tol=0.0)
    return MeasurementRecord(kind, p, post)


def select_outcome(probs, rand: float) -> int:
    """Index of the first outcome whose cumulative probability exceeds rand."""
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if rand < acc:
            return i
    # rand beyond the rounded total: last branch with nonzero weight
    return max(i for i, p in enumerate(probs) if p > 0)
