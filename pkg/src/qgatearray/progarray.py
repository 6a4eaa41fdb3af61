"""Programmable gate arrays: program encoding, the probabilistic universal
array, its failure-branch algebra, the deterministic select array and the
mixed-program (channel) mode.

Register layout for an m-qubit data register (3m qubits in total)::

    data            qubits 0 .. m-1
    upper program   qubits m .. 2m-1
    lower program   qubits 2m .. 3m-1     (carries U's action)

Program pair i is (upper i, lower i); Bell measurement i acts on
(upper i, data i). Bell vectors are ordered (program qubit, data qubit) when
a branch state is factored, which puts the Psi- branch at +i U Y |d>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Sequence

import numpy as np

from . import bell
from .bell import CANONICAL_ORDER, BellOutcome, ZeroProbabilityBranch
from .core import (
    TOL_ALG,
    DimensionError,
    KrausChannel,
    NotUnitaryError,
    apply,
    apply_channel,
    apply_to_density,
    as_state,
    basis_state,
    contract,
    density,
    is_density_matrix,
    is_unitary,
    num_qubits_of,
    partial_trace,
)
from .gates import GateName, apply_swap, controlled_select, gate, swap_circuit


@dataclass(frozen=True)
class RunRecord:
    outcomes: tuple[BellOutcome, ...]
    success: bool
    branch_probability: float
    final_data: np.ndarray


@dataclass(frozen=True)
class PauliCorrection:
    phase: complex
    per_qubit: tuple[GateName, ...]

    def operator(self) -> np.ndarray:
        """phase * (sigma_0 (x) sigma_1 (x) ...)."""
        return self.phase * reduce(np.kron, [gate(g) for g in self.per_qubit])


@dataclass(frozen=True)
class Branch:
    outcomes: tuple[BellOutcome, ...]
    probability: float
    residual: np.ndarray


_CORRECTIONS = {
    BellOutcome.PHI_PLUS: GateName.I,
    BellOutcome.PHI_MINUS: GateName.Z,
    BellOutcome.PSI_PLUS: GateName.X,
    BellOutcome.PSI_MINUS: GateName.Y,
}


def _require_unitary(u, tol=TOL_ALG) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or not is_unitary(u, tol):
        raise NotUnitaryError("operator is not unitary")
    return u


def _measured_pair(i: int, m: int) -> list[int]:
    return [m + i, i]


def maximally_entangled_program(m: int) -> np.ndarray:
    """Tensor product of |Phi+> over program pairs (i, m+i) on 2m qubits."""
    psi = np.zeros(1 << (2 * m), dtype=np.complex128)
    amp = 1 / math.sqrt(1 << m)
    for x in range(1 << m):
        psi[(x << m) | x] = amp
    return psi


def encode_program(u: np.ndarray, tol: float = TOL_ALG) -> np.ndarray:
    u = _require_unitary(u, tol)
    m = num_qubits_of(u)
    return apply(u, maximally_entangled_program(m), list(range(m, 2 * m)))


def assemble_input(d: np.ndarray, p: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=np.complex128)
    p = np.asarray(p, dtype=np.complex128)
    if d.ndim != 1 or p.ndim != 1:
        raise DimensionError("data and program must be state vectors")
    m = num_qubits_of(d)
    if num_qubits_of(p) != 2 * m:
        raise DimensionError(f"{m}-qubit data needs a {2 * m}-qubit program")
    return np.kron(d, p)


def extract_data_factor(post_state: np.ndarray, outcomes: Sequence[BellOutcome], m: int,
                        swapped: bool = True) -> np.ndarray:
    """The m-qubit factor left after removing the Bell pairs named by ``outcomes``.

    With ``swapped`` the swap-back has run and the result sits on the data
    qubits; otherwise it is read off the lower program qubits.
    """
    if len(outcomes) != m:
        raise DimensionError(f"need {m} outcomes, got {len(outcomes)}")
    targets = []
    for i in range(m):
        targets += [m + i, 2 * m + i] if swapped else _measured_pair(i, m)
    vec = reduce(np.kron, [bell.bell_state(k) for k in outcomes])
    return contract(post_state, targets, vec)


def swap_back(state: np.ndarray, m: int) -> np.ndarray:
    for i in range(m):
        state = apply_swap(state, i, 2 * m + i)
    return state


class BranchTree:
    """Memoized measurement tree for one (U, |d>) pair.

    Node states depend only on the outcome prefix, so repeated runs can
    share them. Every run goes through the same arithmetic whether or not
    a node was cached.
    """

    def __init__(self, u: np.ndarray, d: np.ndarray, relabel: bool = False):
        self.u = _require_unitary(u)
        self.m = num_qubits_of(self.u)
        d = as_state(d)
        if num_qubits_of(d) != self.m:
            raise DimensionError("data register size does not match the unitary")
        self.relabel = relabel
        self._states = {(): assemble_input(d, encode_program(self.u))}
        self._probs: dict = {}
        self._final: dict = {}

    def state(self, prefix: tuple) -> np.ndarray:
        if prefix not in self._states:
            parent = self.state(prefix[:-1])
            i = len(prefix) - 1
            _, post = bell.branch_bell(parent, *_measured_pair(i, self.m), prefix[-1], tol=0.0)
            self._states[prefix] = post
        return self._states[prefix]

    def probabilities(self, prefix: tuple) -> np.ndarray:
        if prefix not in self._probs:
            i = len(prefix)
            self._probs[prefix] = bell.branch_probabilities(self.state(prefix), *_measured_pair(i, self.m))
        return self._probs[prefix]

    def final_data(self, outcomes: tuple) -> np.ndarray:
        if outcomes not in self._final:
            post = self.state(outcomes)
            if self.relabel:
                data = extract_data_factor(post, outcomes, self.m, swapped=False)
            else:
                data = extract_data_factor(swap_back(post, self.m), outcomes, self.m)
            self._final[outcomes] = data
        return self._final[outcomes]

    def run(self, rand_stream: Sequence[float]) -> RunRecord:
        if len(rand_stream) != self.m:
            raise ValueError(f"need {self.m} uniform draws, got {len(rand_stream)}")
        prefix: tuple = ()
        prob = 1.0
        for r in rand_stream:
            if not 0.0 <= r < 1.0:
                raise ValueError(f"uniform draw {r!r} outside [0, 1)")
            probs = self.probabilities(prefix)
            k = bell.select_outcome(probs, r)
            prob *= probs[k]
            prefix = prefix + (CANONICAL_ORDER[k],)
        success = all(k is BellOutcome.PHI_PLUS for k in prefix)
        return RunRecord(prefix, success, prob, self.final_data(prefix))


def run_once(u: np.ndarray, d: np.ndarray, rand_stream: Sequence[float],
             relabel: bool = False) -> RunRecord:
    """One pass through the universal array.

    Failed runs still go through the swap-back; ``final_data`` is then the
    uncorrected branch state phase * U * sigma |d>.
    """
    return BranchTree(u, d, relabel=relabel).run(rand_stream)


def postselect(u: np.ndarray, d: np.ndarray, relabel: bool = False) -> tuple[float, np.ndarray]:
    """Probability and output of the all-Phi+ branch."""
    u = _require_unitary(u)
    m = num_qubits_of(u)
    d = as_state(d)
    if num_qubits_of(d) != m:
        raise DimensionError("data register size does not match the unitary")
    state = assemble_input(d, encode_program(u))
    prob = 1.0
    for i in range(m):
        try:
            p, state = bell.branch_bell(state, *_measured_pair(i, m), BellOutcome.PHI_PLUS)
        except ZeroProbabilityBranch as exc:  # pragma: no cover - unreachable for valid input
            raise AssertionError("all-Phi+ branch cannot vanish") from exc
        prob *= p
    outcomes = (BellOutcome.PHI_PLUS,) * m
    if relabel:
        return prob, extract_data_factor(state, outcomes, m, swapped=False)
    return prob, extract_data_factor(swap_back(state, m), outcomes, m)


def enumerate_branches(u: np.ndarray, d: np.ndarray, relabel: bool = False) -> list[Branch]:
    """Every one of the 4**m outcome tuples with its probability and residual state."""
    tree = BranchTree(u, d, relabel=relabel)
    out = []
    for outcomes in product(CANONICAL_ORDER, repeat=tree.m):
        prob = 1.0
        for i in range(tree.m):
            prob *= tree.probabilities(outcomes[:i])[outcomes[i].index]
        out.append(Branch(outcomes, prob, tree.final_data(outcomes)))
    return out


def residual_correction(outcomes: Sequence[BellOutcome], m: int | None = None) -> PauliCorrection:
    """Pauli frame of a branch: residual = phase * U * (sigma_0 (x) ... ) |d>."""
    outcomes = [BellOutcome(o) if not isinstance(o, BellOutcome) else o for o in outcomes]
    if m is not None and len(outcomes) != m:
        raise ValueError(f"expected {m} outcomes, got {len(outcomes)}")
    if not outcomes:
        raise ValueError("need at least one outcome")
    phase = 1j ** sum(o is BellOutcome.PSI_MINUS for o in outcomes)
    return PauliCorrection(complex(phase), tuple(_CORRECTIONS[o] for o in outcomes))


def cost_summary(m: int) -> dict:
    """Attempt and per-attempt gate counts, reported separately."""
    return {
        "expected_attempts": 4 ** m,
        "bell_measurements_per_attempt": m,
        "swap_cnots_per_attempt": 3 * m,
    }


def deterministic_array(unitaries: Sequence[np.ndarray]) -> tuple[np.ndarray, list[np.ndarray]]:
    """Select array over ceil(log2 N) program qubits, with basis-state programs."""
    if not unitaries:
        raise ValueError("need at least one unitary")
    n = max(1, math.ceil(math.log2(len(unitaries))))
    g = controlled_select(unitaries, n)
    return g, [basis_state(i, n) for i in range(len(unitaries))]


def encode_program_channel(ch: KrausChannel) -> np.ndarray:
    m = ch.num_qubits
    rho = density(maximally_entangled_program(m))
    return apply_channel(ch, rho, list(range(m, 2 * m)))


def run_channel_postselect(ch: KrausChannel, rho_d: np.ndarray,
                           tol: float = TOL_ALG) -> tuple[float, np.ndarray]:
    """Post-select the all-Phi+ branch with a mixed (channel) program."""
    m = ch.num_qubits
    rho_d = np.asarray(rho_d, dtype=np.complex128)
    if rho_d.ndim != 2 or num_qubits_of(rho_d) != m:
        raise DimensionError(f"data density matrix must act on {m} qubits")
    if not is_density_matrix(rho_d, tol):
        raise ValueError("data input is not a valid density matrix")
    rho = np.kron(rho_d, encode_program_channel(ch))
    proj = bell.bell_projector(BellOutcome.PHI_PLUS)
    prob = 1.0
    for i in range(m):
        rho = apply_to_density(proj, rho, _measured_pair(i, m))
        p = float(np.real(np.trace(rho)))
        if p <= tol:
            raise ZeroProbabilityBranch(BellOutcome.PHI_PLUS, p)
        rho = rho / p
        prob *= p
    for i in range(m):
        for op, targets in swap_circuit(i, 2 * m + i):
            rho = apply_to_density(op, rho, targets)
    return prob, partial_trace(rho, list(range(m)))
