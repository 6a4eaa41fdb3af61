"""Numerical checks of the implementation contract G[|d>|P>] = (U|d>)|P'>,
the orthogonality theorem for deterministic programs, and Monte Carlo
success statistics for the probabilistic array.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    TOL_ALG,
    DimensionError,
    as_state,
    basis_state,
    equal_up_to_global_phase,
    inner_product,
    is_unitary,
    num_qubits_of,
    random_state,
)
from .progarray import BranchTree, _require_unitary

TOL_CERT = 1e-8
_MASK64 = 0xFFFFFFFFFFFFFFFF


class PreconditionError(ValueError):
    """A program does not implement a unitary under the given array."""


@dataclass(frozen=True)
class ImplementationCertificate:
    implemented: bool
    unitary: np.ndarray | None
    residual_program: np.ndarray | None
    max_deviation: float


@dataclass(frozen=True)
class SuccessStats:
    trials: int
    successes: int
    p_hat: float
    std_err: float
    master_seed: int
    mean_attempts_to_success: float | None


@dataclass(frozen=True)
class PairReport:
    i: int
    j: int
    overlap: float
    exempt: bool
    ok: bool


def mix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    return mix64((int(master_seed) ^ int(index)) & _MASK64)


def trial_draws(master_seed: int, index: int, m: int) -> np.ndarray:
    """The m uniform draws consumed by trial ``index``."""
    return np.random.default_rng(trial_seed(master_seed, index)).random(m)


def _split(g: np.ndarray, p: np.ndarray):
    g = np.asarray(g, dtype=np.complex128)
    p = np.asarray(p, dtype=np.complex128)
    n = num_qubits_of(p)
    total = num_qubits_of(g)
    if total <= n:
        raise DimensionError("array must act on more qubits than the program")
    return g, p, total - n, n


def _output_matrix(g, d, p):
    """G(|d>|p>) reshaped to (data, program) for Schmidt analysis."""
    out = g @ np.kron(d, p)
    return out.reshape(d.shape[0], p.shape[0])


def _leading_residual(mat: np.ndarray) -> tuple[np.ndarray, float]:
    # best rank-1 approximation; defect is the norm of the remainder
    _, s, vh = np.linalg.svd(mat)
    # rows of vh are conj(v); for mat = c (x) r the row is r itself
    return vh[0], float(np.sqrt(np.sum(s[1:] ** 2)))


def extract_implemented_unitary(g: np.ndarray, p: np.ndarray,
                                tol: float = TOL_CERT) -> ImplementationCertificate:
    """Decide whether program ``p`` makes ``g`` act as a fixed unitary on the data.

    Each data basis state is pushed through ``g``; the outputs must all be
    product states sharing one residual program. A negative answer is a
    certificate, not an error.
    """
    g, p, m, _ = _split(g, p)
    dim = 1 << m
    ref = None
    worst = 0.0
    columns = []
    for j in range(dim):
        mat = _output_matrix(g, basis_state(j, m), p)
        residual, defect = _leading_residual(mat)
        if ref is None:
            ref = residual
        worst = max(worst, defect, 1.0 - abs(np.vdot(ref, residual)))
        col = mat @ ref.conj()
        worst = max(worst, float(np.linalg.norm(mat - np.outer(col, ref))))
        columns.append(col)
    u = np.column_stack(columns)
    worst = max(worst, float(np.max(np.abs(u.conj().T @ u - np.eye(dim)))))
    if worst <= tol and is_unitary(u, tol):
        return ImplementationCertificate(True, u, ref, worst)
    return ImplementationCertificate(False, None, None, worst)


def _certified(g, p, tol):
    cert = extract_implemented_unitary(g, p, tol)
    if not cert.implemented:
        raise PreconditionError(
            f"program does not implement a unitary (max deviation {cert.max_deviation:.3e})"
        )
    return cert


def _random_data(m: int, num_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    return [random_state(m, int(s)) for s in rng.integers(0, 2**63, size=num_samples)]


def check_program_independence(g: np.ndarray, p: np.ndarray, num_samples: int = 10,
                               seed: int = 0, tol: float = TOL_CERT) -> float:
    """Worst pairwise disagreement 1 - |<P'_i|P'_j>| over random data states."""
    g, p, m, _ = _split(g, p)
    _certified(g, p, tol)
    residuals = [_leading_residual(_output_matrix(g, d, p))[0]
                 for d in _random_data(m, num_samples, seed)]
    worst = 0.0
    for a in range(len(residuals)):
        for b in range(a + 1, len(residuals)):
            worst = max(worst, 1.0 - abs(np.vdot(residuals[a], residuals[b])))
    return worst


def inner_product_identity(g: np.ndarray, p: np.ndarray, q: np.ndarray, num_samples: int = 100,
                           seed: int = 0, tol: float = TOL_CERT) -> float:
    """Max |<Q|P> - <Q'|P'><d|U_q^dagger U_p|d>| over random |d>."""
    g, p, m, _ = _split(g, p)
    cp = _certified(g, p, tol)
    cq = _certified(g, q, tol)
    lhs = inner_product(q, p)
    residual_overlap = inner_product(cq.residual_program, cp.residual_program)
    w = cq.unitary.conj().T @ cp.unitary
    worst = 0.0
    for d in _random_data(m, num_samples, seed):
        rhs = residual_overlap * np.vdot(d, w @ d)
        worst = max(worst, abs(lhs - rhs))
    return worst


def orthogonality_theorem_check(g: np.ndarray, programs: Sequence[np.ndarray],
                                tol: float = TOL_CERT) -> list[PairReport]:
    """Pairwise overlaps of programs; pairs whose unitaries agree up to phase are exempt."""
    certs = [_certified(g, p, tol) for p in programs]
    reports = []
    for i in range(len(programs)):
        for j in range(i + 1, len(programs)):
            overlap = abs(inner_product(programs[i], programs[j]))
            exempt = equal_up_to_global_phase(certs[i].unitary, certs[j].unitary, tol)
            reports.append(PairReport(i, j, overlap, exempt, exempt or overlap <= tol))
    return reports


def program_overlap(u: np.ndarray, v: np.ndarray) -> complex:
    """tr(u^dagger v) / 2**m, the overlap of the two encoded programs."""
    u, v = _require_unitary(u), _require_unitary(v)
    if u.shape != v.shape:
        raise DimensionError("unitaries act on different numbers of qubits")
    return complex(np.trace(u.conj().T @ v) / u.shape[0])


def _run_chunk(args):
    u, d, master_seed, start, stop = args
    tree = BranchTree(u, d)
    m = tree.m
    return [tree.run(trial_draws(master_seed, k, m)).success for k in range(start, stop)]


def trial_record(u: np.ndarray, d: np.ndarray, master_seed: int, index: int = 0):
    """The RunRecord of a single numbered trial."""
    tree = BranchTree(u, d)
    return tree.run(trial_draws(master_seed, index, tree.m))


def success_flags(u, d, trials: int, master_seed: int, workers: int = 1,
                  chunk: int = 20000) -> list[bool]:
    u = _require_unitary(u)
    d = as_state(d)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers <= 1:
        return _run_chunk((u, d, master_seed, 0, trials))
    jobs = [(u, d, master_seed, s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    flags: list[bool] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, jobs):
            flags.extend(part)
    return flags


def success_statistics(u: np.ndarray, d: np.ndarray, trials: int, master_seed: int,
                       workers: int = 1) -> SuccessStats:
    """Monte Carlo estimate of the success probability.

    Trial k draws its uniforms from a generator seeded by
    ``mix64(master_seed ^ k)``, so the result is independent of how trials are
    scheduled across workers.
    """
    flags = success_flags(u, d, trials, master_seed, workers)
    successes = sum(flags)
    p_hat = successes / trials
    std_err = math.sqrt(p_hat * (1 - p_hat) / trials)
    mean_attempts = None
    if successes:
        last = max(k for k, f in enumerate(flags) if f)
        # completed runs of attempts up to and including each success
        mean_attempts = (last + 1) / successes
    return SuccessStats(trials, successes, p_hat, std_err, int(master_seed), mean_attempts)
