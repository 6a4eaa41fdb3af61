"""Named verification suites with default instance generators.

Each suite returns a JSON-ready report ``{"suite", "seed", "passed", "checks"}``;
failing checks carry the offending instance.
"""
from __future__ import annotations

import numpy as np

from . import progarray as pa
from . import serialize as ser
from . import verify as vf
from .core import TOL_ALG, inner_product, random_haar_unitary, random_state
from .gates import controlled_select, gate

SUITES = ("orthogonality", "identity", "independence", "overlap", "residuals")


def _seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.default_rng(seed).integers(0, 2**63, size=count)]


def random_select_instance(seed: int):
    """A controlled_select array over 2..4 Haar unitaries on 1 or 2 data qubits."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 3))
    count = int(rng.integers(2, 5))
    us = [random_haar_unitary(m, int(s)) for s in rng.integers(0, 2**63, size=count)]
    n = max(1, (count - 1).bit_length())
    g = controlled_select(us, n)
    programs = [np.eye(1 << n, dtype=complex)[i] for i in range(count)]
    return us, g, programs


def _ops(us):
    return [ser.to_obj(u, "operator") for u in us]


def orthogonality(seed: int = 0) -> dict:
    checks = []
    named = [gate("x"), gate("z"), gate("h")]
    instances = [("select[X,Z,H]", named)]
    instances += [(f"random_select[{k}]", sd) for k, sd in enumerate(_seeds(seed, 20))]
    for label, item in instances:
        if isinstance(item, list):
            us = item
            g, programs = pa.deterministic_array(us)
        else:
            us, g, programs = random_select_instance(item)
        reports = vf.orthogonality_theorem_check(g, programs)
        ok = all(r.ok for r in reports)
        check = {
            "instance": label,
            "pairs": [{"i": r.i, "j": r.j, "overlap": r.overlap, "exempt": r.exempt, "ok": r.ok}
                      for r in reports],
            "passed": ok,
        }
        if not ok:
            check["unitaries"] = _ops(us)
        checks.append(check)
    return _report("orthogonality", seed, checks)


def identity(seed: int = 0, num_samples: int = 100) -> dict:
    checks = []
    phase = np.exp(1j * np.pi / 4)
    fixed = [
        ("select[X,Z] p=|0>,q=|1>", [gate("x"), gate("z")]),
        ("select[I,e^{i pi/4} I] p=|0>,q=|1>", [gate("i"), phase * gate("i")]),
    ]
    for label, us in fixed:
        g, programs = pa.deterministic_array(us)
        checks.append(_identity_check(label, us, g, programs[0], programs[1], seed, num_samples))
    for k, sd in enumerate(_seeds(seed, 20)):
        us, g, programs = random_select_instance(sd)
        checks.append(_identity_check(f"random_select[{k}]", us, g, programs[0], programs[1],
                                      sd, num_samples))
    return _report("identity", seed, checks)


def _identity_check(label, us, g, p, q, seed, num_samples):
    violation = vf.inner_product_identity(g, p, q, num_samples=num_samples, seed=seed)
    check = {"instance": label, "max_violation": violation, "passed": violation <= vf.TOL_CERT}
    if not check["passed"]:
        check["unitaries"] = _ops(us)
    return check


def positive_instances(seed: int = 0):
    """(label, g, program) triples that certify; used by the independence suite."""
    h = gate("h")
    plus = np.array([1, 1]) / np.sqrt(2)
    out = [("H (x) I, p=|0>", np.kron(h, np.eye(2)), np.array([1, 0], dtype=complex)),
           ("H (x) I, p=|+>", np.kron(h, np.eye(2)), plus)]
    g, programs = pa.deterministic_array([gate("x"), gate("z")])
    out += [(f"select[X,Z], p=|{i}>", g, p) for i, p in enumerate(programs)]
    for k, sd in enumerate(_seeds(seed, 5)):
        rng = np.random.default_rng(sd)
        m = int(rng.integers(1, 3))
        u = random_haar_unitary(m, int(rng.integers(0, 2**63)))
        v = random_haar_unitary(1, int(rng.integers(0, 2**63)))
        out.append((f"U (x) V random[{k}]", np.kron(u, v), random_state(1, int(rng.integers(0, 2**63)))))
    return out


def independence(seed: int = 0, num_samples: int = 10, tol: float = TOL_ALG) -> dict:
    checks = []
    for label, g, p in positive_instances(seed):
        worst = vf.check_program_independence(g, p, num_samples=num_samples, seed=seed)
        checks.append({"instance": label, "max_disagreement": worst, "passed": worst <= tol})
    return _report("independence", seed, checks)


def overlap(seed: int = 0, pairs: int = 20, tol: float = TOL_ALG) -> dict:
    checks = []
    for k, sd in enumerate(_seeds(seed, pairs)):
        m = 1 + k % 2
        u = random_haar_unitary(m, sd)
        v = random_haar_unitary(m, vf.mix64(sd))
        trace_form = vf.program_overlap(u, v)
        state_form = inner_product(pa.encode_program(u), pa.encode_program(v))
        diff = abs(trace_form - state_form)
        check = {
            "instance": f"pair[{k}] m={m}",
            "trace_overlap": ser._pair(trace_form),
            "state_overlap": ser._pair(state_form),
            "abs_diff": diff,
            "passed": diff <= tol,
        }
        if diff > tol:
            check["unitaries"] = _ops([u, v])
        checks.append(check)
    return _report("overlap", seed, checks)


def residuals(seed: int = 0, samples: int = 10, tol: float = TOL_ALG) -> dict:
    checks = []
    for m in (1, 2):
        for k, sd in enumerate(_seeds(seed + m, samples)):
            u = random_haar_unitary(m, sd)
            d = random_state(m, vf.mix64(sd))
            table = []
            ok = True
            for br in pa.enumerate_branches(u, d):
                corr = pa.residual_correction(br.outcomes)
                expected = u @ corr.operator() @ d
                err = float(np.max(np.abs(br.residual - expected)))
                prob_err = abs(br.probability - 4.0 ** -m)
                row_ok = err <= tol and prob_err <= tol
                ok = ok and row_ok
                table.append({
                    "outcomes": [o.value for o in br.outcomes],
                    "probability": br.probability,
                    "phase": ser._pair(corr.phase),
                    "correction": [g.value for g in corr.per_qubit],
                    "max_error": err,
                    "passed": row_ok,
                })
            check = {"instance": f"m={m} sample[{k}]", "branches": table, "passed": ok}
            if not ok:
                check["unitaries"] = _ops([u])
                check["data"] = ser.to_obj(d, "state")
            checks.append(check)
    return _report("residuals", seed, checks)


def _report(name, seed, checks):
    return {"suite": name, "seed": seed, "passed": all(c["passed"] for c in checks), "checks": checks}


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return globals()[name](seed)
