"""Command-line front end.

Exit codes: 0 ok / success branch, 1 verification failure, 2 usage or parse
error, 3 invalid quantum object, 10 failure branch of a probabilistic run.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import progarray as pa
from . import serialize as ser
from . import suites
from . import verify as vf
from .bell import ZeroProbabilityBranch
from .core import (
    InvalidChannelError,
    NotUnitaryError,
    as_operator,
    as_state,
    is_density_matrix,
    is_unitary,
    num_qubits_of,
    random_haar_unitary,
)
from .gates import GateName, gate

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INVALID, EXIT_FAILED_BRANCH = 0, 1, 2, 3, 10

_NAMED_DATA = {
    "0": [1, 0],
    "1": [0, 1],
    "+": [2**-0.5, 2**-0.5],
    "-": [2**-0.5, -(2**-0.5)],
}


class UsageError(Exception):
    pass


class InvalidObject(Exception):
    pass


def _load_unitary(arg: str, m: int | None, seed: int, tol: float) -> np.ndarray:
    try:
        u = gate(GateName.parse(arg))
    except ValueError:
        if arg.lower().startswith("random"):
            # "random" or "random:<seed>"
            _, _, s = arg.partition(":")
            u = random_haar_unitary(m or 1, int(s) if s else seed)
        elif os.path.exists(arg):
            try:
                u = as_operator(ser.load(arg, "operator"))
            except ValueError as exc:
                raise UsageError(f"{arg}: {exc}") from None
        else:
            raise UsageError(f"--unitary {arg!r} is neither a gate name nor a readable file")
    if m is not None and num_qubits_of(u) != m:
        raise UsageError(f"unitary acts on {num_qubits_of(u)} qubits but --m is {m}")
    if not is_unitary(u, tol):
        raise InvalidObject("operator is not unitary at the requested tolerance")
    return u


def _load_data(arg: str, m: int, tol: float) -> np.ndarray:
    if arg in _NAMED_DATA:
        d = np.array(_NAMED_DATA[arg], dtype=complex)
    elif os.path.exists(arg):
        try:
            d = ser.load(arg, "state")
        except ValueError as exc:
            raise UsageError(f"{arg}: {exc}") from None
    else:
        raise UsageError(f"--data {arg!r} is neither 0, 1, +, - nor a readable file")
    if num_qubits_of(d) != m:
        raise UsageError(f"data has {num_qubits_of(d)} qubits, the unitary acts on {m}")
    try:
        return as_state(d, tol=max(tol, 1e-9))
    except ValueError as exc:
        raise InvalidObject(str(exc)) from None


def _emit(args, obj) -> None:
    text = ser.dumps(obj)
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_encode(args) -> int:
    u = _load_unitary(args.unitary, args.m, args.seed, args.tol)
    _emit(args, ser.to_obj(pa.encode_program(u, args.tol), "state"))
    return EXIT_OK


def cmd_run(args) -> int:
    u = _load_unitary(args.unitary, args.m, args.seed, args.tol)
    d = _load_data(args.data, num_qubits_of(u), args.tol)
    tree = pa.BranchTree(u, d, relabel=args.relabel)
    rec = tree.run(vf.trial_draws(args.seed, 0, tree.m))
    _emit(args, ser.record_obj(rec))
    return EXIT_OK if rec.success else EXIT_FAILED_BRANCH


def cmd_postselect(args) -> int:
    u = _load_unitary(args.unitary, args.m, args.seed, args.tol)
    d = _load_data(args.data, num_qubits_of(u), args.tol)
    prob, out = pa.postselect(u, d, relabel=args.relabel)
    _emit(args, {"probability": ser._num(prob), "output": ser.to_obj(out, "state")})
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    u = _load_unitary(args.unitary, args.m, args.seed, args.tol)
    d = _load_data(args.data, num_qubits_of(u), args.tol)
    stats = vf.success_statistics(u, d, args.trials, args.seed, workers=args.workers)
    _emit(args, ser.stats_obj(stats))
    return EXIT_OK


def cmd_channel(args) -> int:
    try:
        ch = ser.load(args.kraus, "channel", tol=args.tol)
        rho = ser.load(args.data_density, "density")
    except InvalidChannelError as exc:
        raise InvalidObject(str(exc)) from None
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.m is not None and ch.num_qubits != args.m:
        raise UsageError(f"channel acts on {ch.num_qubits} qubits but --m is {args.m}")
    if num_qubits_of(rho) != ch.num_qubits:
        raise UsageError("data density matrix and channel act on different registers")
    if not is_density_matrix(rho, args.tol):
        raise InvalidObject("data input is not a valid density matrix")
    try:
        prob, out = pa.run_channel_postselect(ch, rho, tol=args.tol)
    except ZeroProbabilityBranch as exc:
        raise InvalidObject(str(exc)) from None
    _emit(args, {"probability": ser._num(prob), "output": ser.to_obj(out, "density")})
    return EXIT_OK


def cmd_verify(args) -> int:
    report = suites.run_suite(args.suite, args.seed)
    _emit(args, report)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgatearray", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=None, help="data register size")
    common.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--out", default="-", help="output path (default stdout)")

    p = sub.add_parser("encode", parents=[common], help="encode a unitary as a program state")
    p.add_argument("--unitary", required=True, help="gate name, random[:seed], or operator JSON file")
    p.set_defaults(func=cmd_encode)

    for name, func, help_ in (
        ("run", cmd_run, "one probabilistic run of the universal array"),
        ("postselect", cmd_postselect, "the all-Phi+ branch, deterministically"),
        ("estimate", cmd_estimate, "Monte Carlo success statistics"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--unitary", required=True)
        p.add_argument("--data", required=True, help="0, 1, +, - or state JSON file")
        if name == "estimate":
            p.add_argument("--trials", type=int, required=True)
            p.add_argument("--workers", type=int, default=1)
        else:
            p.add_argument("--relabel", action="store_true",
                           help="read the output off the lower program qubits instead of swapping")
        p.set_defaults(func=func)

    p = sub.add_parser("channel", parents=[common], help="post-selected run with a channel program")
    p.add_argument("--kraus", required=True, help="channel JSON file")
    p.add_argument("--data-density", required=True, help="density JSON file")
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=suites.SUITES)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidObject, NotUnitaryError, InvalidChannelError) as exc:
        print(f"invalid quantum object: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
