"""Command-line surface: JSON in, JSON out.

Subcommands: classify, transform, params, extend, verify, moments. Sequence
documents carry {alpha, beta, q, matrices}; measure documents carry
{alpha, beta, q, atoms}. Complex entries are [re, im] pairs. Exit codes:
0 success/verified, 1 verification failure, 2 input error, 3 class
precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import blockmat, transform
from .classify import ClassMembershipError, classify, extension_interval, interval_params
from .matcore import ToleranceProfile
from .measures import MolecularMeasure, measure_transform_diagnostics, moments
from .seq import Interval, MatrixSequence, MomentSequence

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CLASS_ERROR = 3

VERIFY_SUITES = ("ft-representations", "ldu-reductions", "shift-theorems", "hankel-identities")


class InputError(ValueError):
    pass


def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    return [[_pair(z) for z in row] for row in m]


def seq_to_json(s: MatrixSequence) -> list:
    return [matrix_to_json(m) for m in s]


def _entry_from_json(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v, 0.0)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise InputError(f"bad complex entry {v!r}: expected number or [re, im]")


def matrix_from_json(rows: Any, q: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != q:
        raise InputError(f"matrix must be a list of {q} rows")
    out = np.zeros((q, q), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != q:
            raise InputError(f"matrix row {i} must have {q} entries")
        for j, v in enumerate(row):
            out[i, j] = _entry_from_json(v)
    return out


def _document(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    return doc


def _interval_of(doc: dict) -> Interval:
    try:
        alpha, beta = float(doc["alpha"]), float(doc["beta"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("document needs numeric alpha and beta") from exc
    try:
        return Interval(alpha, beta)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def sequence_from_doc(doc: dict) -> MomentSequence:
    interval = _interval_of(doc)
    q = doc.get("q")
    if not isinstance(q, int) or q < 1:
        raise InputError("document needs a positive integer q")
    matrices = doc.get("matrices")
    if not isinstance(matrices, list) or not matrices:
        raise InputError("document needs a nonempty 'matrices' list")
    stack = np.stack([matrix_from_json(m, q) for m in matrices])
    try:
        return MomentSequence(interval, MatrixSequence(stack))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def measure_from_doc(doc: dict) -> MolecularMeasure:
    interval = _interval_of(doc)
    q = doc.get("q")
    if not isinstance(q, int) or q < 1:
        raise InputError("document needs a positive integer q")
    atoms = doc.get("atoms")
    if not isinstance(atoms, list):
        raise InputError("measure document needs an 'atoms' list")
    parsed = []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or "node" not in atom or "weight" not in atom:
            raise InputError(f"atom {i} must be an object with 'node' and 'weight'")
        parsed.append((float(atom["node"]), matrix_from_json(atom["weight"], q)))
    try:
        return MolecularMeasure.from_atoms(interval, parsed, q=q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def sequence_to_doc(ms: MomentSequence, metadata: dict | None = None) -> dict:
    doc = {
        "alpha": ms.interval.alpha,
        "beta": ms.interval.beta,
        "q": ms.q,
        "matrices": seq_to_json(ms.seq),
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def _params_to_json(params) -> dict:
    out = {
        "u": seq_to_json(params.u),
        "o": seq_to_json(params.o),
        "m": seq_to_json(params.m),
        "d": seq_to_json(params.d),
        "A": seq_to_json(params.lower_sc),
        "B": seq_to_json(params.upper_sc) if params.upper_sc is not None else [],
        "B_index_base": 1,
        "f": seq_to_json(params.f),
        "e": seq_to_json(params.e),
        "e_reliable": params.e_reliable,
        "degenerate_tail": list(params.degenerate_tail),
    }
    return out


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def _tolerances(args: argparse.Namespace) -> ToleranceProfile:
    return ToleranceProfile(
        rank_rel_tol=args.rank_tol, psd_tol=args.psd_tol, eq_rel_tol=args.eq_tol
    )


def cmd_classify(args: argparse.Namespace) -> int:
    ms = sequence_from_doc(_document(args.file))
    report = classify(ms, _tolerances(args))
    _emit(
        {
            "in_Hgg": report.in_Hgg,
            "in_Kgg": report.in_Kgg,
            "in_Lgg": report.in_Lgg,
            "in_Fgg": report.in_Fgg,
            "in_Fg": report.in_Fg,
            "witnesses": {
                cls: [{"matrix": name, "min_eigenvalue": lo} for name, lo in entries]
                for cls, entries in report.witnesses.items()
            },
            "seed": args.seed,
        }
    )
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    ms = sequence_from_doc(_document(args.file))
    steps = ms.kappa if args.steps is None else args.steps
    if not 0 <= steps <= ms.kappa:
        raise InputError(f"--steps must lie in 0..{ms.kappa}, got {steps}")
    trace = transform.f_transform_iter(ms, steps, _tolerances(args))
    _emit(
        {
            "steps": steps,
            "stages": [sequence_to_doc(stage) for stage in trace.stages],
            "params_per_stage": [_params_to_json(p) for p in trace.params_per_stage],
            "seed": args.seed,
        }
    )
    return EXIT_OK


def cmd_params(args: argparse.Namespace) -> int:
    ms = sequence_from_doc(_document(args.file))
    params = interval_params(ms, _tolerances(args))
    payload = _params_to_json(params)
    payload["seed"] = args.seed
    _emit(payload)
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    ms = sequence_from_doc(_document(args.file))
    u, o = extension_interval(ms, _tolerances(args))
    _emit({"u": matrix_to_json(u), "o": matrix_to_json(o), "seed": args.seed})
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    ms = sequence_from_doc(_document(args.file))
    tol = _tolerances(args)
    residuals: dict[str, float] = {}
    extra: dict[str, Any] = {}
    if args.suite == "ft-representations":
        reports = transform.verify_ft_representations(ms, tol)
        for name, rep in reports.items():
            residuals[name] = rep.residual
        extra["rank_matches"] = {name: rep.rank_match for name, rep in reports.items()}
        extra["determinants"] = {
            name: {
                "lhs": _pair(rep.det_lhs),
                "rhs": _pair(rep.det_rhs),
                "relative_residual": rep.det_residual,
            }
            for name, rep in reports.items()
        }
    elif args.suite == "ldu-reductions":
        residuals = transform.verify_ldu_reductions(ms, tol)
    elif args.suite == "shift-theorems":
        for k in range(ms.kappa + 1):
            for law, value in transform.shift_theorem_check(ms, k, tol).items():
                residuals[f"k={k}/{law}"] = value
    elif args.suite == "hankel-identities":
        residuals = blockmat.verify_reciprocal_identities(ms.seq, tol)
    else:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(VERIFY_SUITES)}")
    verified = all(v <= tol.eq_rel_tol for v in residuals.values())
    payload = {
        "suite": args.suite,
        "residuals": residuals,
        "max_residual": max(residuals.values(), default=0.0),
        "tolerance": tol.eq_rel_tol,
        "verified": verified,
        "seed": args.seed,
    }
    payload.update(extra)
    _emit(payload)
    return EXIT_OK if verified else EXIT_VERIFY_FAILED


def cmd_moments(args: argparse.Namespace) -> int:
    mu = measure_from_doc(_document(args.file))
    ms = moments(mu, args.kappa)
    tol = _tolerances(args)
    diag = measure_transform_diagnostics(ms, args.kappa, tol)
    _emit(
        sequence_to_doc(
            ms,
            metadata={
                "molecular_order": diag.molecular_order,
                "central_order": diag.central_order,
                "seed": args.seed,
            },
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkit",
        description="Moment-sequence toolkit for compact intervals: classification, "
        "interval parameters, length-reducing transforms, identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", metavar="FILE", help="input JSON document ('-' for stdin)")
        p.add_argument("--seed", type=int, default=None, help="seed recorded in the report")
        p.add_argument("--rank-tol", type=float, default=1e-10, dest="rank_tol")
        p.add_argument("--psd-tol", type=float, default=1e-9, dest="psd_tol")
        p.add_argument("--eq-tol", type=float, default=1e-8, dest="eq_tol")

    p = sub.add_parser("classify", help="sequence class membership report")
    add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("transform", help="iterated interval transform trace")
    p.add_argument("--steps", type=int, default=None, help="number of steps (default: kappa)")
    add_common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("params", help="interval parameter extraction")
    add_common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("extend", help="one-step extension interval endpoints")
    add_common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="run an identity verification suite")
    p.add_argument("--suite", default="ft-representations", choices=VERIFY_SUITES)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", help="moments of a molecular measure document")
    p.add_argument("--kappa", type=int, default=4)
    add_common(p)
    p.set_defaults(func=cmd_moments)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        json.dump({"error": "input", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_INPUT_ERROR
    except ClassMembershipError as exc:
        json.dump({"error": "class-precondition", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_CLASS_ERROR
    except ValueError as exc:
        json.dump({"error": "input", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
