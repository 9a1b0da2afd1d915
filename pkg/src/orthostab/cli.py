"""Command-line interface: ``orthostab <subcommand> ...``.

Exit codes: 0 success, 1 infeasible or verification failed, 2 invalid
input, 3 ambiguous numerical rank.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dimensions import report_for
from .lieoracle import oracle_dim_herm, oracle_dim_sym, verify_stab_element
from .matcore import (
    TOL_ENV, InputValidationError, NumericalAmbiguity, OrthostabError, SymSpec,
    as_mat, assemble_normal_form, mat_from_json, mat_to_json, spec_from_json, spec_to_json,
)
from .normform import classify_hermitian, reduce_pair
from .stabsolve import stabilizer_parameterization
from .suite import EXAMPLES, SAMPLE_SCALE, dumps, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_AMBIGUOUS = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    seed: int = 0
    tol_multiplier: float | None = None
    out: str | None = None
    samples: int = 0


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"{path} is not valid JSON: {exc.msg}") from None


def read_matrix(path) -> np.ndarray:
    """A matrix file is ``{"rows", "cols", "data": [[re, im], ...]}`` or a nested list."""
    d = _read_json(path)
    if isinstance(d, dict):
        return mat_from_json(d)
    try:
        arr = np.array(d, dtype=float)
    except (TypeError, ValueError):
        raise InputValidationError(f"{path}: matrix must be numbers or [re, im] pairs") from None
    if arr.ndim == 3 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    return as_mat(arr)


def _emit(obj, out=None):
    text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def cmd_stabdim(cfg: RunConfig, args):
    spec = spec_from_json(_read_json(args.spec))
    rep = report_for(spec)
    if args.oracle:
        M = assemble_normal_form(spec)
        rep.oracle = (oracle_dim_sym(M) if isinstance(spec, SymSpec) else oracle_dim_herm(M)).nullity
    _emit(rep.to_json(), cfg.out)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, args):
    M = read_matrix(args.matrix)
    res = oracle_dim_sym(M) if args.action == "sym" else oracle_dim_herm(M)
    _emit(res.to_json(), cfg.out)
    return EXIT_OK


def cmd_solve(cfg: RunConfig, args):
    spec = spec_from_json(_read_json(args.spec))
    par = stabilizer_parameterization(spec)
    report = {"spec": spec_to_json(spec), "action": par.action, "feasible": par.feasible,
              "classes": [{"key": [str(k) for k in c.key], "case": c.problem.case,
                           "solution": c.solution.to_json()} for c in par.classes]}
    ok = par.feasible
    if par.feasible:
        out = Path(args.out) if args.out else None
        if out:
            out.mkdir(parents=True, exist_ok=True)
            (out / "M.json").write_text(json.dumps(mat_to_json(par.matrix)) + "\n")
        rng = np.random.default_rng(cfg.seed)
        certs = []
        for k in range(cfg.samples):
            Q = par.space.sample(rng, SAMPLE_SCALE)
            rep = verify_stab_element(Q, par.matrix, par.action, args.tol)
            ok &= rep.passed
            name = f"Q_{k:03d}.json"
            if out:
                (out / name).write_text(json.dumps(mat_to_json(Q)) + "\n")
            certs.append(dict(rep.to_json(), file=name))
        report["realdim"] = par.space.realdim
        report["samples"] = certs
        if out:
            (out / "report.json").write_text(json.dumps(report, sort_keys=True, indent=1) + "\n")
    _emit(report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(cfg: RunConfig, args):
    _emit(classify_hermitian(read_matrix(args.matrix)).to_json(), cfg.out)
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, args):
    red = reduce_pair(read_matrix(args.a), read_matrix(args.b))
    _emit(red.to_json(), cfg.out)
    return EXIT_OK if red.certificate <= 1e-9 else EXIT_FAIL


def cmd_verify(cfg: RunConfig, args):
    rep = verify_stab_element(read_matrix(args.q), read_matrix(args.m), args.action, args.tol)
    _emit(rep.to_json(), cfg.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_suite(cfg: RunConfig, args):
    only = set(args.only.split(",")) if args.only else None
    summary = run_suite(cfg.seed, only)
    _emit(dumps(summary), cfg.out)
    return EXIT_OK if summary["all_pass"] else EXIT_FAIL


def cmd_example(cfg: RunConfig, args):
    res = EXAMPLES[args.name]()
    _emit(res, cfg.out)
    return EXIT_OK if res["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orthostab", description=__doc__.splitlines()[0])
    p.add_argument("--tol-multiplier", type=float, default=None,
                   help=f"rank tolerance multiplier (overrides ${TOL_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stabdim", help="closed-form stabilizer dimension of a spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--oracle", action="store_true", help="also compute the tangent-space oracle")
    s.add_argument("--out")
    s.set_defaults(func=cmd_stabdim)

    s = sub.add_parser("oracle", help="tangent-space stabilizer dimension of a matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--action", choices=("sym", "herm"), required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("solve", help="parameterize the stabilizer and sample elements")
    s.add_argument("--spec", required=True)
    s.add_argument("--samples", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("classify", help="structural class of a Hermitian matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reduce", help="normalize a Hermitian/symmetric pair (A, B) to (A~, I)")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("verify", help="check stabilizer membership of Q")
    s.add_argument("--q", required=True)
    s.add_argument("--m", required=True)
    s.add_argument("--action", choices=("sym", "herm"), required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="run the acceptance suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.add_argument("--out")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("example", help="reproduce a worked example against its fixture")
    s.add_argument("--name", choices=sorted(EXAMPLES), required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol_multiplier is not None:
        os.environ[TOL_ENV] = repr(args.tol_multiplier)
    cfg = RunConfig(args.command, {k: v for k, v in vars(args).items() if k not in ("func", "command")},
                    seed=getattr(args, "seed", 0), tol_multiplier=args.tol_multiplier,
                    out=getattr(args, "out", None), samples=getattr(args, "samples", 0))
    try:
        return args.func(cfg, args)
    except InputValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalAmbiguity as exc:
        print(f"numerical ambiguity: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except OrthostabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
