"""Command-line front end.

Exit codes: 0 success/pass, 1 semantic failure (conditions, realizability,
disagreement), 2 input error.  Every file argument may be ``-`` for stdin.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .conditions import check_conditions
from .core import (
    DEFAULT_TOL,
    JacobiError,
    InvalidInput,
    JacobiMatrix,
    NotRealizable,
    PoleAtPoint,
    SpectralData,
    TolerancePolicy,
    validate_jacobi,
)
from .eigen import eigenvalues
from .green import green_nn_poly, green_nn_spectral, green_nn_two_spectra, green_scale, relative_deviation
from .inverse import solve_inverse
from .massspring import MassSpringSystem, jacobi_to_system, system_to_jacobi
from .perturb import apply_perturbation, perturbation_from


class UsageError(Exception):
    pass


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return "%.17g" % x
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _emit(payload, out: str | None):
    text = dumps(payload) + "\n"
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tol(args) -> TolerancePolicy:
    if args.tol is None:
        return DEFAULT_TOL
    return TolerancePolicy(rel_tol=args.tol, eigen_tol=min(DEFAULT_TOL.eigen_tol, args.tol))


def _matrix(path: str) -> JacobiMatrix:
    d = _read_json(path)
    if not isinstance(d, dict):
        raise UsageError("matrix JSON must be an object with fields 'n', 'a', 'b'")
    J = JacobiMatrix.from_dict(d)
    report = validate_jacobi(J)
    if not report.ok:
        raise InvalidInput("invalid matrix: " + "; ".join(report.violations), report.violations)
    return J


def _data(path: str) -> SpectralData:
    d = _read_json(path)
    if not isinstance(d, dict):
        raise UsageError("spectral data JSON must be an object")
    return SpectralData.from_dict(d)


# ---------------------------------------------------------------------------


def cmd_forward(args) -> int:
    tol = _tol(args)
    J = _matrix(args.matrix)
    p = perturbation_from(args.theta_sq, args.K, args.site)
    Jt = apply_perturbation(J, p)
    sigma = eigenvalues(J, tol)
    sigma_hat = eigenvalues(Jt, tol)
    D = SpectralData(sigma, sigma_hat, args.K, args.site, args.theta_sq)
    report = check_conditions(D, tol)
    _emit(
        {
            "sigma": list(sigma),
            "sigma_hat": list(sigma_hat),
            "K": args.K,
            "n": args.site,
            "theta_sq": args.theta_sq,
            "J_tilde": Jt.to_dict(),
            "classification": report.classification.to_dict() if report.classification else None,
        },
        args.out,
    )
    return 0


def cmd_check(args) -> int:
    tol = _tol(args)
    report = check_conditions(_data(args.data), tol)
    _emit(report.to_dict(), args.out)
    if not report.passed:
        print(f"{report.first_failed} violated", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_invert(args) -> int:
    tol = _tol(args)
    result = solve_inverse(_data(args.data), args.samples, args.seed, args.random_samples, tol)
    _emit(result.to_dict(), args.out)
    if not result.report.passed:
        print(f"{result.report.first_failed} violated", file=sys.stderr)
        return 1
    return 0


def cmd_convert(args) -> int:
    if args.to_jacobi:
        S = MassSpringSystem.from_dict(_read_json(args.to_jacobi))
        _emit(system_to_jacobi(S).to_dict(), args.out)
        return 0
    if args.gamma0 is None:
        raise UsageError("--to-system needs --gamma0")
    J = _matrix(args.to_system)
    try:
        S = jacobi_to_system(J, args.gamma0, _tol(args))
    except NotRealizable as exc:
        print(f"NotRealizable: {exc}", file=sys.stderr)
        return 1
    _emit(S.to_dict(), args.out)
    return 0


def cmd_green(args) -> int:
    tol = _tol(args)
    J = _matrix(args.matrix)
    p = perturbation_from(args.theta_sq, args.K, args.site)
    sigma = eigenvalues(J, tol)
    sigma_hat = eigenvalues(apply_perturbation(J, p), tol)
    rows = []
    worst = 0.0
    for lam in args.lam:
        row = {"lambda": lam}
        try:
            vals = [
                green_nn_poly(J, args.site, lam, tol),
                green_nn_spectral(J, args.site, lam, tol),
                green_nn_two_spectra(sigma, sigma_hat, args.theta_sq, args.K, lam, tol),
            ]
        except PoleAtPoint as exc:
            row["pole"] = str(exc)
            rows.append(row)
            continue
        scale = green_scale(J, args.site, lam, tol)
        dev = max(relative_deviation(x, y, scale) for i, x in enumerate(vals) for y in vals[i + 1:])
        worst = max(worst, dev)
        row.update(poly=vals[0], spectral=vals[1], two_spectra=vals[2], rel_deviation=dev)
        rows.append(row)
    agree = worst <= args.agree_tol
    _emit({"points": rows, "max_rel_deviation": worst, "agree": agree}, args.out)
    return 0 if agree else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobinv", description="Jacobi matrices under a one-site mass-spring perturbation: spectra of the pair and reconstruction from them.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    def perturbation_flags(p):
        p.add_argument("--site", type=int, required=True)
        p.add_argument("--theta-sq", dest="theta_sq", type=float, required=True)
        p.add_argument("--K", type=float, required=True)

    p = sub.add_parser("forward", parents=[common], help="spectra of J and its perturbation")
    p.add_argument("matrix")
    perturbation_flags(p)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("check", parents=[common], help="existence conditions for spectral data")
    p.add_argument("data")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invert", parents=[common], help="reconstruct all matrix pairs")
    p.add_argument("data")
    p.add_argument("--samples", type=int, default=3, help="grid points per manifold dimension")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-samples", dest="random_samples", type=int, default=0)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("convert", parents=[common], help="mass-spring chain <-> Jacobi matrix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-jacobi", dest="to_jacobi", metavar="SYSTEM")
    g.add_argument("--to-system", dest="to_system", metavar="MATRIX")
    p.add_argument("--gamma0", type=float, default=None)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("green", parents=[common], help="compare the three Green's function formulas")
    p.add_argument("matrix")
    perturbation_flags(p)
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", required=True)
    p.add_argument("--agree-tol", dest="agree_tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_green)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JacobiError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
