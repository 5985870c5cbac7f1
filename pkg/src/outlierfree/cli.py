"""Command-line front end.

Exit codes: 0 success, 1 usage or invalid configuration, 2 a tolerance check
failed, 3 a structured solve hit a singular matrix.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import OutlierFreeError, SingularMatrixError
from .formats import matrix_market_text, to_csv, to_json
from .iga import (Kind, SpaceSpec, assemble_closed_form, assemble_quadrature,
                  threshold)
from .spectrum import (TensorSpec, laplace_eigs_1d, outlier_report, tensor_eigs,
                       tensor_residual_check)
from .symbols import SymbolFn

EXIT_USAGE, EXIT_TOLERANCE, EXIT_SINGULAR = 1, 2, 3

# defaults applied after an optional --config file has filled in missing values
_COMMON = {"kind": "dirichlet", "format": "csv"}
DEFAULTS = {
    "symbol": {"r": 0, "samples": 9},
    "assemble": {"r": 0, "method": "closed-form"},
    "verify-structure": {},
    "eigs": {},
    "spectrum": {},
    "tensor": {"samples": 5, "seed": 0},
    "solve": {"r": 0},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(sp, n_list=False, kind=True, r=False):
    sp.add_argument("--p", type=int, nargs="+" if n_list else None, help="spline degree")
    sp.add_argument("--n", type=int, nargs="+" if n_list else None, help="space dimension")
    if kind:
        sp.add_argument("--kind", choices=[k.value for k in Kind])
    if r:
        sp.add_argument("--r", type=int, help="derivative order (0 mass, 1 stiffness)")
    sp.add_argument("--format", choices=["csv", "json", "matrixmarket"])
    sp.add_argument("--output", help="write to this file instead of stdout")
    sp.add_argument("--config", help="JSON file with default values for the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="outlierfree",
                     description="Outlier-free spline discretizations of the 1D/dD Laplacian.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("symbol", help="tabulate g_p^r on [0, pi]")
    sp.add_argument("--p", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--samples", type=int, help="number of equispaced samples (default 9)")
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--output")
    sp.add_argument("--config")

    sp = sub.add_parser("assemble", help="mass or stiffness matrix")
    _add_common(sp, r=True)
    sp.add_argument("--method", choices=["quadrature", "closed-form"])

    sp = sub.add_parser("verify-structure", help="compare closed form with quadrature")
    _add_common(sp, r=True)
    sp.add_argument("--tol", type=float, help="tolerance relative to the scale (default 1e-12)")

    sp = sub.add_parser("eigs", help="closed-form Laplace eigenvalues")
    _add_common(sp)
    sp.add_argument("--vectors", action="store_true", help="also dump eigenvectors")
    sp.add_argument("--sorted", action="store_true", help="order rows by eigenvalue")

    sp = sub.add_parser("spectrum", help="outlier report against the continuous spectrum")
    _add_common(sp)
    sp.add_argument("--sorted", action="store_true", help="order rows by eigenvalue")
    sp.add_argument("--tol", type=float, help="slack on the bound check (default 1e-12)")

    sp = sub.add_parser("tensor", help="eigenvalues on [0,1]^d (Dirichlet)")
    _add_common(sp, n_list=True, kind=False)
    sp.add_argument("--samples", type=int, help="multi-indices used for the residual check")
    sp.add_argument("--seed", type=int, help="seed for picking residual samples")
    sp.add_argument("--tol", type=float, help="residual tolerance (default 1e-9)")
    sp.add_argument("--sorted", action="store_true", help="order rows by eigenvalue")

    sp = sub.add_parser("solve", help="structured solve X x = b")
    _add_common(sp, r=True)
    sp.add_argument("--rhs", help="text file with the right-hand side (default: all ones)")
    return parser


def _resolve(args) -> argparse.Namespace:
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        for key, val in cfg.items():
            key = key.replace("-", "_")
            if key in ("command", "config"):
                continue
            if not hasattr(args, key):
                raise UsageError(f"unknown config key {key!r} for command {args.command}")
            if getattr(args, key) in (None, False):
                setattr(args, key, val)
    for key, val in {**_COMMON, **DEFAULTS[args.command]}.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, val)
    for key in ("p", "n"):
        if hasattr(args, key) and getattr(args, key) is None:
            raise UsageError(f"--{key} is required")
    return args


def _spec(args) -> SpaceSpec:
    return SpaceSpec(int(args.p), int(args.n), Kind.parse(args.kind))


def _table(args, columns, rows, meta=None) -> str:
    if args.format == "json":
        obj = dict(meta or {})
        obj["rows"] = rows
        return to_json(obj)
    if args.format == "matrixmarket":
        raise UsageError("matrixmarket output is only available for matrices")
    return to_csv(columns, rows)


def cmd_symbol(args):
    p, r = int(args.p), int(args.r)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    theta = np.linspace(0.0, np.pi, args.samples) if args.samples > 1 else np.array([0.0])
    vals = SymbolFn.spline(p, r)(theta)
    rows = [{"theta": t, "value": v} for t, v in zip(theta, vals)]
    return _table(args, ["theta", "value"], rows, {"p": p, "r": r}), 0


def cmd_assemble(args):
    spec = _spec(args)
    r = int(args.r)
    if args.method == "quadrature":
        a = assemble_quadrature(spec, r)
    else:
        a = assemble_closed_form(spec, r).dense()
    meta = {"p": spec.p, "n": spec.n, "kind": spec.kind.value, "r": r, "method": args.method}
    if args.format == "matrixmarket":
        comment = " ".join(f"{k}={v}" for k, v in meta.items())
        return matrix_market_text(a, comment), 0
    rows = [{"i": i + 1, "j": j + 1, "value": a[i, j]}
            for i in range(spec.n) for j in range(spec.n) if a[i, j] != 0]
    return _table(args, ["i", "j", "value"], rows, meta), 0


def cmd_verify_structure(args):
    spec = _spec(args)
    tol = 1e-12 if args.tol is None else float(args.tol)
    need, formula = threshold(spec)
    if spec.n < need:
        raise UsageError(
            f"n={spec.n} is below the structure threshold for {spec.kind.value} p={spec.p}: "
            f"n >= {formula} = {need} (quadrature assembly still works, but the matrix is "
            "not guaranteed to be structured)")
    rows = []
    for r in range(0, min(spec.p, 2) + 1) if args.r is None else [int(args.r)]:
        cf = assemble_closed_form(spec, r)
        diff = float(np.abs(cf.dense() - assemble_quadrature(spec, r)).max())
        scale = float(cf.scale)
        rows.append({"r": r, "structure": cf.label, "scale": scale, "max_abs_diff": diff,
                     "tolerance": tol * scale, "ok": diff <= tol * scale})
    meta = {"p": spec.p, "n": spec.n, "kind": spec.kind.value, "threshold": need}
    code = 0 if all(row["ok"] for row in rows) else EXIT_TOLERANCE
    cols = ["r", "structure", "scale", "max_abs_diff", "tolerance", "ok"]
    return _table(args, cols, rows, meta), code


def cmd_eigs(args):
    spec = _spec(args)
    eig = laplace_eigs_1d(spec)
    order = np.argsort(eig.eigenvalues, kind="stable") if args.sorted else range(spec.n)
    rows = []
    for k in order:
        row = {"j": k + 1, "theta": eig.theta[k], "lambda": eig.eigenvalues[k]}
        if args.vectors:
            vec = eig.eigenvector(k + 1)
            if args.format == "json":
                row["vector"] = list(vec)
            else:
                row.update({f"v{i + 1}": x for i, x in enumerate(vec)})
        rows.append(row)
    cols = ["j", "theta", "lambda"]
    if args.vectors and args.format != "json":
        cols += [f"v{i + 1}" for i in range(spec.n)]
    meta = {"p": spec.p, "n": spec.n, "kind": spec.kind.value, "algebra": str(spec.algebra)}
    return _table(args, cols, rows, meta), 0


def cmd_spectrum(args):
    spec = _spec(args)
    rep = outlier_report(spec, slack=1e-12 if args.tol is None else float(args.tol))
    cols = ["j", "theta", "lambda_discrete", "lambda_exact", "rel_error", "bound_rhs", "ok"]
    meta = {"p": spec.p, "n": spec.n, "kind": spec.kind.value,
            "max_rel_error": rep.max_rel_error, "all_ok": rep.all_ok}
    meta.update(rep.notes)
    return _table(args, cols, rep.rows(sort=args.sorted), meta), 0 if rep.all_ok else EXIT_TOLERANCE


def cmd_tensor(args):
    ps, ns = list(args.p), list(args.n)
    if len(ps) == 1 and len(ns) > 1:
        ps = ps * len(ns)
    ts = TensorSpec.from_lists(ps, ns)
    tol = 1e-9 if args.tol is None else float(args.tol)
    eig = tensor_eigs(ts)
    idx = list(eig.multi_indices())
    if len(idx) > 10 ** 6:
        raise UsageError(f"{len(idx)} eigenvalues exceed the output limit of 10^6")
    rows = []
    for jj in idx:
        row = {f"j{k + 1}": j for k, j in enumerate(jj)}
        row.update({"lambda_mass": eig.mass(jj), "lambda_laplace": eig.laplace(jj),
                    "lambda_stiffness": eig.stiffness(jj)})
        rows.append(row)
    if args.sorted:
        rows.sort(key=lambda row: row["lambda_laplace"])
    cols = [f"j{k + 1}" for k in range(ts.d)] + ["lambda_mass", "lambda_laplace", "lambda_stiffness"]
    meta = {"p": ps, "n": ns}
    code = 0
    if ts.size <= 4096 and args.samples > 0:
        rng = np.random.default_rng(int(args.seed))
        picks = rng.choice(len(idx), size=min(int(args.samples), len(idx)), replace=False)
        samples = [idx[k] for k in sorted(picks)]
        res = tensor_residual_check(ts, samples)
        ok = res <= tol
        meta.update({"residual": res, "residual_tolerance": tol, "residual_ok": ok})
        print(f"residual max ||K u - lambda M u|| / ||K||_F = {res:.3e} over {len(samples)} "
              f"samples ({'ok' if ok else 'FAILED'}, tol {tol:g})", file=sys.stderr)
        code = 0 if ok else EXIT_TOLERANCE
    else:
        print("residual check skipped (problem too large for dense matrices)", file=sys.stderr)
    return _table(args, cols, rows, meta), code


def cmd_solve(args):
    spec = _spec(args)
    m = assemble_closed_form(spec, int(args.r))
    if args.rhs:
        try:
            b = np.loadtxt(args.rhs, dtype=float, ndmin=1)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read right-hand side {args.rhs}: {exc}") from None
    else:
        b = np.ones(spec.n)
    x = m.solve(b)
    res = float(np.linalg.norm(m.matvec(x) - b) / np.linalg.norm(b)) if np.any(b) else 0.0
    rows = [{"i": i + 1, "x": v} for i, v in enumerate(x)]
    meta = {"p": spec.p, "n": spec.n, "kind": spec.kind.value, "r": int(args.r),
            "relative_residual": res}
    return _table(args, ["i", "x"], rows, meta), 0


COMMANDS = {
    "symbol": cmd_symbol,
    "assemble": cmd_assemble,
    "verify-structure": cmd_verify_structure,
    "eigs": cmd_eigs,
    "spectrum": cmd_spectrum,
    "tensor": cmd_tensor,
    "solve": cmd_solve,
}


def _thread_limit():
    raw = os.environ.get("OFI_THREADS")
    if raw is None or raw == "":
        return None
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"OFI_THREADS must be an integer, got {raw!r}") from None
    if val < 1:
        raise UsageError("OFI_THREADS must be positive")
    return val


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _resolve(args)
        limit = _thread_limit()
        if limit is not None:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=limit):
                text, code = COMMANDS[args.command](args)
        else:
            text, code = COMMANDS[args.command](args)
    except SingularMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (UsageError, OutlierFreeError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
