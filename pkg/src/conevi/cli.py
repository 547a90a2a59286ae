"""Command-line front end.

Subcommands: solve (exact | bertsekas | galerkin | ipm), bounds, gen,
certify, and bench. Human output goes to stdout, diagnostics to stderr;
exit codes are 0 (success), 1 (solver did not converge or refused the
problem), and 2 (usage or parse errors).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .basis import EmptyBasis, orthonormalize
from .bench import bench_ipm
from .cones import orthant
from .fileio import ProblemFormatError, parse_basis, parse_problem, write_basis, write_problem
from .generate import GenerationError, generate_instance
from .operators import NotStronglyMonotone
from .projective import IpmBreakdown, IpmConfig, build_projective, solve_ipm
from .solvers import (
    IntersectionProjectionFailed,
    SolveConfig,
    bound_report,
    solve_bertsekas,
    solve_exact,
    solve_galerkin,
)

__all__ = ["main", "build_parser"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, np.ndarray):
        return " ".join(format(float(v), ".17g") for v in value)
    return str(value)


def _emit(pairs, fmt: str) -> None:
    sep = "\t" if fmt == "kv" else ": "
    for key, value in pairs:
        print(f"{key}{sep}{_fmt(value)}")


def _load_problem(path: str):
    return parse_problem(Path(path).read_text())


def _load_basis(path: str, drop_tol: float = 1e-10):
    return orthonormalize(parse_basis(Path(path).read_text()), drop_tol)


def _solve_config(args) -> SolveConfig:
    kwargs = {"trace": bool(getattr(args, "trace", None))}
    if args.tol is not None:
        kwargs["tol"] = args.tol
    if args.max_iter is not None:
        kwargs["max_iter"] = args.max_iter
    if getattr(args, "alpha", None) is not None:
        kwargs["alpha_override"] = args.alpha
    return SolveConfig(**kwargs)


def _cmd_solve(args) -> int:
    op, cone = _load_problem(args.problem)
    basis = _load_basis(args.basis) if args.basis else None
    if args.method in ("bertsekas", "galerkin") and basis is None:
        print(f"solve --method {args.method} requires --basis", file=sys.stderr)
        return 2

    if args.method == "ipm":
        if basis is None:
            basis = orthonormalize(np.eye(cone.dim))
        if args.alpha is not None:
            alpha = args.alpha
        else:
            try:
                alpha = op.contraction().alpha
            except NotStronglyMonotone:
                print("operator is not strongly monotone; pass --alpha explicitly",
                      file=sys.stderr)
                return 1
        ipm_cfg = IpmConfig(
            mu_tol=args.mu_tol if args.mu_tol is not None else 1e-10,
            feas_tol=args.feas_tol if args.feas_tol is not None else 1e-10,
            max_iter=args.max_iter if args.max_iter is not None else 200,
        )
        report = solve_ipm(build_projective(op, basis, alpha), cone, ipm_cfg)
        pairs = [
            ("method", "ipm"),
            ("converged", report.converged),
            ("iters", report.iterations),
            ("mu", report.mu),
            ("feas", report.feasibility),
            ("residual", report.final_step_norm),
            ("x", report.x),
        ]
        _emit(pairs, args.format)
        return 0 if report.converged else 1

    cfg = _solve_config(args)
    if args.method == "exact":
        report = solve_exact(op, cone, cfg)
    elif args.method == "bertsekas":
        report = solve_bertsekas(op, cone, basis, cfg)
    else:
        report = solve_galerkin(op, cone, basis, cfg)

    pairs = [
        ("method", args.method),
        ("converged", report.converged),
        ("iters", report.iterations),
        ("residual", report.final_step_norm),
        ("gamma", report.gamma),
    ]
    if report.z is not None:
        pairs.append(("z", report.z))
    if report.certificate is not None:
        pairs.append(("cert_nullspace", report.certificate.null_space_violation))
        pairs.append(("cert_normalcone", report.certificate.normal_cone_ok))
    pairs.append(("x", report.x))
    _emit(pairs, args.format)

    if args.trace:
        rows = report.trace_rows()
        Path(args.trace).write_text(
            "".join(f"{t}\t{_fmt(step)}\t{_fmt(dist)}\n" for t, step, dist in rows))
    return 0 if report.converged else 1


def _cmd_bounds(args) -> int:
    op, cone = _load_problem(args.problem)
    basis = _load_basis(args.basis)
    cfg = SolveConfig(tol=args.tol) if args.tol is not None else SolveConfig()
    comp = bound_report(op, cone, basis, cfg, slack=args.slack)

    pairs = [
        ("gamma", comp.gamma),
        ("iters", comp.exact_iterations),
        ("bound_new", comp.bound_new),
        ("err_new", comp.err_new_x),
        ("err_new_z", comp.err_new_z),
        ("verdict_new", "OK" if comp.new_ok else "VIOLATED"),
    ]
    if comp.bertsekas_skipped:
        pairs.append(("verdict_bertsekas", "SKIPPED"))
    else:
        pairs.extend([
            ("bound_bertsekas", comp.bound_bertsekas),
            ("err_bertsekas", comp.err_bertsekas),
            ("verdict_bertsekas", "OK" if comp.bertsekas_ok else "VIOLATED"),
        ])
    _emit(pairs, args.format)
    solved = comp.exact_converged and comp.galerkin_converged and (
        comp.bertsekas_skipped or comp.bertsekas_converged)
    return 0 if solved else 1


def _cmd_certify(args) -> int:
    op, cone = _load_problem(args.problem)
    basis = _load_basis(args.basis)
    kwargs = {}
    if args.tol is not None:
        kwargs["tol"] = args.tol
    if args.cert_tol is not None:
        kwargs["cert_tol"] = args.cert_tol
    report = solve_galerkin(op, cone, basis, SolveConfig(**kwargs))
    cert = report.certificate
    _emit([
        ("converged", report.converged),
        ("iters", report.iterations),
        ("gamma", report.gamma),
        ("cert_nullspace", cert.null_space_violation),
        ("cert_normalcone", cert.normal_cone_ok),
        ("cert_gap", cert.complementarity_gap),
        ("cert_valid", cert.valid),
    ], args.format)
    return 0 if report.converged else 1


def _cmd_gen(args) -> int:
    op, basis = generate_instance(args.n, args.k, args.beta, args.L, args.seed)
    Path(args.out).write_text(write_problem(op, orthant(args.n)))
    if args.basis_out:
        Path(args.basis_out).write_text(write_basis(basis.raw))
    print(f"wrote {args.out}" + (f" and {args.basis_out}" if args.basis_out else ""))
    return 0


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes:
        print("--sizes needs at least one integer", file=sys.stderr)
        return 2
    results = bench_ipm(sizes, args.k, args.repeats, seed=args.seed)
    for res in results:
        _emit([
            (f"bench_{res.n}_iters", res.iterations),
            (f"bench_{res.n}_per_iter_s", res.per_iter_median_s),
            (f"bench_{res.n}_total_s", res.total_median_s),
            (f"bench_{res.n}_converged", res.converged),
        ], args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conevi",
        description="Solvers for monotone variational inequalities and "
                    "complementarity problems over separable cones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "kv"), default="text",
                       help="human-readable or key<TAB>value output")

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("--method", required=True,
                         choices=("exact", "bertsekas", "galerkin", "ipm"))
    p_solve.add_argument("--problem", required=True)
    p_solve.add_argument("--basis", help="basis file (required for bertsekas/galerkin)")
    p_solve.add_argument("--tol", type=float)
    p_solve.add_argument("--max-iter", type=int, dest="max_iter")
    p_solve.add_argument("--alpha", type=float, help="override the derived step size")
    p_solve.add_argument("--mu-tol", type=float, dest="mu_tol")
    p_solve.add_argument("--feas-tol", type=float, dest="feas_tol")
    p_solve.add_argument("--trace", help="write (t, step_norm, distance_to_final) rows here")
    add_format(p_solve)
    p_solve.set_defaults(func=_cmd_solve)

    p_bounds = sub.add_parser("bounds", help="compare both error bounds to actual errors")
    p_bounds.add_argument("--problem", required=True)
    p_bounds.add_argument("--basis", required=True)
    p_bounds.add_argument("--tol", type=float)
    p_bounds.add_argument("--slack", type=float, default=1e-8)
    add_format(p_bounds)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_cert = sub.add_parser("certify", help="solve with the two-projection method and certify")
    p_cert.add_argument("--problem", required=True)
    p_cert.add_argument("--basis", required=True)
    p_cert.add_argument("--tol", type=float)
    p_cert.add_argument("--cert-tol", type=float, dest="cert_tol")
    add_format(p_cert)
    p_cert.set_defaults(func=_cmd_certify)

    p_gen = sub.add_parser("gen", help="generate a seeded random instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--beta", type=float, required=True)
    p_gen.add_argument("--L", type=float, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--basis-out", dest="basis_out")
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="time IPM iterations across problem sizes")
    p_bench.add_argument("--sizes", required=True, help="comma-separated n values")
    p_bench.add_argument("--k", type=int, default=10)
    p_bench.add_argument("--repeats", type=int, default=5)
    p_bench.add_argument("--seed", type=int, default=0)
    add_format(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/diagnostics
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ProblemFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except (NotStronglyMonotone, IntersectionProjectionFailed, IpmBreakdown,
            GenerationError, EmptyBasis) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
