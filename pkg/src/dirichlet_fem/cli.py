"""Command line front end.

Four subcommands: solve writes the solved field as CSV plus a summary
report, verify runs the randomized identity suite and reports
PASS/FAIL per check, poincare prints the embedding constant of a
problem's mesh, and convergence reruns a problem on doubled grids
against a known exact field.

Exit codes: 0 success, 1 malformed problem data (file syntax, bad
expressions, bad geometry), 2 runtime failure (solver breakdown,
expression evaluation, failed verification), 3 file I/O errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import estimate_poincare
from .assembly import (
    SparseSymMatrix,
    assemble_mass,
    assemble_stiffness,
    norm_l2,
)
from .dirichlet import ProblemData, SolveReport, quotient_solve, solve
from .expr import EvalError, ParseError, as_function
from .linsolve import ConvergenceError
from .mesh import Mesh, build_rect_mesh, nodal_values
from .problems import (
    ProblemFormatError,
    ProblemSpec,
    load_problem,
    make_data,
    make_mesh,
    make_settings,
    write_field_csv,
)
from .verify import all_passed, run_checks


def _solve_spec(
    spec: ProblemSpec, mesh: Mesh, A: SparseSymMatrix, M: SparseSymMatrix
) -> SolveReport:
    settings = make_settings(spec)
    if spec.mode == "border":
        g = as_function(spec.g_expr)
        boundary_values = np.array(
            [g(float(x), float(y)) for x, y in mesh.nodes[mesh.boundary_indices]]
        )
        return quotient_solve(
            mesh, A, M, as_function(spec.f_expr), boundary_values, settings
        )
    return solve(mesh, A, M, make_data(spec, mesh), settings)


def _write_field(out_path: str | None, mesh: Mesh, u: np.ndarray) -> None:
    if out_path is None:
        write_field_csv(sys.stdout, mesh, u)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            write_field_csv(handle, mesh, u)


def _print_report(mesh: Mesh, report: SolveReport) -> None:
    norm_2, norm_grad, norm_w12 = report.norms
    lines = (
        f"nodes          = {mesh.node_count} "
        f"({mesh.interior_count} interior)",
        f"energy         = {report.energy_value:.17g}",
        f"weak_residual  = {report.weak_residual:.6e}",
        f"norm_l2        = {norm_2:.12g}",
        f"norm_grad      = {norm_grad:.12g}",
        f"norm_w12       = {norm_w12:.12g}",
        f"poincare_a     = {report.poincare_a:.12g}",
        f"stability_lhs  = {report.stability_lhs:.12g}",
        f"stability_rhs  = {report.stability_rhs:.12g}",
        f"cg_iterations  = {report.iterations}",
    )
    print("\n".join(lines), file=sys.stderr)


def _cmd_solve(args: argparse.Namespace) -> int:
    spec = load_problem(args.spec)
    mesh = make_mesh(spec)
    A = assemble_stiffness(mesh)
    M = assemble_mass(mesh)
    report = _solve_spec(spec, mesh, A, M)
    _print_report(mesh, report)
    _write_field(args.out, mesh, report.u)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    spec = load_problem(args.spec)
    mesh = make_mesh(spec)
    seed = spec.seed if args.seed is None else args.seed
    results = run_checks(
        mesh,
        as_function(spec.f_expr),
        as_function(spec.g_expr),
        make_settings(spec),
        seed,
    )
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return 0 if all_passed(results) else 2


def _cmd_poincare(args: argparse.Namespace) -> int:
    spec = load_problem(args.spec)
    mesh = make_mesh(spec)
    A = assemble_stiffness(mesh)
    M = assemble_mass(mesh)
    est = estimate_poincare(mesh, A, M, make_settings(spec))
    print(
        f"lambda_min={est.lambda_min:.12g} a={est.a:.12g} "
        f"iterations={est.iterations}"
    )
    return 0


def _cmd_convergence(args: argparse.Namespace) -> int:
    spec = load_problem(args.spec)
    if spec.u_exact_expr is None:
        raise ValueError("convergence study needs u_exact in the problem file")
    if args.levels < 1:
        raise ValueError(f"--levels must be positive, got {args.levels}")
    u_exact = as_function(spec.u_exact_expr)
    x0, y0, x1, y1 = spec.domain

    rows: list[tuple[int, int, float, float, float]] = []
    print("grid      h            max_error      order   l2_error       order")
    for level in range(args.levels):
        nx = spec.nx << level
        ny = spec.ny << level
        mesh = build_rect_mesh(x0, y0, x1, y1, nx, ny)
        A = assemble_stiffness(mesh)
        M = assemble_mass(mesh)
        report = _solve_spec(spec, mesh, A, M)
        diff = report.u - nodal_values(mesh, u_exact)
        max_error = float(np.max(np.abs(diff)))
        l2_error = norm_l2(M, diff)
        h = max((x1 - x0) / nx, (y1 - y0) / ny)

        def order(e_prev: float, e_curr: float, h_prev: float) -> str:
            if e_prev <= 0.0 or e_curr <= 0.0 or h_prev == h:
                return "-"
            return f"{np.log(e_prev / e_curr) / np.log(h_prev / h):.3f}"

        if rows:
            _, _, h_prev, max_prev, l2_prev = rows[-1]
            max_order = order(max_prev, max_error, h_prev)
            l2_order = order(l2_prev, l2_error, h_prev)
        else:
            max_order = l2_order = "-"
        rows.append((nx, ny, h, max_error, l2_error))
        print(
            f"{nx}x{ny}".ljust(10)
            + f"{h:<13.6g}{max_error:<15.6e}{max_order:<8}"
            + f"{l2_error:<15.6e}{l2_order}"
        )

    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("nx,ny,h,max_error,l2_error\n")
            for nx, ny, h, max_error, l2_error in rows:
                handle.write(
                    f"{nx},{ny},{h:.17g},{max_error:.17g},{l2_error:.17g}\n"
                )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirichlet-fem",
        description="Energy-minimizing solver for the Dirichlet problem "
        "on triangulated rectangles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem and write the field as CSV")
    p.add_argument("--spec", required=True, help="problem file")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("verify", help="run the randomized verification suite")
    p.add_argument("--spec", required=True, help="problem file")
    p.add_argument(
        "--seed", type=int, default=None, help="override the file's seed"
    )
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("poincare", help="estimate the embedding constant")
    p.add_argument("--spec", required=True, help="problem file")
    p.set_defaults(handler=_cmd_poincare)

    p = sub.add_parser(
        "convergence", help="solve on doubled grids against u_exact"
    )
    p.add_argument("--spec", required=True, help="problem file")
    p.add_argument(
        "--levels",
        type=int,
        default=3,
        help="number of grids, doubling from the file's (default 3)",
    )
    p.add_argument("--out", default=None, help="CSV path for the table")
    p.set_defaults(handler=_cmd_convergence)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ProblemFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EvalError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
