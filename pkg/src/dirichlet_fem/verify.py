"""Randomized checks of the identities and bounds the solver rests on.

Every check here is either an algebraic identity (true to roundoff no
matter how inexact the inner solves are) or an inequality that is a
theorem of the discrete brackets.  To keep the inequalities theorems
rather than approximations, the source term is replaced by its nodal
interpolant before checking: the edge-midpoint load rule integrates
piecewise-linear integrands exactly, so for interpolated sources the
load functional and the mass bracket agree and the bounds must hold
with no discretization slack.  Boundary data needs no such treatment,
since it enters the discrete problem only through nodal values.

Checks that compare independently computed fields re-solve at a tight
tolerance instead of the problem's own, so a loose problem tolerance
cannot mask a genuine defect.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import check_functional_bound, check_stability, estimate_poincare
from .assembly import (
    assemble_load,
    assemble_mass,
    assemble_stiffness,
    extend_by_zero,
    norm_grad,
    norm_l2,
)
from .dirichlet import (
    ProblemData,
    objective,
    quotient_solve,
    solve,
    trace,
    verify_uniqueness,
)
from .linsolve import SolverSettings
from .mesh import Mesh, nodal_values, p1_interpolant
from .riesz import check_square_identity, dual_norm, energy


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def run_checks(
    mesh: Mesh,
    f: Callable[[float, float], float],
    g: Callable[[float, float], float],
    settings: SolverSettings = SolverSettings(),
    seed: int = 42,
) -> list[CheckResult]:
    """Run the full verification suite on one problem."""
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    tight = SolverSettings(
        rel_tolerance=min(settings.rel_tolerance, 1e-12),
        max_iterations=settings.max_iterations,
    )

    f_vals = nodal_values(mesh, f)
    f_h = p1_interpolant(mesh, f_vals)
    g_field = nodal_values(mesh, g)
    data = ProblemData(f=f_h, g=g_field)

    A = assemble_stiffness(mesh)
    M = assemble_mass(mesh)
    load = assemble_load(mesh, f_h)
    A_int = A.restrict(mesh.interior_indices)
    n = mesh.interior_count

    est = estimate_poincare(mesh, A, M, tight)
    report = solve(mesh, A, M, data, tight, poincare=est)

    # Normalize the reduced problem so the minimizer has unit energy
    # norm; identities are then checked against absolute tolerances.
    p_norm = norm_grad(A_int, report.p)
    if p_norm > 0.0:
        lam1 = report.lam / p_norm
        p1 = report.p / p_norm
    else:
        lam1 = report.lam
        p1 = report.p

    directions = rng.standard_normal((8, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]

    defect = max(
        check_square_identity(A_int, lam1, p1 + d, p=p1) for d in directions
    )
    results.append(
        CheckResult(
            "square-identity",
            defect <= 1e-10,
            f"defect={defect:.3e} tol=1e-10",
        )
    )

    e_p = energy(A_int, lam1, p1)
    excess = min(
        energy(A_int, lam1, p1 + scale * d) - e_p
        for d in directions
        for scale in (1.0, 1e-3)
    )
    results.append(
        CheckResult(
            "strict-minimum",
            excess > 0.0,
            f"smallest energy excess={excess:.3e}",
        )
    )

    obj_u = objective(A, load, report.u)
    obj_g = objective(A, load, g_field)
    drop = abs(obj_u - obj_g - report.reduced_energy)
    scale = max(
        1.0,
        A.abs_quad_form(report.u)
        + A.abs_quad_form(g_field)
        + float(np.abs(load) @ np.abs(report.u))
        + float(np.abs(load) @ np.abs(g_field)),
    )
    results.append(
        CheckResult(
            "energy-reduction",
            drop <= 1e-11 * scale,
            f"defect={drop:.3e} tol={1e-11 * scale:.3e}",
        )
    )

    lam_norm = dual_norm(A_int, report.lam, tight)
    worst_overshoot = -np.inf
    for d in directions:
        bound = lam_norm * norm_grad(A_int, d) * (1.0 + 1e-8) + 1e-13
        worst_overshoot = max(
            worst_overshoot, abs(float(np.dot(report.lam, d))) - bound
        )
    results.append(
        CheckResult(
            "dual-bound",
            worst_overshoot <= 0.0,
            f"worst overshoot={worst_overshoot:.3e}",
        )
    )

    loose = solve(mesh, A, M, data, settings, poincare=est)
    distance = verify_uniqueness(mesh, A, loose.u, report.u)
    uniq_tol = 1e-9 * (1.0 + norm_grad(A, report.u))
    results.append(
        CheckResult(
            "uniqueness",
            distance <= uniq_tol,
            f"grad distance={distance:.3e} tol={uniq_tol:.3e}",
        )
    )

    M_int = M.restrict(mesh.interior_indices)
    worst_ratio = 0.0
    for v in list(directions) + [est.eigenvector]:
        denom = norm_grad(A_int, v)
        if denom > 0.0:
            worst_ratio = max(worst_ratio, norm_l2(M_int, v) / denom)
    results.append(
        CheckResult(
            "poincare-bound",
            worst_ratio <= est.a * (1.0 + 1e-8),
            f"worst ratio={worst_ratio:.12g} a={est.a:.12g}",
        )
    )

    fb = check_functional_bound(mesh, A, M, data, est.a, tight)
    results.append(
        CheckResult(
            "functional-bound",
            fb.lhs <= fb.rhs * (1.0 + 1e-8),
            f"lhs={fb.lhs:.6g} rhs={fb.rhs:.6g}",
        )
    )

    sb = check_stability(mesh, A, M, report.u, data, est.a)
    ok = sb.riesz_lhs <= sb.riesz_rhs * (1.0 + 1e-8) and sb.lhs <= sb.rhs * (
        1.0 + 1e-8
    )
    results.append(
        CheckResult(
            "stability-bound",
            ok,
            f"lhs={sb.lhs:.6g} rhs={sb.rhs:.6g} "
            f"riesz_lhs={sb.riesz_lhs:.6g} riesz_rhs={sb.riesz_rhs:.6g}",
        )
    )

    # Linearity of the solution map in both data slots.
    f2_vals = rng.uniform(-1.0, 1.0, mesh.node_count)
    g2_vals = rng.uniform(-1.0, 1.0, mesh.node_count)
    alpha, beta = rng.uniform(0.5, 2.0, 2)
    combo = ProblemData(
        f=p1_interpolant(mesh, alpha * f_vals + beta * f2_vals),
        g=alpha * g_field + beta * g2_vals,
    )
    u_b = solve(
        mesh, A, M, ProblemData(f=p1_interpolant(mesh, f2_vals), g=g2_vals),
        tight, poincare=est,
    ).u
    u_combo = solve(mesh, A, M, combo, tight, poincare=est).u
    lin_err = float(np.max(np.abs(u_combo - (alpha * report.u + beta * u_b))))
    lin_scale = max(1.0, float(np.max(np.abs(u_combo))))
    results.append(
        CheckResult(
            "linearity",
            lin_err <= 1e-8 * lin_scale,
            f"max deviation={lin_err:.3e} tol={1e-8 * lin_scale:.3e}",
        )
    )

    # Only boundary values of the extension may influence the solution.
    u_border = quotient_solve(
        mesh, A, M, f_h, trace(mesh, g_field), tight, poincare=est
    ).u
    bump = extend_by_zero(mesh, rng.standard_normal(n))
    u_bumped = solve(
        mesh, A, M, ProblemData(f=f_h, g=g_field + bump), tight, poincare=est
    ).u
    inv_err = max(
        float(np.max(np.abs(u_border - report.u))),
        float(np.max(np.abs(u_bumped - report.u))),
    )
    inv_scale = max(1.0, float(np.max(np.abs(report.u))))
    results.append(
        CheckResult(
            "extension-invariance",
            inv_err <= 1e-8 * inv_scale,
            f"max deviation={inv_err:.3e} tol={1e-8 * inv_scale:.3e}",
        )
    )

    wr_tol = max(1e-8, 10.0 * tight.rel_tolerance * np.sqrt(max(n, 1)))
    results.append(
        CheckResult(
            "weak-residual",
            report.weak_residual <= wr_tol,
            f"residual={report.weak_residual:.3e} tol={wr_tol:.3e}",
        )
    )

    A2 = assemble_stiffness(mesh)
    M2 = assemble_mass(mesh)
    load2 = assemble_load(mesh, f_h)
    identical = (
        np.array_equal(A.rows, A2.rows)
        and np.array_equal(A.cols, A2.cols)
        and np.array_equal(A.vals, A2.vals)
        and np.array_equal(M.vals, M2.vals)
        and np.array_equal(load, load2)
    )
    results.append(
        CheckResult(
            "reassembly-determinism",
            identical,
            "bit-identical" if identical else "reassembly differs",
        )
    )

    return results


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
