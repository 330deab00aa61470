"""The discrete Dirichlet problem and its solution map.

Given a source f and an extension g of the boundary data, the field
sought minimizes the energy

    J(u) = 0.5 * u . (A u) - load(f) . u

over all nodal fields agreeing with g on the boundary.  Writing
u = w + g with w vanishing on the boundary turns this into an
unconstrained quadratic problem on the interior degrees of freedom:
J(w + g) = E(w) + J(g) with

    E(w) = 0.5 * w . (A_int w) - lam . w,
    lam = (load(f) - A g) restricted to the interior,

so the minimizer is the representer of lam in the gradient inner
product and the whole pipeline reduces to one SPD solve.  The extension
enters only through its boundary values: changing g inside the domain
changes lam and the shift J(g) but not the reconstructed u, which is
what quotient_solve demonstrates by always extending with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from .assembly import (
    SparseSymMatrix,
    assemble_load,
    extend_by_zero,
    norm_grad,
    norm_l2,
    norm_w12,
    restrict_interior,
)
from .linsolve import SolverSettings, cg_solve
from .riesz import energy as reduced_energy

if TYPE_CHECKING:
    from .analysis import PoincareEstimate
    from .mesh import Mesh

ScalarField = Callable[[float, float], float]


@dataclass(frozen=True)
class ProblemData:
    """One problem instance: a source function and an extension field.

    f is kept as a function and committed to a load vector at solve
    time; g is already a nodal field whose boundary values are the
    Dirichlet data and whose interior values are one arbitrary
    extension of it.
    """

    f: ScalarField
    g: np.ndarray


@dataclass(frozen=True)
class SolveReport:
    """Everything a solve produced, kept for later verification."""

    u: np.ndarray  # full nodal field, boundary values included
    p: np.ndarray  # interior minimizer of the reduced energy
    lam: np.ndarray  # interior coefficients of the reduced functional
    g_field: np.ndarray  # extension the solve actually used
    iterations: int
    solver_residual: float
    energy_value: float  # objective J(u) at the solution
    reduced_energy: float  # E(p); equals -0.5 ||p||_A^2, never positive
    weak_residual: float
    norms: tuple[float, float, float]  # (l2, grad, full) norms of u
    poincare_a: float
    stability_lhs: float
    stability_rhs: float


def build_functional(
    mesh: "Mesh", A: SparseSymMatrix, data: ProblemData
) -> np.ndarray:
    """Interior coefficients of the reduced problem: (load - A g)_interior."""
    load = assemble_load(mesh, data.f)
    return restrict_interior(mesh, load - A.apply(np.asarray(data.g, float)))


def objective(A: SparseSymMatrix, load: np.ndarray, u: np.ndarray) -> float:
    """Dirichlet energy 0.5 u . (A u) - load . u of a full field."""
    return 0.5 * A.quad_form(u) - float(np.dot(load, u))


def _scaled_residual(
    mesh: "Mesh", A: SparseSymMatrix, load: np.ndarray, u: np.ndarray
) -> float:
    au = A.apply(u)
    r = restrict_interior(mesh, au - load)
    if len(r) == 0:
        return 0.0
    scale = max(
        1.0, float(np.max(np.abs(load))) + float(np.max(np.abs(au)))
    )
    return float(np.max(np.abs(r))) / scale


def weak_residual(
    mesh: "Mesh", A: SparseSymMatrix, u: np.ndarray, f: ScalarField
) -> float:
    """Scaled worst violation of the interior equilibrium equations.

    Returns max_i |(A u - load(f))_i| over interior i, divided by
    max(1, ||load(f)||_inf + ||A u||_inf).  Zero characterizes the
    critical point among fields with the same boundary values.
    """
    return _scaled_residual(mesh, A, assemble_load(mesh, f), u)


def solve(
    mesh: "Mesh",
    A: SparseSymMatrix,
    M: SparseSymMatrix,
    data: ProblemData,
    settings: SolverSettings = SolverSettings(),
    poincare: "PoincareEstimate | None" = None,
) -> SolveReport:
    """Solve the problem and report the diagnostics alongside the field.

    The report always carries the embedding constant and both sides of
    the continuity bound; pass a precomputed estimate to avoid the
    power iteration when solving many problems on one mesh.
    """
    from .analysis import check_stability, estimate_poincare

    g_field = np.asarray(data.g, dtype=float)
    if g_field.shape != (mesh.node_count,):
        raise ValueError(
            f"extension shape {g_field.shape} does not match node count "
            f"{mesh.node_count}"
        )
    load = assemble_load(mesh, data.f)
    lam = restrict_interior(mesh, load - A.apply(g_field))
    A_int = A.restrict(mesh.interior_indices)
    result = cg_solve(A_int, lam, settings)
    u = extend_by_zero(mesh, result.x) + g_field

    if poincare is None:
        poincare = estimate_poincare(mesh, A, M, settings)
    bounds = check_stability(mesh, A, M, u, data, poincare.a)

    return SolveReport(
        u=u,
        p=result.x,
        lam=lam,
        g_field=g_field.copy(),
        iterations=result.iterations,
        solver_residual=result.residual,
        energy_value=objective(A, load, u),
        reduced_energy=reduced_energy(A_int, lam, result.x),
        weak_residual=_scaled_residual(mesh, A, load, u),
        norms=(norm_l2(M, u), norm_grad(A, u), norm_w12(A, M, u)),
        poincare_a=poincare.a,
        stability_lhs=bounds.lhs,
        stability_rhs=bounds.rhs,
    )


def trace(mesh: "Mesh", u: np.ndarray) -> np.ndarray:
    """Boundary node values of a full field, in global index order."""
    u = np.asarray(u, dtype=float)
    if u.shape != (mesh.node_count,):
        raise ValueError(
            f"field shape {u.shape} does not match node count {mesh.node_count}"
        )
    return u[mesh.boundary_indices].copy()


def extend(mesh: "Mesh", boundary_values: np.ndarray) -> np.ndarray:
    """Full field carrying the given boundary values and zeros inside.

    The canonical right inverse of trace: trace(extend(b)) == b exactly,
    and extend picks one representative of each class of fields sharing
    boundary values.
    """
    boundary_values = np.asarray(boundary_values, dtype=float)
    nb = mesh.node_count - mesh.interior_count
    if boundary_values.shape != (nb,):
        raise ValueError(
            f"boundary data shape {boundary_values.shape} does not match "
            f"boundary node count {nb}"
        )
    out = np.zeros(mesh.node_count)
    out[mesh.boundary_indices] = boundary_values
    return out


def quotient_solve(
    mesh: "Mesh",
    A: SparseSymMatrix,
    M: SparseSymMatrix,
    f: ScalarField,
    boundary_values: np.ndarray,
    settings: SolverSettings = SolverSettings(),
    poincare: "PoincareEstimate | None" = None,
) -> SolveReport:
    """Solve from boundary values alone, with no extension supplied.

    Factors the solution map through trace: the zero-interior extension
    is used internally, and any other extension of the same values
    yields the same field up to solver tolerance, so the map is well
    defined on classes of fields that agree on the boundary.
    """
    data = ProblemData(f=f, g=extend(mesh, boundary_values))
    return solve(mesh, A, M, data, settings, poincare)


def verify_uniqueness(
    mesh: "Mesh", A: SparseSymMatrix, u1: np.ndarray, u2: np.ndarray
) -> float:
    """Gradient-norm distance between two claimed solutions.

    Both fields must carry the same boundary values (their difference
    must lie in the boundary-vanishing subspace, where the gradient
    bracket is definite); if each also satisfies the interior equations
    to solver tolerance, the return value is bounded by the combined
    solver error, witnessing uniqueness.
    """
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    b1 = trace(mesh, u1)
    b2 = trace(mesh, u2)
    gap = float(np.max(np.abs(b1 - b2))) if len(b1) else 0.0
    limit = 1e-12 * max(1.0, float(np.max(np.abs(b1))) if len(b1) else 0.0)
    if gap > limit:
        raise ValueError(
            f"fields carry different boundary values (max gap {gap:.3e}); "
            "they are not solutions of the same problem"
        )
    return norm_grad(A, u1 - u2)
