"""Energy-minimizing P1 finite elements for the Dirichlet problem.

The package solves -div(grad u) = f with u = g on the boundary of a
rectangle by minimizing the Dirichlet energy over a triangulated grid,
and ships the machinery to verify the identities that make the method
work: the completed-square minimization lemma, the discrete embedding
constant, continuity of the solution map, and its independence from
how boundary data is extended inward.
"""

from .analysis import (
    FunctionalBound,
    PoincareEstimate,
    StabilityBounds,
    check_functional_bound,
    check_stability,
    estimate_poincare,
)
from .assembly import (
    SparseSymMatrix,
    assemble_load,
    assemble_mass,
    assemble_stiffness,
    extend_by_zero,
    norm_grad,
    norm_l2,
    norm_w12,
    restrict_interior,
)
from .dirichlet import (
    ProblemData,
    SolveReport,
    build_functional,
    extend,
    objective,
    quotient_solve,
    solve,
    trace,
    verify_uniqueness,
    weak_residual,
)
from .expr import EvalError, ParseError, as_function, evaluate, parse, serialize
from .linsolve import CGResult, ConvergenceError, SolverSettings, cg_solve
from .mesh import Mesh, build_rect_mesh, eval_p1, nodal_values, p1_interpolant
from .problems import (
    ProblemFormatError,
    ProblemSpec,
    load_problem,
    make_data,
    make_mesh,
    make_settings,
    parse_problem,
    read_field_csv,
    write_field_csv,
)
from .riesz import (
    apply_dual,
    check_square_identity,
    dual_norm,
    energy,
    riesz_represent,
)
from .verify import CheckResult, all_passed, run_checks

__version__ = "0.1.0"

__all__ = [
    "CGResult",
    "CheckResult",
    "ConvergenceError",
    "EvalError",
    "FunctionalBound",
    "Mesh",
    "ParseError",
    "PoincareEstimate",
    "ProblemData",
    "ProblemFormatError",
    "ProblemSpec",
    "SolveReport",
    "SolverSettings",
    "SparseSymMatrix",
    "StabilityBounds",
    "all_passed",
    "apply_dual",
    "as_function",
    "assemble_load",
    "assemble_mass",
    "assemble_stiffness",
    "build_functional",
    "build_rect_mesh",
    "cg_solve",
    "check_functional_bound",
    "check_square_identity",
    "check_stability",
    "dual_norm",
    "energy",
    "estimate_poincare",
    "eval_p1",
    "evaluate",
    "extend",
    "extend_by_zero",
    "load_problem",
    "make_data",
    "make_mesh",
    "make_settings",
    "nodal_values",
    "norm_grad",
    "norm_l2",
    "norm_w12",
    "objective",
    "p1_interpolant",
    "parse",
    "parse_problem",
    "quotient_solve",
    "read_field_csv",
    "restrict_interior",
    "riesz_represent",
    "run_checks",
    "serialize",
    "solve",
    "trace",
    "verify_uniqueness",
    "weak_residual",
    "write_field_csv",
]
