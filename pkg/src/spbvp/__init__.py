"""Fitted exponential difference solver for singularly perturbed
reaction-diffusion two-point boundary value problems.

The package solves eps^2 y'' = f(x, y) on [0, 1] with y(0) = y(1) = 0 on a
layer-adapted mesh, extends the nodal solution to a global one through the
Green's function of the frozen operator, and ships the experiment harness
(error tables, convergence orders, stability checks) plus a CLI that writes
delimited data and rendered figures.
"""

from .problem import (
    Problem,
    ValidationReport,
    builtin_ids,
    builtin_problem,
    exact_eval,
    validate_problem,
)
from .mesh import (
    Mesh,
    MeshDiagnostics,
    MeshParams,
    generate_mesh,
    generating_function,
    mesh_diagnostics,
    transition_point,
)
from .scheme import (
    ASYMPTOTIC_THRESHOLD,
    DiscreteSolution,
    IntervalCoefficients,
    NewtonOptions,
    SingularSystemError,
    TridiagonalSystem,
    interval_coefficients,
    coefficient_arrays,
    jacobian,
    max_norm,
    newton_solve,
    residual,
    solve_tridiagonal,
)
from .globalsol import (
    GlobalSolution,
    GreenKernel,
    basis_eval,
    build_global,
    eval_global,
    green_integral,
)
from .analysis import (
    ConvergenceRow,
    RegionErrors,
    StabilityReport,
    classical_order,
    convergence_order,
    convergence_study,
    nodal_error,
    region_errors,
    sample_points,
    stability_experiment,
)
from .report import (
    format_epsilon,
    format_report_table,
    format_value,
    write_mesh_csv,
    write_nodal_csv,
    write_report_csv,
    write_samples_csv,
)
from .figures import (
    render_convergence_figure,
    render_error_figure,
    render_solution_figure,
)
from .checks import SuiteResult, run_check_suites

__version__ = "0.1.0"

__all__ = [
    "Problem",
    "ValidationReport",
    "builtin_ids",
    "builtin_problem",
    "exact_eval",
    "validate_problem",
    "Mesh",
    "MeshDiagnostics",
    "MeshParams",
    "generate_mesh",
    "generating_function",
    "mesh_diagnostics",
    "transition_point",
    "ASYMPTOTIC_THRESHOLD",
    "DiscreteSolution",
    "IntervalCoefficients",
    "NewtonOptions",
    "SingularSystemError",
    "TridiagonalSystem",
    "interval_coefficients",
    "coefficient_arrays",
    "jacobian",
    "max_norm",
    "newton_solve",
    "residual",
    "solve_tridiagonal",
    "GlobalSolution",
    "GreenKernel",
    "basis_eval",
    "build_global",
    "eval_global",
    "green_integral",
    "ConvergenceRow",
    "RegionErrors",
    "StabilityReport",
    "classical_order",
    "convergence_order",
    "convergence_study",
    "nodal_error",
    "region_errors",
    "sample_points",
    "stability_experiment",
    "format_epsilon",
    "format_report_table",
    "format_value",
    "write_mesh_csv",
    "write_nodal_csv",
    "write_report_csv",
    "write_samples_csv",
    "render_convergence_figure",
    "render_error_figure",
    "render_solution_figure",
    "SuiteResult",
    "run_check_suites",
    "__version__",
]
