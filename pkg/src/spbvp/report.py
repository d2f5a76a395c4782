"""Delimited-output writers and table formatting for experiment results.

All CSV files use the shortest decimal representation that round-trips to
the same float, so identical runs produce byte-identical output.  The
pretty table mirrors the benchmark layout: one row per N, one (E_N, Ord)
column pair per epsilon.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .analysis import ConvergenceRow, sample_points
from .globalsol import GlobalSolution, eval_global
from .mesh import Mesh
from .problem import Problem
from .scheme import DiscreteSolution

PathLike = Union[str, Path]


def format_value(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def format_epsilon(epsilon: float) -> str:
    """Render epsilon as ``2^-k`` when it is an exact power of two."""
    k = math.log2(epsilon)
    rounded = round(k)
    if 2.0**rounded == epsilon:
        return f"2^{rounded}"
    return format_value(epsilon)


def _write_lines(path: PathLike, lines: Sequence[str]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return target


def write_mesh_csv(mesh: Mesh, path: PathLike) -> Path:
    """Write ``index,x,h`` rows; ``h`` is the step to the next node (blank on the last row)."""
    lines = ["index,x,h"]
    for i, x in enumerate(mesh.nodes):
        step = format_value(mesh.h[i]) if i < mesh.N else ""
        lines.append(f"{i},{format_value(x)},{step}")
    return _write_lines(path, lines)


def write_nodal_csv(
    solution: DiscreteSolution, path: PathLike, problem: Optional[Problem] = None
) -> Path:
    """Write ``i,x_i,ybar_i`` rows, plus exact values and errors when available."""
    mesh = solution.mesh
    with_exact = problem is not None and problem.exact is not None
    if with_exact:
        exact = np.asarray(problem.exact(mesh.nodes), dtype=float)
        lines = ["i,x_i,ybar_i,y_exact_i,abs_err_i"]
        for i, x in enumerate(mesh.nodes):
            err = abs(exact[i] - solution.ybar[i])
            lines.append(
                f"{i},{format_value(x)},{format_value(solution.ybar[i])},"
                f"{format_value(exact[i])},{format_value(err)}"
            )
    else:
        lines = ["i,x_i,ybar_i"]
        for i, x in enumerate(mesh.nodes):
            lines.append(f"{i},{format_value(x)},{format_value(solution.ybar[i])}")
    return _write_lines(path, lines)


def write_samples_csv(
    solution: GlobalSolution,
    path: PathLike,
    samples_per_interval: int = 32,
) -> Path:
    """Write dense samples of the global solution as plot-ready CSV.

    The first line is a ``#`` comment naming the mode, epsilon, and N; the
    exact solution and pointwise error columns appear when available.
    """
    mesh = solution.mesh
    problem = solution.problem
    xs = np.unique(sample_points(mesh, samples_per_interval).ravel())
    values = eval_global(solution, xs)
    header = (
        f"# mode={solution.mode} epsilon={format_value(problem.epsilon)} N={mesh.N}"
    )
    with_exact = problem.exact is not None
    if with_exact:
        exact = np.asarray(problem.exact(xs), dtype=float)
        lines = [header, "x,Y(x),y_exact,abs_err"]
        for x, v, e in zip(xs, values, exact):
            lines.append(
                f"{format_value(x)},{format_value(v)},{format_value(e)},"
                f"{format_value(abs(e - v))}"
            )
    else:
        lines = [header, "x,Y(x)"]
        for x, v in zip(xs, values):
            lines.append(f"{format_value(x)},{format_value(v)}")
    return _write_lines(path, lines)


_REPORT_HEADER = (
    "epsilon,N,E_N,Ord,layer_left,interior,layer_right,global_max,"
    "mode,converged,iterations"
)


def write_report_csv(rows: Sequence[ConvergenceRow], path: PathLike) -> Path:
    """Write convergence-study rows in the report CSV format."""
    lines = [_REPORT_HEADER]
    for row in rows:
        ord_field = "" if row.ord is None else format_value(row.ord)
        if row.region is not None:
            region_fields = [
                format_value(row.region.layer_left),
                format_value(row.region.interior),
                format_value(row.region.layer_right),
                format_value(row.region.global_max),
            ]
        else:
            region_fields = ["", "", "", ""]
        lines.append(
            ",".join(
                [
                    format_value(row.epsilon),
                    str(row.N),
                    format_value(row.E_N),
                    ord_field,
                    *region_fields,
                    row.mode,
                    str(row.converged).lower(),
                    str(row.iterations),
                ]
            )
        )
    return _write_lines(path, lines)


def format_report_table(rows: Sequence[ConvergenceRow]) -> str:
    """Pretty table: N rows, one (E_N, Ord) column pair per epsilon group."""
    if not rows:
        return "(empty report)"
    epsilons = sorted({row.epsilon for row in rows}, reverse=True)
    n_values = sorted({row.N for row in rows})
    by_cell = {(row.epsilon, row.N): row for row in rows}

    e_width = 10  # %.4e
    o_width = 5
    group_width = e_width + 2 + o_width
    n_width = max(len("N"), *(len(str(n)) for n in n_values))

    header_groups = []
    column_heads = []
    for eps in epsilons:
        label = f"eps={format_epsilon(eps)}"
        header_groups.append(label.center(group_width))
        column_heads.append(f"{'E_N':>{e_width}}  {'Ord':>{o_width}}")
    lines = [
        f"{'':>{n_width}}  " + "   ".join(header_groups),
        f"{'N':>{n_width}}  " + "   ".join(column_heads),
    ]
    for n in n_values:
        cells = []
        for eps in epsilons:
            row = by_cell.get((eps, n))
            if row is None:
                cells.append(f"{'-':>{e_width}}  {'-':>{o_width}}")
                continue
            err = f"{row.E_N:.4e}"
            ord_text = "-" if row.ord is None else f"{row.ord:.2f}"
            if not row.converged:
                ord_text = "!"
            cells.append(f"{err:>{e_width}}  {ord_text:>{o_width}}")
        lines.append(f"{n:>{n_width}}  " + "   ".join(cells))
    return "\n".join(lines)
