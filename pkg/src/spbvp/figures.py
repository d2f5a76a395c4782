"""Matplotlib renderers producing figure files next to the delimited output.

Everything draws through the Agg backend so rendering works headless; each
function writes one PNG and returns its path.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import ConvergenceRow, sample_points
from .globalsol import GlobalSolution, eval_global
from .report import format_epsilon

PathLike = Union[str, Path]

_DPI = 150
_RC = {
    "figure.figsize": (7.0, 4.5),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


def _finish(fig, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(target, dpi=_DPI)
    plt.close(fig)
    return target


def render_solution_figure(
    solution: GlobalSolution,
    path: PathLike,
    samples_per_interval: int = 32,
) -> Path:
    """Plot the global approximate solution, overlaying the exact one when known."""
    mesh = solution.mesh
    problem = solution.problem
    xs = np.unique(sample_points(mesh, samples_per_interval).ravel())
    values = eval_global(solution, xs)
    label = f"{solution.mode} approximation (N={mesh.N})"
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        if problem.exact is not None:
            ax.plot(xs, problem.exact(xs), color="black", lw=1.0, label="exact")
        ax.plot(xs, values, color="tab:red", lw=1.0, ls="--", label=label)
        ax.plot(mesh.nodes, solution.ybar, ".", color="tab:red", ms=3, alpha=0.6)
        if not mesh.degenerate:
            for edge in (mesh.lam, 1.0 - mesh.lam):
                ax.axvline(edge, color="tab:blue", lw=0.7, alpha=0.5)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(
            f"epsilon={format_epsilon(problem.epsilon)}, N={mesh.N}, "
            f"mode={solution.mode}"
        )
        ax.legend(loc="best")
        return _finish(fig, path)


def render_error_figure(
    solution: GlobalSolution,
    path: PathLike,
    samples_per_interval: int = 32,
) -> Path:
    """Plot the pointwise absolute error on a log scale with layer edges marked."""
    mesh = solution.mesh
    problem = solution.problem
    if problem.exact is None:
        raise ValueError("error figure requires a problem with an exact solution")
    xs = np.unique(sample_points(mesh, samples_per_interval).ravel())
    err = np.abs(np.asarray(problem.exact(xs), dtype=float) - eval_global(solution, xs))
    floor = 1e-18
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.semilogy(xs, np.maximum(err, floor), color="tab:red", lw=0.9)
        if not mesh.degenerate:
            for edge in (mesh.lam, 1.0 - mesh.lam):
                ax.axvline(edge, color="tab:blue", lw=0.7, alpha=0.5)
        ax.set_xlabel("x")
        ax.set_ylabel("|y(x) - Y(x)|")
        ax.set_title(
            f"pointwise error, epsilon={format_epsilon(problem.epsilon)}, "
            f"N={mesh.N}, mode={solution.mode}"
        )
        return _finish(fig, path)


def render_convergence_figure(
    rows: Sequence[ConvergenceRow],
    path: PathLike,
    reference_slope: Optional[float] = 2.0,
) -> Path:
    """Log-log plot of E_N against N, one line per epsilon, with a rate guide."""
    if not rows:
        raise ValueError("no rows to plot")
    epsilons = sorted({row.epsilon for row in rows}, reverse=True)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for eps in epsilons:
            series = sorted(
                (row for row in rows if row.epsilon == eps), key=lambda r: r.N
            )
            ns = [row.N for row in series]
            errs = [row.E_N for row in series]
            ax.loglog(ns, errs, "o-", ms=3.5, lw=1.0, label=f"eps={format_epsilon(eps)}")
        if reference_slope is not None:
            ns = sorted({row.N for row in rows})
            anchor = max(row.E_N for row in rows if row.N == ns[0])
            guide = [
                anchor
                * (math.log(n) / math.log(ns[0])) ** 2
                * (ns[0] / n) ** reference_slope
                for n in ns
            ]
            ax.loglog(
                ns, guide, ":", color="gray", lw=1.2, label="(ln N)^2 / N^2 guide"
            )
        ax.set_xlabel("N")
        ax.set_ylabel("max nodal error")
        ax.set_title("convergence study")
        ax.legend(loc="best", fontsize=8)
        return _finish(fig, path)
