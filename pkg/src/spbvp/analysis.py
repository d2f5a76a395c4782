"""Error measurement, convergence studies, and the stability experiment.

Nodal errors are measured in the maximum norm against the attached reference
solution.  Observed convergence orders follow the convention for almost
second-order methods on layer-adapted meshes: with N = 2^k,

    Ord = (ln E_N - ln E_2N) / ln(2k / (k + 1)),

which evaluates to exactly 2 for an error behaving like ln^2 N / N^2.  The
classical order ln(E_N / E_2N) / ln 2 is reported alongside where the expected
behaviour is a clean power of N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .globalsol import GlobalSolution, build_global, eval_global
from .mesh import Mesh, MeshParams, generate_mesh
from .problem import Problem, exact_eval
from .scheme import (
    DiscreteSolution,
    NewtonOptions,
    max_norm,
    newton_solve,
    residual,
)

__all__ = [
    "RegionErrors",
    "ConvergenceRow",
    "StabilityReport",
    "nodal_error",
    "convergence_order",
    "classical_order",
    "sample_points",
    "region_errors",
    "stability_experiment",
    "convergence_study",
]


def nodal_error(solution: DiscreteSolution, problem: Problem) -> float:
    """Maximum-norm nodal error against the attached reference solution."""
    exact = exact_eval(problem, solution.mesh.nodes)
    return max_norm(exact - solution.ybar)


def convergence_order(error_n: float, error_2n: float, k: int) -> float:
    """Observed order between N = 2^k and 2N under the ln^2 N / N^2 convention."""
    if error_n <= 0.0 or error_2n <= 0.0:
        raise ValueError("errors must be positive to estimate an order")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return (math.log(error_n) - math.log(error_2n)) / math.log(2.0 * k / (k + 1.0))


def classical_order(error_n: float, error_2n: float) -> float:
    """Observed order ln(E_N / E_2N) / ln 2 for clean power-of-N behaviour."""
    if error_n <= 0.0 or error_2n <= 0.0:
        raise ValueError("errors must be positive to estimate an order")
    return math.log(error_n / error_2n) / math.log(2.0)


def sample_points(mesh: Mesh, samples_per_interval: int = 32) -> np.ndarray:
    """Dense evaluation grid: both endpoints of every interval plus equispaced
    interior points, as one array of shape (N, samples_per_interval + 2)."""
    if samples_per_interval < 0:
        raise ValueError("samples_per_interval must be non-negative")
    count = samples_per_interval + 2
    fractions = np.linspace(0.0, 1.0, count)
    left = mesh.nodes[:-1, None]
    right = mesh.nodes[1:, None]
    return left + (right - left) * fractions[None, :]


@dataclass(frozen=True)
class RegionErrors:
    """Maximum errors of a global solution over the three mesh regions.

    On a degenerate (uniform) mesh there are no layer regions; the layer
    fields are NaN, ``global_max`` equals ``interior``, and ``degenerate`` is
    set.
    """

    layer_left: float
    interior: float
    layer_right: float
    global_max: float
    degenerate: bool = False


def region_errors(
    solution: GlobalSolution,
    problem: Problem,
    samples_per_interval: int = 32,
) -> RegionErrors:
    """Densely sampled errors split at the transition points lam and 1 - lam."""
    mesh = solution.mesh
    points = sample_points(mesh, samples_per_interval)
    approx = eval_global(solution, points.ravel()).reshape(points.shape)
    exact = exact_eval(problem, points.ravel()).reshape(points.shape)
    per_interval = np.abs(exact - approx).max(axis=1)
    if mesh.degenerate:
        interior = float(per_interval.max())
        return RegionErrors(
            layer_left=math.nan,
            interior=interior,
            layer_right=math.nan,
            global_max=interior,
            degenerate=True,
        )
    quarter = mesh.N // 4
    layer_left = float(per_interval[:quarter].max())
    interior = float(per_interval[quarter:3 * quarter].max())
    layer_right = float(per_interval[3 * quarter:].max())
    return RegionErrors(
        layer_left=layer_left,
        interior=interior,
        layer_right=layer_right,
        global_max=max(layer_left, interior, layer_right),
        degenerate=False,
    )


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the randomized stability-inequality experiment."""

    trials: int
    violations: int
    min_ratio: float
    skipped: int


def stability_experiment(
    problem: Problem,
    mesh: Mesh,
    trials: int = 1000,
    seed: int = 0,
    amplitude: float = 2.0,
) -> StabilityReport:
    """Test m * ||w - v||_inf <= ||F w - F v||_inf on random vector pairs.

    Vectors are uniform on [-amplitude, amplitude] with zero boundary entries
    (the operator's boundary rows are identically zero, so the bound only
    applies to vectors agreeing at the boundary).  Identical pairs are
    skipped.  ``min_ratio`` is the smallest observed value of
    ||Fw - Fv|| / (m ||w - v||); the inequality demands it stay >= 1.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    n_nodes = mesh.N + 1
    violations = 0
    skipped = 0
    min_ratio = math.inf
    for _ in range(trials):
        w = rng.uniform(-amplitude, amplitude, n_nodes)
        v = rng.uniform(-amplitude, amplitude, n_nodes)
        w[0] = w[-1] = 0.0
        v[0] = v[-1] = 0.0
        diff = max_norm(w - v)
        if diff == 0.0:
            skipped += 1
            continue
        operator_gap = max_norm(
            residual(problem, mesh, w) - residual(problem, mesh, v)
        )
        ratio = operator_gap / (problem.m * diff)
        min_ratio = min(min_ratio, ratio)
        if ratio < 1.0:
            violations += 1
    return StabilityReport(
        trials=trials - skipped,
        violations=violations,
        min_ratio=min_ratio,
        skipped=skipped,
    )


@dataclass
class ConvergenceRow:
    """One (epsilon, N) cell of a convergence study."""

    epsilon: float
    N: int
    E_N: float
    ord: Optional[float] = None
    region: Optional[RegionErrors] = None
    mode: str = "plain"
    converged: bool = True
    iterations: int = 0


def _check_doubling(values: Sequence[int]) -> None:
    for smaller, larger in zip(values, values[1:]):
        if larger != 2 * smaller:
            raise ValueError(
                f"N values must double: {larger} does not follow {smaller}"
            )


def convergence_study(
    problem_factory: Callable[[float], Problem],
    epsilons: Sequence[float],
    n_values: Sequence[int],
    mode: str = "plain",
    newton: Optional[NewtonOptions] = None,
    samples_per_interval: int = 32,
    sigma: float = 2.0,
    q: float = 0.25,
    compute_regions: bool = True,
) -> list:
    """Run the solver over an (epsilon, N) grid and collect errors and orders.

    ``problem_factory`` maps epsilon to a Problem.  N values must be a
    doubling sequence so that consecutive rows yield order estimates; the
    order is attached to the row with the smaller N and only when both solves
    converged.  For degenerate meshes in "repaired" mode the global extension
    falls back to plain pieces (recorded in the row's ``mode``).
    """
    _check_doubling(list(n_values))
    rows = []
    for epsilon in epsilons:
        problem = problem_factory(epsilon)
        per_eps = []
        for n in n_values:
            params = MeshParams(N=n, epsilon=epsilon, m=problem.m, sigma=sigma, q=q)
            mesh = generate_mesh(params)
            solution = newton_solve(problem, mesh, newton)
            row = ConvergenceRow(
                epsilon=epsilon,
                N=n,
                E_N=nodal_error(solution, problem),
                converged=solution.converged,
                iterations=solution.iterations,
                mode=mode,
            )
            if compute_regions and problem.exact is not None:
                effective_mode = "plain" if mesh.degenerate else mode
                row.mode = effective_mode
                extension = build_global(solution, problem, mode=effective_mode)
                row.region = region_errors(
                    extension, problem, samples_per_interval
                )
            per_eps.append(row)
        for current, following in zip(per_eps, per_eps[1:]):
            if current.converged and following.converged:
                current.ord = convergence_order(
                    current.E_N, following.E_N, int(math.log2(current.N))
                )
        rows.extend(per_eps)
    return rows
