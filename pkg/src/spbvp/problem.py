"""Problem definitions for the semilinear reaction-diffusion boundary value problem.

Everything in this package revolves around the two-point problem

    eps^2 y''(x) = f(x, y(x)),   x in (0, 1),   y(0) = y(1) = 0,

with a small positive perturbation parameter eps and a smooth right-hand side
whose y-derivative is bounded below and above by positive constants,

    0 < m <= df/dy(x, y) <= gamma.

The lower bound m guarantees a unique solution with boundary layers of width
O(eps) at both ends; the upper bound gamma is the fitting constant used by the
difference scheme and the global representation (beta = sqrt(gamma)/eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Problem",
    "ValidationReport",
    "builtin_problem",
    "builtin_ids",
    "validate_problem",
    "exact_eval",
]

#: Tolerance for |exact(0)| and |exact(1)| when a reference solution is attached.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Problem:
    """One instance of the boundary value problem.

    ``f`` and ``f_y`` must accept numpy arrays (or scalars) for both arguments
    and evaluate elementwise; all built-in problems do.  ``exact`` is optional
    and, when present, must satisfy the homogeneous boundary conditions.
    """

    name: str
    f: Callable
    f_y: Callable
    m: float
    gamma: float
    epsilon: float
    exact: Optional[Callable] = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.m <= 0.0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.gamma < self.m:
            raise ValueError(
                f"gamma must dominate f_y, which requires gamma >= m; "
                f"got gamma = {self.gamma} < m = {self.m}"
            )
        if self.exact is not None:
            for endpoint in (0.0, 1.0):
                value = float(np.asarray(self.exact(endpoint)))
                if not abs(value) <= BOUNDARY_TOL:
                    raise ValueError(
                        f"exact solution must vanish at x = {endpoint}; "
                        f"got {value!r}"
                    )

    @property
    def beta(self) -> float:
        """Fitting frequency sqrt(gamma)/eps used by the scheme and the kernels."""
        return math.sqrt(self.gamma) / self.epsilon

    def with_gamma(self, gamma: float) -> "Problem":
        """Copy of this problem with a different fitting constant gamma."""
        return replace(self, gamma=gamma)


def _const_like(x, y, value: float):
    shape = np.broadcast_shapes(np.shape(x), np.shape(y))
    if shape == ():
        return value
    return np.full(shape, value)


def _make_reference_problem(epsilon: float) -> Problem:
    """Layer test problem with a known closed-form solution.

    f(x, y) = y + (1 - 2x)^2 - 8 eps^2, so f_y = 1 and m = gamma = 1.  The
    solution is the sum of two boundary layers and a parabola; it is written
    with non-positive exponents only, so it evaluates without overflow for
    eps all the way down to 2^-30 and beyond.
    """
    eps = float(epsilon)
    shift = 8.0 * eps * eps
    denom = 1.0 + math.exp(-1.0 / eps)

    def f(x, y):
        x = np.asarray(x, dtype=float)
        one_minus_2x = 1.0 - 2.0 * x
        return y + one_minus_2x * one_minus_2x - shift

    def f_y(x, y):
        return _const_like(x, y, 1.0)

    def exact(x):
        x = np.asarray(x, dtype=float)
        layers = np.exp(-x / eps) + np.exp(-(1.0 - x) / eps)
        return layers / denom + 4.0 * x * (1.0 - x) - 1.0

    return Problem(
        name="paper-test",
        f=f,
        f_y=f_y,
        m=1.0,
        gamma=1.0,
        epsilon=eps,
        exact=exact,
    )


def _make_linear_problem(epsilon: float, gamma: float = 1.0) -> Problem:
    """Linear problem f(x, y) = gamma * y with exact solution identically zero.

    The scheme is exact (to rounding) for this right-hand side, which makes it
    the reference case for fitted-exactness checks.
    """
    g = float(gamma)

    def f(x, y):
        return g * np.asarray(y, dtype=float)

    def f_y(x, y):
        return _const_like(x, y, g)

    def exact(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return Problem(
        name="linear-gamma",
        f=f,
        f_y=f_y,
        m=g,
        gamma=g,
        epsilon=float(epsilon),
        exact=exact,
    )


_BUILTINS = {
    "paper-test": _make_reference_problem,
    "linear-gamma": _make_linear_problem,
}


def builtin_ids() -> list[str]:
    """Identifiers accepted by :func:`builtin_problem` (and the CLI)."""
    return sorted(_BUILTINS)


def builtin_problem(problem_id: str, epsilon: float) -> Problem:
    """Construct a registered problem for the given perturbation parameter."""
    try:
        factory = _BUILTINS[problem_id]
    except KeyError:
        raise ValueError(
            f"unknown problem id {problem_id!r}; available: {', '.join(builtin_ids())}"
        ) from None
    return factory(epsilon)


@dataclass
class ValidationReport:
    """Result of sampling-based validation of a :class:`Problem`.

    Sampling a finite grid is a heuristic check, not a proof: a problem can
    pass here and still violate the bounds between sample points.  The first
    message always says so.
    """

    min_fy_sampled: float
    gamma_ok: bool
    boundary_ok: bool
    messages: list = field(default_factory=list)


def validate_problem(
    problem: Problem,
    x_points: int = 101,
    y_points: int = 101,
    y_range: tuple = (-2.0, 2.0),
) -> ValidationReport:
    """Sample f_y on a grid over [0, 1] x y_range and check the stated bounds.

    Checks, per sample: m <= f_y <= gamma.  Also re-checks the boundary values
    of the exact solution when one is attached.
    """
    if x_points < 2 or y_points < 2:
        raise ValueError("validation grid needs at least 2 points per axis")
    lo, hi = float(y_range[0]), float(y_range[1])
    if not lo < hi:
        raise ValueError(f"empty y_range {y_range!r}")

    xs = np.linspace(0.0, 1.0, x_points)
    ys = np.linspace(lo, hi, y_points)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    fy = np.broadcast_to(
        np.asarray(problem.f_y(grid_x, grid_y), dtype=float), grid_x.shape
    )
    min_fy = float(fy.min())
    max_fy = float(fy.max())

    messages = [
        "sampled check on a finite grid "
        f"({x_points} x {y_points} over [0,1] x [{lo:g},{hi:g}]); "
        "this is a heuristic, not a proof of the bounds"
    ]
    lower_ok = min_fy >= problem.m
    if not lower_ok:
        messages.append(
            "lower bound df/dy >= m > 0 fails on the sample grid: "
            f"min sampled df/dy = {min_fy:.6g} < m = {problem.m:.6g}"
        )
    upper_ok = max_fy <= problem.gamma
    if not upper_ok:
        messages.append(
            "fitting constant does not dominate df/dy on the sample grid: "
            f"max sampled df/dy = {max_fy:.6g} > gamma = {problem.gamma:.6g}"
        )

    boundary_ok = True
    if problem.exact is not None:
        for endpoint in (0.0, 1.0):
            value = float(np.asarray(problem.exact(endpoint)))
            if not abs(value) <= BOUNDARY_TOL:
                boundary_ok = False
                messages.append(
                    f"exact({endpoint:g}) = {value!r} violates the boundary condition"
                )

    return ValidationReport(
        min_fy_sampled=min_fy,
        gamma_ok=lower_ok and upper_ok,
        boundary_ok=boundary_ok,
        messages=messages,
    )


def exact_eval(problem: Problem, x):
    """Evaluate the attached reference solution at x (scalar or array in [0, 1])."""
    if problem.exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution attached")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("exact_eval: x must lie in [0, 1]")
    value = problem.exact(arr)
    if np.ndim(x) == 0:
        return float(np.asarray(value))
    return np.asarray(value, dtype=float)
