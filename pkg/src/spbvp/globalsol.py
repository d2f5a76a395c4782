"""Global solution: extend the nodal values to all of [0, 1].

On each interval the nodal solution is extended by the solution of the frozen
linear operator eps^2 u'' = gamma u + psibar with the nodal values as boundary
data, where psi(x, y) = f(x, y) - gamma y is the slow part of the right-hand
side and psibar is its value at the interval midpoint.  Writing
t = beta (x - x_i), b = beta h_i, the two interpolation basis functions are

    uI(x)  = sinh(beta (x_{i+1} - x)) / sinh(b)
    uII(x) = sinh(beta (x - x_i)) / sinh(b)

and the particular part is psibar times the integral of the interval Green's
function, which collapses to -(1 - uI - uII)/gamma.  All three quantities are
evaluated in exponentially factored form (non-positive exponents only), so
they stay finite for beta*h up to 1e8 and beyond.

Two assembly modes exist: "plain" uses the exponential extension everywhere,
which is cheap but only first-order accurate away from the layers; "repaired"
keeps the exponential pieces on the two layer quarters of the mesh and uses
straight-line interpolation on the interior half, recovering (almost) second
order globally.  Repair requires a non-degenerate mesh.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .mesh import Mesh
from .problem import Problem
from .scheme import DiscreteSolution

__all__ = [
    "GreenKernel",
    "GlobalSolution",
    "basis_eval",
    "green_integral",
    "build_global",
    "eval_global",
]

_MODES = ("plain", "repaired")
_PSI_POINTS = ("midpoint", "left")


@dataclass(frozen=True)
class GreenKernel:
    """Green's function data of the frozen operator on one interval."""

    beta: float
    interval: Tuple[float, float]
    gamma: float

    def __post_init__(self):
        left, right = self.interval
        if not left < right:
            raise ValueError(f"empty interval {self.interval!r}")
        if self.beta <= 0.0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.gamma <= 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def _basis_arrays(beta, left, right, x):
    """uI, uII in exponentially factored form; all exponents <= 0."""
    t = beta * (x - left)
    s = beta * (right - x)
    b = beta * (right - left)
    den = np.expm1(-2.0 * b)
    u_one = np.exp(-t) * np.expm1(-2.0 * s) / den
    u_two = np.exp(-s) * np.expm1(-2.0 * t) / den
    return u_one, u_two


def _green_integral_arrays(beta, left, right, x, gamma):
    """Integral of the Green's function over its interval, factored form.

    Equals -(1 - uI - uII)/gamma but is evaluated as a product of three
    non-negative factors, which keeps the sign bound -1/gamma <= value <= 0
    exact even when uI + uII rounds slightly above 1.
    """
    t = beta * (x - left)
    s = beta * (right - x)
    b = beta * (right - left)
    return -(np.expm1(-t) * np.expm1(-s)) / (gamma * (1.0 + np.exp(-b)))


def basis_eval(kernel: GreenKernel, x: float) -> Tuple[float, float]:
    """Interpolation basis (uI, uII) at a point of the kernel's interval.

    uI decays away from the left endpoint, uII away from the right one:
    uI(x_i) = 1, uI(x_{i+1}) = 0 and symmetrically for uII.
    """
    left, right = kernel.interval
    if not left <= x <= right:
        raise ValueError(f"x = {x} outside interval [{left}, {right}]")
    u_one, u_two = _basis_arrays(kernel.beta, left, right, float(x))
    return float(u_one), float(u_two)


def green_integral(kernel: GreenKernel, x: float) -> float:
    """Integral over s of the interval Green's function at observation point x.

    Always lies in [-1/gamma, 0]; vanishes at both interval endpoints.
    """
    left, right = kernel.interval
    if not left <= x <= right:
        raise ValueError(f"x = {x} outside interval [{left}, {right}]")
    return float(
        _green_integral_arrays(kernel.beta, left, right, float(x), kernel.gamma)
    )


@dataclass
class GlobalSolution:
    """Piecewise global extension of a nodal solution."""

    mesh: Mesh
    ybar: np.ndarray
    psibar: np.ndarray
    mode: str
    problem: Problem

    def __call__(self, x):
        return eval_global(self, x)

    def is_linear_piece(self, index: int) -> bool:
        """True when interval ``index`` uses straight-line interpolation."""
        if self.mode != "repaired":
            return False
        quarter = self.mesh.N // 4
        return quarter <= index < 3 * quarter


def build_global(
    solution: DiscreteSolution,
    problem: Problem,
    mode: str = "plain",
    psi_point: str = "midpoint",
) -> GlobalSolution:
    """Assemble the global extension of a nodal solution.

    ``psi_point`` selects where the slow term psi = f - gamma y is frozen on
    each interval: at the midpoint with averaged nodal values (default), or at
    the left endpoint ("left", kept for experiments).
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if psi_point not in _PSI_POINTS:
        raise ValueError(
            f"psi_point must be one of {_PSI_POINTS}, got {psi_point!r}"
        )
    mesh = solution.mesh
    if mode == "repaired" and mesh.degenerate:
        raise ValueError(
            "repaired mode needs a non-degenerate mesh; "
            "the layer quarters of a uniform mesh are not layer regions"
        )
    ybar = np.asarray(solution.ybar, dtype=float)
    gamma = problem.gamma
    if psi_point == "midpoint":
        points = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
        values = 0.5 * (ybar[:-1] + ybar[1:])
    else:
        points = mesh.nodes[:-1]
        values = ybar[:-1]
    psibar = np.asarray(problem.f(points, values), dtype=float) - gamma * values
    return GlobalSolution(
        mesh=mesh, ybar=ybar, psibar=psibar, mode=mode, problem=problem
    )


def eval_global(solution: GlobalSolution, x):
    """Evaluate the global solution at scalar or array x in [0, 1].

    Points that coincide with a mesh node are assigned to the interval on
    their left (the pieces agree at the nodes, so the choice only fixes which
    branch computes the value).
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("eval_global: x must lie in [0, 1]")
    mesh = solution.mesh
    nodes = mesh.nodes
    index = np.searchsorted(nodes, arr, side="left") - 1
    index = np.clip(index, 0, mesh.N - 1)

    left = nodes[index]
    right = nodes[index + 1]
    ybar = solution.ybar
    beta = solution.problem.beta
    gamma = solution.problem.gamma

    u_one, u_two = _basis_arrays(beta, left, right, arr)
    green = _green_integral_arrays(beta, left, right, arr, gamma)
    values = ybar[index] * u_one + ybar[index + 1] * u_two + solution.psibar[index] * green

    if solution.mode == "repaired":
        quarter = mesh.N // 4
        linear = (index >= quarter) & (index < 3 * quarter)
        if np.any(linear):
            slope_t = (arr - left) / (right - left)
            straight = ybar[index] + (ybar[index + 1] - ybar[index]) * slope_t
            values = np.where(linear, straight, values)

    if np.ndim(x) == 0:
        return float(values)
    return values
