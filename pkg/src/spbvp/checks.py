"""Self-check suites: mesh invariants, coefficient identities, stability, exactness.

These are the property suites behind the CLI ``check`` command.  Each suite
returns a :class:`SuiteResult` with a one-line detail string; the command
exits nonzero when any suite fails.

The coefficient suite accepts a ``sabotage`` hook that swaps in a naive
evaluation of the interval coefficients (raw ``1/sinh`` and ``1/tanh`` with
the difference formed by subtraction, and no large-argument branch).  The
naive form loses relative accuracy to cancellation for small beta*h and
overflows for large beta*h, demonstrating why the stable identity forms
are required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .analysis import stability_experiment
from .globalsol import build_global, eval_global
from .mesh import MeshParams, generate_mesh, mesh_diagnostics
from .problem import builtin_problem
from .scheme import interval_coefficients, newton_solve

DEFAULT_EPSILONS = (2.0**-4, 2.0**-6, 2.0**-10, 2.0**-12, 2.0**-20, 2.0**-30)
DEFAULT_N_VALUES = (32, 64, 128, 256, 512, 1024, 2048)

IDENTITY_POINTS = (1e-6, 1e-3, 1.0, 10.0, 300.0)
IDENTITY_RTOL = 1e-13
FINITE_POINT = 800.0

SABOTAGE_MODES = ("delta-d-naive",)


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one property suite."""

    name: str
    passed: bool
    detail: str

    def verdict_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


def run_mesh_suite(
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    n_values: Sequence[int] = DEFAULT_N_VALUES,
) -> SuiteResult:
    """Mesh invariants over the benchmark grid.

    Checks exact node symmetry, strict monotonicity, the transition node
    x_{N/4} = lambda on non-degenerate meshes, and the step bounds
    h <= 6/N and |step change| <= 48/N^2.
    """
    checked = 0
    for epsilon in epsilons:
        for n in n_values:
            mesh = generate_mesh(MeshParams(N=n, epsilon=epsilon))
            diag = mesh_diagnostics(mesh)
            label = f"epsilon={epsilon!r}, N={n}"
            if diag.symmetry_defect != 0.0:
                return SuiteResult(
                    "mesh-invariants",
                    False,
                    f"symmetry defect {diag.symmetry_defect!r} at {label}",
                )
            if not diag.h_monotone:
                return SuiteResult(
                    "mesh-invariants", False, f"non-monotone half-mesh steps at {label}"
                )
            if not mesh.degenerate and mesh.nodes[n // 4] != mesh.lam:
                return SuiteResult(
                    "mesh-invariants",
                    False,
                    f"transition node mismatch at {label}",
                )
            if diag.max_h > 6.0 / n:
                return SuiteResult(
                    "mesh-invariants",
                    False,
                    f"max step {diag.max_h!r} exceeds 6/N at {label}",
                )
            if diag.max_step_change > 48.0 / n**2:
                return SuiteResult(
                    "mesh-invariants",
                    False,
                    f"step change {diag.max_step_change!r} exceeds 48/N^2 at {label}",
                )
            checked += 1
    return SuiteResult(
        "mesh-invariants",
        True,
        f"{checked} meshes: symmetric, monotone, steps within 6/N and 48/N^2",
    )


def _naive_coefficients(beta_h: float) -> Tuple[float, float, float]:
    """Deliberately fragile evaluation used by the sabotage hook."""
    a = 1.0 / math.sinh(beta_h)
    d = 1.0 / math.tanh(beta_h)
    return a, d, d - a


def _stable_coefficients(beta_h: float) -> Tuple[float, float, float]:
    coeff = interval_coefficients(1.0, beta_h)
    return coeff.a, coeff.d, coeff.delta_d


def run_coefficient_suite(sabotage: Optional[str] = None) -> SuiteResult:
    """Hyperbolic identities delta_d = tanh(beta h / 2), a + d = coth(beta h / 2).

    Verified to relative 1e-13 on a beta*h grid spanning ten orders of
    magnitude, plus finiteness of every quantity at beta*h = 800.
    """
    if sabotage is not None and sabotage not in SABOTAGE_MODES:
        raise ValueError(
            f"unknown sabotage mode {sabotage!r}; expected one of {SABOTAGE_MODES}"
        )
    evaluate = _naive_coefficients if sabotage else _stable_coefficients
    worst = 0.0
    for beta_h in IDENTITY_POINTS:
        half = beta_h / 2.0
        expected_delta = math.tanh(half)
        expected_sum = 1.0 / math.tanh(half)
        try:
            a, d, delta_d = evaluate(beta_h)
        except OverflowError:
            return SuiteResult(
                "coefficient-identities",
                False,
                f"overflow evaluating coefficients at beta*h={beta_h!r}",
            )
        rel_delta = abs(delta_d - expected_delta) / expected_delta
        rel_sum = abs((a + d) - expected_sum) / expected_sum
        worst = max(worst, rel_delta, rel_sum)
        if rel_delta > IDENTITY_RTOL or rel_sum > IDENTITY_RTOL:
            return SuiteResult(
                "coefficient-identities",
                False,
                f"identity error {max(rel_delta, rel_sum):.3e} at beta*h={beta_h!r}"
                f" (tolerance {IDENTITY_RTOL:.0e})",
            )
    try:
        values = evaluate(FINITE_POINT)
    except OverflowError:
        return SuiteResult(
            "coefficient-identities",
            False,
            f"overflow evaluating coefficients at beta*h={FINITE_POINT!r}",
        )
    if not all(math.isfinite(v) for v in values):
        return SuiteResult(
            "coefficient-identities",
            False,
            f"non-finite coefficient at beta*h={FINITE_POINT!r}",
        )
    return SuiteResult(
        "coefficient-identities",
        True,
        f"identities within {IDENTITY_RTOL:.0e} on {len(IDENTITY_POINTS)} points; "
        f"finite at beta*h={FINITE_POINT:g}",
    )


def run_stability_suite(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Discrete stability inequality on seeded random vector pairs."""
    total = 0
    min_ratio = math.inf
    for epsilon in (2.0**-4, 2.0**-20):
        problem = builtin_problem("paper-test", epsilon)
        for n in (32, 256):
            mesh = generate_mesh(MeshParams(N=n, epsilon=epsilon, m=problem.m))
            report = stability_experiment(problem, mesh, trials=trials, seed=seed)
            total += report.trials - report.skipped
            min_ratio = min(min_ratio, report.min_ratio)
            if report.violations:
                return SuiteResult(
                    "stability-inequality",
                    False,
                    f"{report.violations} violations at epsilon={epsilon!r}, N={n}",
                )
    return SuiteResult(
        "stability-inequality",
        True,
        f"0 violations in {total} pairs (min ratio {min_ratio:.3f})",
    )


def run_exactness_suite() -> SuiteResult:
    """Nodal and global exactness on the linear constant-coefficient problem."""
    worst_nodal = 0.0
    worst_global = 0.0
    for epsilon in (2.0**-4, 2.0**-10, 2.0**-20):
        problem = builtin_problem("linear-gamma", epsilon)
        for n in (32, 256):
            mesh = generate_mesh(MeshParams(N=n, epsilon=epsilon, m=problem.m))
            solution = newton_solve(problem, mesh)
            nodal = float(np.max(np.abs(solution.ybar)))
            global_sol = build_global(solution, problem, mode="plain")
            xs = np.linspace(0.0, 1.0, 8 * n + 1)
            sampled = float(np.max(np.abs(eval_global(global_sol, xs))))
            worst_nodal = max(worst_nodal, nodal)
            worst_global = max(worst_global, sampled)
            if nodal > 1e-12 or sampled > 1e-10:
                return SuiteResult(
                    "fitted-exactness",
                    False,
                    f"nodal {nodal:.2e} / global {sampled:.2e} at "
                    f"epsilon={epsilon!r}, N={n}",
                )
    return SuiteResult(
        "fitted-exactness",
        True,
        f"worst nodal {worst_nodal:.2e} (<=1e-12), "
        f"worst global {worst_global:.2e} (<=1e-10)",
    )


def run_check_suites(
    trials: int = 1000, seed: int = 0, sabotage: Optional[str] = None
) -> list[SuiteResult]:
    """Run every suite in a stable order."""
    return [
        run_mesh_suite(),
        run_coefficient_suite(sabotage=sabotage),
        run_stability_suite(trials=trials, seed=seed),
        run_exactness_suite(),
    ]
