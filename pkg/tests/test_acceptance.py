"""Acceptance gate: one test per shipped criterion, at the stated tolerances.

Each test prints a single ``[PASS]``/``[FAIL]`` verdict line (visible in the
captured output) and then asserts.  Three criteria are known not to hold for
this algorithm and are left failing on purpose rather than loosened:

* criterion 1 — the frozen reference error table follows the theoretical
  bound C (ln N)^2 / N^2 exactly (the scaled values are constant to five
  significant figures per column, including a column whose mesh is uniform,
  where no logarithmic factor can arise), while the implemented scheme's
  measured errors decay as a clean N^-2 — smaller than the reference for
  large N, with a different N-law;
* criterion 4 — the repaired global error also decays as N^-2, and the
  logarithmic order formula maps any N^-2 sequence to 2.32-2.48 on these
  doublings, above the required [1.8, 2.2] band (the band is met only by
  errors that follow (ln N)^2 / N^2 exactly);
* criterion 5 — the interior error of the plain extension decays *faster*
  than the required first-order band on this benchmark, because the slow
  term's derivative vanishes at the domain midpoint where the largest mesh
  steps sit.

The measured values behind these verdicts are restated in the README.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from spbvp.analysis import convergence_order, convergence_study, region_errors
from spbvp.globalsol import GreenKernel, basis_eval, build_global, green_integral
from spbvp.mesh import MeshParams, generate_mesh, mesh_diagnostics
from spbvp.problem import builtin_problem
from spbvp.scheme import (
    interval_coefficients,
    jacobian,
    newton_solve,
    residual,
)

TABLE_EPSILONS = (2.0**-4, 2.0**-6, 2.0**-10, 2.0**-12, 2.0**-20, 2.0**-30)
TABLE_N = (32, 64, 128, 256, 512, 1024, 2048)

# Frozen reference table: per epsilon, (N, E_N, Ord) with Ord absent on the
# finest mesh.  Transcribed digit-for-digit from the published reference.
REFERENCE_TABLE = {
    2.0**-4: [
        (32, 4.9836e-03, 2.01), (64, 1.7834e-03, 1.98), (128, 6.1200e-04, 2.00),
        (256, 1.9982e-04, 2.00), (512, 6.3269e-05, 2.00), (1024, 1.9527e-05, 2.00),
        (2048, 5.9069e-06, None),
    ],
    2.0**-6: [
        (32, 1.8622e-02, 2.95), (64, 4.1194e-03, 2.01), (128, 1.3925e-03, 2.00),
        (256, 4.5548e-04, 2.00), (512, 1.4417e-04, 2.00), (1024, 4.4492e-05, 2.00),
        (2048, 1.3460e-05, None),
    ],
    2.0**-10: [
        (32, 1.9923e-02, 2.55), (64, 5.4155e-03, 2.00), (128, 1.8429e-03, 2.00),
        (256, 6.0172e-04, 2.00), (512, 1.9039e-04, 2.00), (1024, 5.8762e-05, 2.00),
        (2048, 1.7776e-05, None),
    ],
    2.0**-12: [
        (32, 1.9969e-02, 2.43), (64, 5.7712e-03, 2.02), (128, 1.9427e-03, 2.00),
        (256, 6.4337e-04, 2.00), (512, 2.0072e-04, 2.00), (1024, 6.1950e-05, 2.00),
        (2048, 1.8740e-05, None),
    ],
    2.0**-20: [
        (32, 1.9957e-02, 2.41), (64, 5.8271e-03, 2.02), (128, 1.9616e-03, 2.00),
        (256, 6.4051e-04, 2.00), (512, 2.0266e-04, 2.00), (1024, 6.2550e-05, 2.00),
        (2048, 1.8921e-05, None),
    ],
    2.0**-30: [
        (32, 1.9957e-02, 2.41), (64, 5.8271e-03, 2.02), (128, 1.9616e-03, 2.00),
        (256, 6.4051e-04, 2.00), (512, 2.0266e-04, 2.00), (1024, 6.2550e-05, 2.00),
        (2048, 1.8921e-05, None),
    ],
}


def _report(criterion: str, passed: bool, detail: str) -> None:
    print(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
    assert passed, f"{criterion}: {detail}"


def test_criterion_1_reference_error_table():
    """Nodal E_N within 2% and Ord within 0.05 of the reference, 42 cells."""
    rows = convergence_study(
        lambda eps: builtin_problem("paper-test", eps),
        epsilons=TABLE_EPSILONS,
        n_values=TABLE_N,
        compute_regions=False,
    )
    computed = {(row.epsilon, row.N): row for row in rows}
    bad_e = []
    bad_ord = []
    for eps, cells in REFERENCE_TABLE.items():
        for n, e_ref, ord_ref in cells:
            row = computed[(eps, n)]
            rel = abs(row.E_N - e_ref) / e_ref
            if rel > 0.02:
                bad_e.append((eps, n, row.E_N, e_ref, rel))
            if ord_ref is not None and abs(row.ord - ord_ref) > 0.05:
                bad_ord.append((eps, n, row.ord, ord_ref))
    worst = max(bad_e, key=lambda item: item[4], default=None)
    detail = (
        f"{42 - len(bad_e)}/42 E_N cells within 2%, "
        f"{36 - len(bad_ord)}/36 Ord cells within 0.05"
    )
    if worst is not None:
        eps, n, got, ref, _ = worst
        detail += (
            f"; worst E_N cell eps=2^{int(math.log2(eps))}, N={n}: "
            f"computed {got:.4e} vs reference {ref:.4e} "
            f"({(got - ref) / ref:+.0%})"
        )
    _report("criterion 1 (reference error table)", not bad_e and not bad_ord,
            detail)


def test_criterion_2_fitted_exactness():
    """linear-gamma: nodal error <= 1e-12, sampled plain error <= 1e-10."""
    worst_nodal = 0.0
    worst_global = 0.0
    for eps in (2.0**-4, 2.0**-10, 2.0**-20):
        for n in (32, 256):
            problem = builtin_problem("linear-gamma", eps)
            mesh = generate_mesh(MeshParams(N=n, epsilon=eps, m=problem.m))
            solution = newton_solve(problem, mesh)
            worst_nodal = max(worst_nodal, float(np.abs(solution.ybar).max()))
            global_solution = build_global(solution, problem, mode="plain")
            xs = np.linspace(0.0, 1.0, 8 * n + 1)
            worst_global = max(
                worst_global, float(np.abs(global_solution(xs)).max())
            )
    _report(
        "criterion 2 (fitted exactness)",
        worst_nodal <= 1e-12 and worst_global <= 1e-10,
        f"worst nodal {worst_nodal:.2e} (<=1e-12), "
        f"worst sampled {worst_global:.2e} (<=1e-10)",
    )


def test_criterion_3_stability_inequality():
    """m*||w - v|| <= ||Fw - Fv|| on 1000 seeded random pairs per case."""
    from spbvp.analysis import stability_experiment

    violations = 0
    checked = 0
    min_ratio = math.inf
    for eps in (2.0**-4, 2.0**-20):
        problem = builtin_problem("paper-test", eps)
        for n in (32, 256):
            mesh = generate_mesh(MeshParams(N=n, epsilon=eps, m=problem.m))
            outcome = stability_experiment(problem, mesh, trials=1000, seed=0)
            violations += outcome.violations
            checked += outcome.trials - outcome.skipped
            min_ratio = min(min_ratio, outcome.min_ratio)
    _report(
        "criterion 3 (stability inequality)",
        violations == 0,
        f"{violations} violations in {checked} pairs "
        f"(min ratio {min_ratio:.3f})",
    )


def _rate_study(mode):
    return convergence_study(
        lambda eps: builtin_problem("paper-test", eps),
        epsilons=[2.0**-12],
        n_values=[128, 256, 512, 1024],
        mode=mode,
    )


def test_criterion_4_repaired_global_rate():
    """Dense repaired-error order in [1.8, 2.2] for each doubling."""
    rows = _rate_study("repaired")
    errors = [row.region.global_max for row in rows]
    orders = [
        convergence_order(errors[i], errors[i + 1], int(math.log2(rows[i].N)))
        for i in range(len(errors) - 1)
    ]
    in_band = [1.8 <= value <= 2.2 for value in orders]
    _report(
        "criterion 4 (repaired global rate)",
        all(in_band),
        "orders per doubling "
        + ", ".join(f"{value:.3f}" for value in orders)
        + " (band [1.8, 2.2])",
    )


def test_criterion_5_interior_and_layer_rates():
    """Plain extension: interior order in [0.8, 1.2]; layer order >= 1.8."""
    rows = _rate_study("plain")
    interior = [row.region.interior for row in rows]
    layers = [
        max(row.region.layer_left, row.region.layer_right) for row in rows
    ]
    interior_orders = [
        math.log(interior[i] / interior[i + 1]) / math.log(2.0)
        for i in range(len(interior) - 1)
    ]
    layer_orders = [
        math.log(layers[i] / layers[i + 1]) / math.log(2.0)
        for i in range(len(layers) - 1)
    ]
    interior_ok = all(0.8 <= value <= 1.2 for value in interior_orders)
    layer_ok = all(value >= 1.8 for value in layer_orders)
    _report(
        "criterion 5 (interior/layer rate split)",
        interior_ok and layer_ok,
        "interior orders "
        + ", ".join(f"{value:.3f}" for value in interior_orders)
        + " (band [0.8, 1.2]); layer orders "
        + ", ".join(f"{value:.3f}" for value in layer_orders)
        + " (>= 1.8)",
    )


def test_criterion_6_coefficient_identities():
    """Half-argument identities to 1e-13 rel; finiteness at beta*h = 800."""
    worst = 0.0
    for z in (1e-6, 1e-3, 1.0, 10.0, 300.0):
        coeff = interval_coefficients(beta=z, h=1.0)
        tanh_half = math.tanh(z / 2.0)
        coth_half = 1.0 / tanh_half
        worst = max(
            worst,
            abs(coeff.delta_d - tanh_half) / tanh_half,
            abs((coeff.a + coeff.d) - coth_half) / coth_half,
        )
    coeff = interval_coefficients(beta=800.0, h=1.0)
    kernel = GreenKernel(beta=800.0, interval=(0.0, 1.0), gamma=1.0)
    finite = all(
        math.isfinite(v) for v in (coeff.a, coeff.d, coeff.delta_d)
    ) and all(
        math.isfinite(v)
        for x in (0.0, 0.25, 0.999, 1.0)
        for v in (*basis_eval(kernel, x), green_integral(kernel, x))
    )
    _report(
        "criterion 6 (coefficient identities)",
        worst <= 1e-13 and finite,
        f"worst identity error {worst:.2e} (<=1e-13); "
        f"all evaluations finite at beta*h=800: {finite}",
    )


def test_criterion_7_green_integral_quadrature():
    """Closed form vs adaptive quadrature, 1e-8 rel at 100 random pairs."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    sign_ok = True
    for _ in range(100):
        beta_h = float(rng.uniform(0.01, 30.0))
        gamma = float(rng.uniform(0.5, 4.0))
        left = float(rng.uniform(0.0, 0.5))
        width = float(rng.uniform(0.05, 0.5))
        kernel = GreenKernel(
            beta=beta_h / width, interval=(left, left + width), gamma=gamma
        )
        x = left + float(rng.uniform(0.0, 1.0)) * width
        closed = green_integral(kernel, x)
        sign_ok = sign_ok and (-1.0 / gamma <= closed <= 0.0)

        beta = kernel.beta
        right = left + width

        def integrand(s):
            lo, hi = (x, s) if x <= s else (s, x)
            return (
                -beta
                * math.sinh(beta * (lo - left))
                * math.sinh(beta * (right - hi))
                / (gamma * math.sinh(beta_h))
            )

        oracle, _ = quad(integrand, left, right, points=[x], limit=200,
                         epsabs=1e-15, epsrel=1e-12)
        scale = max(abs(oracle), 1e-30)
        worst = max(worst, abs(closed - oracle) / scale)
    _report(
        "criterion 7 (quadrature oracle)",
        worst <= 1e-8 and sign_ok,
        f"worst relative deviation {worst:.2e} (<=1e-8); "
        f"sign bound held: {sign_ok}",
    )


def test_criterion_8_jacobian_finite_difference():
    """Analytic Jacobian within 1e-6 of central differences."""
    worst = 0.0
    rng = np.random.default_rng(5)
    for eps, n in ((2.0**-6, 32), (2.0**-20, 128)):
        problem = builtin_problem("paper-test", eps)
        mesh = generate_mesh(MeshParams(N=n, epsilon=eps, m=problem.m))
        ybar = rng.uniform(-2.0, 2.0, n + 1)
        ybar[0] = ybar[-1] = 0.0
        dense = jacobian(problem, mesh, ybar).dense()
        step = 1e-6
        fd = np.zeros_like(dense)
        for j in range(1, n):
            plus, minus = ybar.copy(), ybar.copy()
            plus[j] += step
            minus[j] -= step
            column = (
                residual(problem, mesh, plus) - residual(problem, mesh, minus)
            ) / (2.0 * step)
            fd[:, j - 1] = column[1:-1]
        worst = max(worst, float(np.abs(dense - fd).max() / np.abs(dense).max()))
    _report(
        "criterion 8 (Jacobian vs finite differences)",
        worst < 1e-6,
        f"worst relative deviation {worst:.2e} (<1e-6)",
    )


def test_criterion_9_mesh_invariants():
    """Symmetry, monotonicity, transition node, and step bounds, 42 meshes."""
    failures = []
    for eps in TABLE_EPSILONS:
        for n in TABLE_N:
            mesh = generate_mesh(MeshParams(N=n, epsilon=eps))
            diag = mesh_diagnostics(mesh)
            label = f"eps=2^{int(math.log2(eps))}, N={n}"
            if diag.symmetry_defect != 0.0:
                failures.append(f"symmetry defect at {label}")
            if not np.all(np.diff(mesh.nodes) > 0.0):
                failures.append(f"nodes not strictly increasing at {label}")
            if not mesh.degenerate and mesh.nodes[n // 4] != mesh.lam:
                failures.append(f"transition node off at {label}")
            if diag.max_h > 6.0 / n:
                failures.append(f"step bound 6/N broken at {label}")
            if diag.max_step_change > 48.0 / n**2:
                failures.append(f"step-change bound 48/N^2 broken at {label}")
    _report(
        "criterion 9 (mesh invariants)",
        not failures,
        "42 meshes verified" if not failures else "; ".join(failures[:3]),
    )
