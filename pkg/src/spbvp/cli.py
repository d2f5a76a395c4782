"""Command-line front end: solve, table, and check subcommands.

Exit codes: 0 success, 2 usage error, 3 Newton non-convergence, 4 property
failure.  The default output directory can be set via the ``SPBVP_OUTDIR``
environment variable; an explicit ``--outdir`` wins.

Epsilon values accept power notation (``2^-10`` or ``2**-10``) as well as
plain decimals.  Identical configuration yields byte-identical CSV output.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis import nodal_error, convergence_study, region_errors
from .checks import SABOTAGE_MODES, run_check_suites
from .figures import (
    render_convergence_figure,
    render_error_figure,
    render_solution_figure,
)
from .globalsol import build_global
from .mesh import MeshParams, generate_mesh
from .problem import Problem, builtin_ids, builtin_problem
from .report import (
    format_epsilon,
    format_report_table,
    write_mesh_csv,
    write_nodal_csv,
    write_report_csv,
    write_samples_csv,
)
from .scheme import NewtonOptions, newton_solve

OUTDIR_ENV = "SPBVP_OUTDIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_PROPERTY_FAILURE = 4

DEFAULT_TABLE_EPSILONS = (
    2.0**-4,
    2.0**-6,
    2.0**-10,
    2.0**-12,
    2.0**-20,
    2.0**-30,
)
DEFAULT_TABLE_N = (32, 64, 128, 256, 512, 1024, 2048)


class ConfigError(Exception):
    """Invalid run configuration (usage error, exit code 2)."""


@dataclass
class RunConfig:
    """Validated configuration for one CLI invocation."""

    command: str
    problem: str = "paper-test"
    epsilons: List[float] = field(default_factory=list)
    n_values: List[int] = field(default_factory=list)
    q: float = 0.25
    sigma: float = 2.0
    gamma: Optional[float] = None
    newton: NewtonOptions = field(default_factory=NewtonOptions)
    mode: str = "plain"
    samples_per_interval: int = 32
    outdir: Optional[Path] = None
    format: str = "pretty"
    figures: bool = True
    trials: int = 1000
    seed: int = 0
    sabotage: Optional[str] = None

    def validate(self) -> None:
        if self.command in ("solve", "table"):
            if not self.epsilons:
                raise ConfigError("at least one epsilon value is required")
            if not self.n_values:
                raise ConfigError("at least one N value is required")
        for eps in self.epsilons:
            if not 0.0 < eps < 1.0:
                raise ConfigError(f"epsilon must lie in (0, 1), got {eps!r}")
        for n in self.n_values:
            if n < 4 or n % 4 != 0:
                raise ConfigError(f"N must be a positive multiple of 4, got {n}")
        if not 0.0 < self.q <= 0.5:
            raise ConfigError(f"q must lie in (0, 0.5], got {self.q!r}")
        if self.sigma <= 0.0:
            raise ConfigError(f"sigma must be positive, got {self.sigma!r}")
        if self.gamma is not None and self.gamma <= 0.0:
            raise ConfigError(f"gamma override must be positive, got {self.gamma!r}")
        if self.samples_per_interval < 1:
            raise ConfigError("samples-per-interval must be at least 1")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")


def parse_power(text: str) -> float:
    """Parse a float, accepting power notation like ``2^-10`` or ``2**-10``."""
    token = text.strip().replace("**", "^")
    try:
        if "^" in token:
            base_text, _, exp_text = token.partition("^")
            value = float(base_text) ** float(exp_text)
        else:
            value = float(token)
    except (ValueError, OverflowError) as exc:
        raise argparse.ArgumentTypeError(f"invalid numeric value {text!r}") from exc
    return value


def epsilon_token(epsilon: float) -> str:
    """Filesystem-safe tag for an epsilon value (``2^-10`` -> ``2m10``)."""
    label = format_epsilon(epsilon)
    return (
        label.replace("^-", "m").replace("^", "p").replace("-", "m").replace(".", "p")
    )


def _resolve_outdir(cfg: RunConfig) -> Path:
    if cfg.outdir is not None:
        return cfg.outdir
    env = os.environ.get(OUTDIR_ENV)
    return Path(env) if env else Path.cwd()


def _build_problem(cfg: RunConfig, epsilon: float) -> Problem:
    # --problem is guarded by argparse choices; a ValueError here (unknown
    # id on a direct call) surfaces as a usage error in main().
    problem = builtin_problem(cfg.problem, epsilon)
    if cfg.gamma is not None:
        problem = problem.with_gamma(cfg.gamma)
    return problem


def cmd_solve(cfg: RunConfig) -> int:
    """Solve one (epsilon, N) instance and write nodal/sample artifacts."""
    if len(cfg.epsilons) != 1 or len(cfg.n_values) != 1:
        raise ConfigError("solve requires exactly one --epsilon and one --n")
    epsilon = cfg.epsilons[0]
    n = cfg.n_values[0]
    problem = _build_problem(cfg, epsilon)
    mesh = generate_mesh(
        MeshParams(N=n, epsilon=epsilon, m=problem.m, sigma=cfg.sigma, q=cfg.q)
    )
    solution = newton_solve(problem, mesh, cfg.newton)
    global_solution = build_global(solution, problem, mode=cfg.mode)

    outdir = _resolve_outdir(cfg)
    base = f"{cfg.problem}_eps{epsilon_token(epsilon)}_n{n}_{cfg.mode}"
    written = [
        write_mesh_csv(mesh, outdir / f"{base}_mesh.csv"),
        write_nodal_csv(solution, outdir / f"{base}_nodal.csv", problem),
        write_samples_csv(
            global_solution,
            outdir / f"{base}_samples.csv",
            samples_per_interval=cfg.samples_per_interval,
        ),
    ]
    if cfg.figures:
        written.append(
            render_solution_figure(global_solution, outdir / f"{base}_solution.png")
        )
        if problem.exact is not None:
            written.append(
                render_error_figure(global_solution, outdir / f"{base}_error.png")
            )

    print(
        f"problem={cfg.problem} epsilon={format_epsilon(epsilon)} N={n} "
        f"mode={cfg.mode} converged={str(solution.converged).lower()} "
        f"iterations={solution.iterations}"
    )
    if problem.exact is not None:
        e_n = nodal_error(solution, problem)
        regions = region_errors(
            global_solution, problem, samples_per_interval=cfg.samples_per_interval
        )
        print(f"E_N = {e_n:.4e}")
        print(
            f"region errors: layer_left={regions.layer_left:.4e} "
            f"interior={regions.interior:.4e} "
            f"layer_right={regions.layer_right:.4e} "
            f"global_max={regions.global_max:.4e}"
        )
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK if solution.converged else EXIT_NO_CONVERGENCE


def cmd_table(cfg: RunConfig) -> int:
    """Run a convergence study and emit the report as a table or CSV."""
    rows = convergence_study(
        lambda eps: _build_problem(cfg, eps),
        epsilons=cfg.epsilons,
        n_values=cfg.n_values,
        mode=cfg.mode,
        newton=cfg.newton,
        samples_per_interval=cfg.samples_per_interval,
        sigma=cfg.sigma,
        q=cfg.q,
    )
    if cfg.format == "csv":
        outdir = _resolve_outdir(cfg)
        base = f"{cfg.problem}_{cfg.mode}_report"
        csv_path = write_report_csv(rows, outdir / f"{base}.csv")
        print(f"wrote {csv_path}")
        if cfg.figures:
            fig_path = render_convergence_figure(rows, outdir / f"{base}.png")
            print(f"wrote {fig_path}")
    else:
        print(format_report_table(rows))
    if all(row.converged for row in rows):
        return EXIT_OK
    bad = [(row.epsilon, row.N) for row in rows if not row.converged]
    print(f"non-converged cells: {bad}", file=sys.stderr)
    return EXIT_NO_CONVERGENCE


def cmd_check(cfg: RunConfig) -> int:
    """Run the property suites and print one verdict line per suite."""
    results = run_check_suites(trials=cfg.trials, seed=cfg.seed, sabotage=cfg.sabotage)
    for result in results:
        print(result.verdict_line())
    if all(result.passed for result in results):
        print("all checks passed")
        return EXIT_OK
    failing = ", ".join(result.name for result in results if not result.passed)
    print(f"failing suites: {failing}", file=sys.stderr)
    return EXIT_PROPERTY_FAILURE


def _add_model_arguments(parser: argparse.ArgumentParser, multi: bool) -> None:
    parser.add_argument(
        "--problem",
        default="paper-test",
        choices=builtin_ids(),
        help="built-in problem id (default: %(default)s)",
    )
    if multi:
        parser.add_argument(
            "--epsilon",
            type=parse_power,
            nargs="+",
            default=list(DEFAULT_TABLE_EPSILONS),
            metavar="EPS",
            help="perturbation values; accepts 2^-10 notation "
            "(default: 2^-4 2^-6 2^-10 2^-12 2^-20 2^-30)",
        )
        parser.add_argument(
            "--n",
            type=int,
            nargs="+",
            default=list(DEFAULT_TABLE_N),
            metavar="N",
            help="interval counts, each a multiple of 4 (default: 32 ... 2048)",
        )
    else:
        parser.add_argument(
            "--epsilon",
            type=parse_power,
            required=True,
            metavar="EPS",
            help="perturbation value; accepts 2^-10 notation",
        )
        parser.add_argument(
            "--n",
            type=int,
            required=True,
            metavar="N",
            help="number of mesh intervals (multiple of 4)",
        )
    parser.add_argument(
        "--q", type=float, default=0.25, help="transition cap (default: %(default)s)"
    )
    parser.add_argument(
        "--sigma",
        type=float,
        default=2.0,
        help="layer-width safety factor (default: %(default)s)",
    )
    parser.add_argument(
        "--gamma",
        type=float,
        default=None,
        help="override the reaction upper bound used by the fitting factors",
    )
    parser.add_argument(
        "--mode",
        choices=("plain", "repaired"),
        default="plain",
        help="global-solution construction (default: %(default)s)",
    )
    parser.add_argument(
        "--samples-per-interval",
        type=int,
        default=32,
        help="dense-evaluation samples per mesh interval (default: %(default)s)",
    )
    parser.add_argument(
        "--newton-tol",
        type=float,
        default=1e-12,
        help="scaled-residual tolerance (default: %(default)s)",
    )
    parser.add_argument(
        "--newton-max-iter",
        type=int,
        default=50,
        help="Newton iteration cap (default: %(default)s)",
    )
    parser.add_argument(
        "--initial-guess",
        type=float,
        default=-0.5,
        help="constant initial iterate for interior nodes (default: %(default)s)",
    )
    parser.add_argument(
        "--outdir",
        "-o",
        type=Path,
        default=None,
        help=f"output directory (default: ${OUTDIR_ENV} or the working directory)",
    )
    parser.add_argument(
        "--no-figures",
        action="store_true",
        help="skip rendering PNG figures next to the CSV output",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spbvp",
        description=(
            "Layer-resolving solver for semilinear reaction-diffusion "
            "boundary-value problems: fitted tridiagonal scheme on a smoothed "
            "graded mesh, with global interpolants and convergence reports."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser(
        "solve",
        help="solve one (epsilon, N) instance and export nodal/sample data",
    )
    _add_model_arguments(solve, multi=False)

    table = subparsers.add_parser(
        "table",
        help="run a convergence study over epsilon and N grids",
    )
    _add_model_arguments(table, multi=True)
    table.add_argument(
        "--format",
        choices=("pretty", "csv"),
        default="pretty",
        help="emit a formatted table or a CSV report (default: %(default)s)",
    )

    check = subparsers.add_parser(
        "check",
        help="run the self-check property suites",
    )
    check.add_argument(
        "--trials",
        type=int,
        default=1000,
        help="random pairs per stability case (default: %(default)s)",
    )
    check.add_argument(
        "--seed", type=int, default=0, help="random seed (default: %(default)s)"
    )
    check.add_argument(
        "--sabotage",
        choices=SABOTAGE_MODES,
        default=None,
        help="test hook: swap in a deliberately unstable coefficient evaluation",
    )
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command in ("solve", "table"):
        epsilons = args.epsilon if isinstance(args.epsilon, list) else [args.epsilon]
        n_values = args.n if isinstance(args.n, list) else [args.n]
        cfg.problem = args.problem
        cfg.epsilons = [float(e) for e in epsilons]
        cfg.n_values = [int(n) for n in n_values]
        cfg.q = args.q
        cfg.sigma = args.sigma
        cfg.gamma = args.gamma
        cfg.mode = args.mode
        cfg.samples_per_interval = args.samples_per_interval
        cfg.newton = NewtonOptions(
            tol=args.newton_tol,
            max_iter=args.newton_max_iter,
            initial_guess=args.initial_guess,
        )
        cfg.outdir = args.outdir
        cfg.figures = not args.no_figures
        cfg.format = getattr(args, "format", "pretty")
    else:
        cfg.trials = args.trials
        cfg.seed = args.seed
        cfg.sabotage = args.sabotage
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        cfg.validate()
        if cfg.command == "solve":
            return cmd_solve(cfg)
        if cfg.command == "table":
            return cmd_table(cfg)
        return cmd_check(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_entry() -> None:
    sys.exit(main())
