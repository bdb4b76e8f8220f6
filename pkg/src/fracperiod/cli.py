"""Command-line front end: ``fracperiod ml|solve|classify|selftest``.

Exit codes: 0 success, 1 configuration error, 2 numerical domain error,
3 self-test failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from typing import Sequence

from fracperiod import __version__
from fracperiod.asymptotic_analysis import classify_scenario
from fracperiod.config import ScenarioConfig, bundled_scenarios, eval_expression
from fracperiod.errors import ConfigError, DomainError, FracPeriodError
from fracperiod.mild_solver import solve
from fracperiod.operator_model import Branch, sigma_i
from fracperiod.report import build_report, dumps_report, trajectory_csv, write_outputs
from fracperiod.selftest import format_table, run_matrix
from fracperiod.special_functions import SERIES_RADIUS, mittag_leffler

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DOMAIN = 2
EXIT_SELFTEST = 3

log = logging.getLogger("fracperiod")


def format_value(v: float) -> str:
    """Fixed 15 decimals for moderate magnitudes, otherwise 15 significant digits."""
    if v == 0.0 or 1.0e-3 <= abs(v) < 1.0e6:
        return f"{v:.15f}"
    return f"{v:.14e}"


def parse_z(text: str) -> complex:
    """``-1``, ``2.5e-3``, ``3+4i``/``3+4j`` or a real expression like ``-pi``."""
    s = text.strip().replace(" ", "")
    try:
        return complex(s.replace("i", "j")) if s.endswith(("i", "j")) else complex(float(s))
    except ValueError:
        pass
    try:
        return complex(eval_expression(s))
    except ValueError:
        raise DomainError(f"cannot parse z = {text!r}") from None


# {{{ commands


def cmd_ml(args: argparse.Namespace) -> int:
    z = parse_z(args.z)
    if z.imag != 0.0:
        if not args.complex:
            raise DomainError(
                f"complex z = {args.z} needs --complex; complex arguments are evaluated "
                f"by the series only, inside |z| <= {SERIES_RADIUS:g}"
            )
        v = complex(mittag_leffler(z, args.alpha, args.beta))
        sign = "+" if v.imag >= 0.0 or math.copysign(1.0, v.imag) > 0 else "-"
        print(f"{format_value(v.real)}{sign}{format_value(abs(v.imag))}i")
        return EXIT_OK
    v = float(mittag_leffler(z.real, args.alpha, args.beta))
    print(format_value(v))
    return EXIT_OK


def _run_scenario(cfg: ScenarioConfig):
    alpha = float(cfg.alpha)
    op = cfg.build_operator()
    forcing = cfg.build_forcing()
    grid = cfg.build_grid()
    start = time.perf_counter()
    traj = solve(alpha, op, cfg.build_initial(), forcing, grid)
    log.info("solved %d modes x %d steps in %.2fs", op.size, grid.n_steps, time.perf_counter() - start)
    return alpha, op, forcing, traj


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = ScenarioConfig.load(args.config)
    alpha, op, forcing, traj = _run_scenario(cfg)
    include_conj = cfg.classify.include_conjugates if cfg.classify is not None else False
    report = build_report(
        name=cfg.name, alpha=alpha, op=op, forcing=forcing, traj=traj,
        include_conjugates=include_conj,
    )
    files = {"trajectory.csv": trajectory_csv(traj), "report.json": dumps_report(report)}
    for path in write_outputs(args.out, files):
        print(path)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    cfg = ScenarioConfig.load(args.config)
    ccfg = cfg.require_classify()
    alpha, op, forcing, traj = _run_scenario(cfg)
    params = ccfg.params()
    branch = Branch(args.branch)
    s = sigma_i(op, alpha, ccfg.include_conjugates, branch=branch)
    result = classify_scenario(op, alpha, forcing, traj, params, spectral_set=s)
    report = build_report(
        name=cfg.name, alpha=alpha, op=op, forcing=forcing, traj=traj,
        include_conjugates=ccfg.include_conjugates, branch=branch,
        classification=result, params=params, bloch_p=float(ccfg.bloch_p),
    )
    files = {"report.json": dumps_report(report)}
    if args.trajectory:
        files["trajectory.csv"] = trajectory_csv(traj)
    write_outputs(args.out, files)
    print(result.verdict.value)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    if args.config is not None:
        # a user scenario must at least be classifiable
        ScenarioConfig.load(args.config).require_classify()
    results = run_matrix(Branch(args.branch))
    print(format_table(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"selftest failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_SELFTEST
    print(f"all {len(results)} criteria passed")
    return EXIT_OK


# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracperiod",
        description="Asymptotic periodicity of fractional evolution equations.",
        epilog="bundled scenarios: " + ", ".join(bundled_scenarios()),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="evaluate E_{alpha,beta}(z)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--z", required=True, help="real number, real expression, or a+bi (write --z=-pi for expressions with a leading minus)")
    p.add_argument("--complex", action="store_true", help=f"allow complex z (|z| <= {SERIES_RADIUS:g})")
    p.set_defaults(func=cmd_ml)

    for name, func, help_text in (
        ("solve", cmd_solve, "solve a scenario; write trajectory.csv and report.json"),
        ("classify", cmd_classify, "solve and classify a scenario; write report.json"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="scenario JSON file or bundled scenario name")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        if name == "classify":
            p.add_argument("--trajectory", action="store_true", help="also write trajectory.csv")
            p.add_argument("--branch", choices=[b.value for b in Branch], default=Branch.MULTIVALUED.value)
        p.set_defaults(func=func)

    p = sub.add_parser("selftest", help="run the embedded acceptance matrix")
    p.add_argument(
        "--branch",
        choices=[b.value for b in Branch],
        default=Branch.MULTIVALUED.value,
        help="convention for lambda^alpha in the spectral checks",
    )
    p.add_argument("--config", default=None, help="also validate this scenario for classification")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FracPeriodError, ValueError, ArithmeticError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
