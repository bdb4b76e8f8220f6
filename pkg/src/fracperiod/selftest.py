"""Embedded acceptance matrix behind ``fracperiod selftest``.

Each check returns ``(passed, detail)``. The spectral checks take the branch
convention as a parameter so that a wrong convention is caught by name.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from fracperiod.asymptotic_analysis import Verdict, classify_scenario
from fracperiod.config import ScenarioConfig
from fracperiod.mild_solver import solve
from fracperiod.operator_model import (
    Branch,
    DiagonalOperator,
    Variant,
    exp_sigma,
    katznelson_tzafriri_hypothesis,
    massera_hypothesis,
    sigma_i,
)
from fracperiod.special_functions import mittag_leffler

SPECTRAL_RTOL = 1.0e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _match_points(got, expected, rtol: float = SPECTRAL_RTOL) -> tuple[bool, str]:
    got = sorted(got, key=lambda z: z.imag)
    expected = sorted(expected, key=lambda z: z.imag)
    if len(got) != len(expected):
        return False, f"{len(got)} points, expected {len(expected)}"
    err = max((abs(g - e) / abs(e) for g, e in zip(got, expected)), default=0.0)
    return err <= rtol, f"max relative error {err:.2e}"


def _match_circle(got, expected, tol: float = 1.0e-9) -> tuple[bool, str]:
    ok = len(got) == len(expected) and all(
        any(abs(g - e) <= tol for g in got) for e in expected
    )
    shown = ", ".join(f"{z.real:+.3f}{z.imag:+.3f}i" for z in got)
    return ok, f"{{{shown}}}"


def _two_thirds_op() -> DiagonalOperator:
    return DiagonalOperator.dirichlet_laplacian(math.pi ** (2.0 / 3.0), 5)


def _two_fifths_op() -> DiagonalOperator:
    return DiagonalOperator.dirichlet_laplacian((2.0 * math.pi) ** 0.4, 3)


def _verdict_check(scenario: str, expected: Verdict, branch: Branch):
    def check() -> tuple[bool, str]:
        cfg = ScenarioConfig.load(scenario)
        c = cfg.require_classify()
        alpha = float(cfg.alpha)
        op = cfg.build_operator()
        forcing = cfg.build_forcing()
        traj = solve(alpha, op, cfg.build_initial(), forcing, cfg.build_grid())
        s = sigma_i(op, alpha, c.include_conjugates, branch=branch)
        result = classify_scenario(op, alpha, forcing, traj, c.params(), spectral_set=s)
        return result.verdict is expected, result.verdict.value

    return check


def build_matrix(branch: Branch = Branch.MULTIVALUED) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    def ex318_sigma():
        s = sigma_i(_two_thirds_op(), 2.0 / 3.0, include_conjugates=False, branch=branch)
        return _match_points(s.points, [complex(0.0, -math.pi * n**3) for n in range(1, 6)])

    def ex318_exp():
        s = sigma_i(_two_thirds_op(), 2.0 / 3.0, include_conjugates=False, branch=branch)
        return _match_circle(exp_sigma(s).points, [1.0, -1.0])

    def ex318_massera():
        op = _two_thirds_op()
        s = sigma_i(op, 2.0 / 3.0, include_conjugates=False, branch=branch)
        ok = massera_hypothesis(op, 2.0 / 3.0, s, [2.0 * math.pi, -2.0 * math.pi])
        return ok, f"holds = {ok}"

    def ex2_sigma():
        s = sigma_i(_two_fifths_op(), 0.4, include_conjugates=True, branch=branch)
        expected = [complex(0.0, sgn * 2.0 * math.pi * n**5) for n in (1, 2, 3) for sgn in (1, -1)]
        return _match_points(s.points, expected)

    def ex2_exp():
        s = sigma_i(_two_fifths_op(), 0.4, include_conjugates=True, branch=branch)
        return _match_circle(exp_sigma(s).points, [1.0])

    def ex2_kt():
        s = sigma_i(_two_fifths_op(), 0.4, include_conjugates=True, branch=branch)
        ok = katznelson_tzafriri_hypothesis(s, [2.0 * math.pi], Variant.PERIODIC)
        return ok and len(s) > 0, f"hypothesis = {ok}, |Sigma_i| = {len(s)}"

    def ml_exp():
        v = mittag_leffler(1.0, 1.0, 1.0)
        err = abs(v - math.e) / math.e
        return err <= 1.0e-12, f"E_(1,1)(1) = {v!r}"

    def ml_cos():
        t = np.linspace(0.0, 6.0, 61)
        err = float(np.max(np.abs(mittag_leffler(-t * t, 2.0, 1.0) - np.cos(t))))
        return err <= 1.0e-10, f"max error {err:.2e}"

    return [
        ("example-3.18-sigma", ex318_sigma),
        ("example-3.18-exp-sigma", ex318_exp),
        ("example-3.18-massera-hypothesis", ex318_massera),
        ("example-2-sigma", ex2_sigma),
        ("example-2-exp-sigma", ex2_exp),
        ("example-2-kt-hypothesis", ex2_kt),
        ("ml-exponential", ml_exp),
        ("ml-cosine", ml_cos),
        ("example-2-verdict", _verdict_check("example_2_k2", Verdict.ALL_PERIODIC, branch)),
        ("example-3.18-verdict", _verdict_check("example_3_18", Verdict.MASSERA_EXISTENCE, branch)),
        (
            "anti-periodic-verdict",
            _verdict_check("anti_periodic_odd_modes", Verdict.ALL_ANTI_PERIODIC, branch),
        ),
        ("negative-control-verdict", _verdict_check("negative_control", Verdict.INCONCLUSIVE, branch)),
    ]


def run_matrix(branch: Branch = Branch.MULTIVALUED) -> list[CheckResult]:
    results = []
    for name, check in build_matrix(branch):
        start = time.perf_counter()
        try:
            passed, detail = check()
        except Exception as exc:  # a crash is a failed criterion, not a crashed run
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'criterion':<{width}}  result  time     detail"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {status:<6}  {r.seconds:6.2f}s  {r.detail}")
    return "\n".join(lines)
