"""Numerical checks shared by the unit tests and the acceptance suite."""

from __future__ import annotations

import numpy as np

from fracperiod.special_functions import Regime, mittag_leffler, regime_is_valid

OVERLAP_GRID = np.round(np.arange(-50.0, 5.0 + 1e-9, 0.1), 10)


def regime_overlap_error(alpha: float, beta: float, z: np.ndarray) -> tuple[float, int]:
    """Largest relative disagreement between regimes that are valid at the same z.

    Returns the worst relative difference and the number of compared pairs.
    """
    values = {}
    for r in Regime:
        mask = np.array([regime_is_valid(r, zi, alpha) for zi in z])
        v = np.full(z.shape, np.nan)
        if mask.any():
            v[mask] = mittag_leffler(z[mask], alpha, beta, regime=r)
        values[r] = v
    worst, compared = 0.0, 0
    regimes = list(Regime)
    for i, ri in enumerate(regimes):
        for rj in regimes[i + 1 :]:
            x, y = values[ri], values[rj]
            both = ~np.isnan(x) & ~np.isnan(y)
            if both.any():
                rel = np.abs(x[both] - y[both]) / np.maximum(np.abs(x[both]), np.abs(y[both]))
                worst = max(worst, float(np.max(rel)))
                compared += int(both.sum())
    return worst, compared


#: one "PASS"/"FAIL" line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, title: str, checks: dict[str, bool], detail: str = "") -> None:
    """Print and record the outcome of one acceptance criterion, then assert it."""
    ok = all(checks.values())
    failed = [name for name, passed in checks.items() if not passed]
    line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion:2d}  {title}"
    if detail:
        line += f"  [{detail}]"
    if failed:
        line += f"  failed: {', '.join(failed)}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
