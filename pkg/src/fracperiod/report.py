"""Run reports (JSON) and trajectory tables (CSV).

Floats are written with Python's shortest round-trip ``repr``, keys in a
fixed order and no timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from fracperiod import __version__
from fracperiod.asymptotic_analysis import (
    Classification,
    ClassifyParams,
    PeriodicityProfile,
    decay_verdict,
    periodicity_profile,
    verdict_from_evidence,
    window_fourier_amplitudes,
)
from fracperiod.errors import FracPeriodError
from fracperiod.mild_solver import ForcingSpec, Trajectory, mild_residual
from fracperiod.operator_model import (
    Branch,
    DiagonalOperator,
    OperatorKind,
    SpectralSet,
    distance_from_one,
    exp_sigma,
    sigma_i,
)

TOOL_NAME = "fracperiod"

NOTES = (
    "Verdicts are numerical evidence on a finite horizon; later growth of d(T) would falsify them.",
    "The Massera verdict is judged on the particular solution with zero initial value only; "
    "bounded solutions that are not of this form are not examined.",
    "The forcing spectrum is the set of declared frequencies and is not estimated from samples; "
    "the windowed Fourier amplitudes are diagnostic only.",
)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _clean(obj: Any) -> Any:
    """Replace non-finite floats (not valid JSON) by ``None``."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def spectral_section(
    op: DiagonalOperator, alpha: float, include_conjugates: bool, branch: Branch
) -> tuple[SpectralSet | None, dict]:
    """``sigma_i`` and ``exp_sigma`` entries of a report, with the branch note."""
    out: dict[str, Any] = {"truncation_N": op.size, "modes": list(op.modes)}
    try:
        s = sigma_i(op, alpha, include_conjugates, branch=branch)
        principal = sigma_i(op, alpha, include_conjugates, branch=Branch.PRINCIPAL)
    except FracPeriodError as exc:
        out.update(sigma_i=None, exp_sigma=None, sigma_i_error=str(exc))
        out["branch"] = {"convention": branch.value, "note": "spectral set not computed"}
        return None, out

    out["sigma_i"] = [_pair(p) for p in s.points]
    out["sigma_i_include_conjugates"] = include_conjugates
    out["exp_sigma"] = [_pair(z) for z in exp_sigma(s).points]
    out["branch"] = {
        "convention": branch.value,
        "note": (
            "lambda^alpha is read as multivalued: lambda is kept when some determination "
            "of lambda^alpha equals an eigenvalue"
            if branch is Branch.MULTIVALUED
            else "principal determination of lambda^alpha"
        ),
        "principal_branch_points": len(principal),
    }
    return s, out


def massera_truncation_check(op: DiagonalOperator, alpha: float, include_conjugates: bool) -> dict:
    """Distance from 1 to ``e^Sigma \\ {1}`` at ``N`` and ``2N`` modes (closedness proxy)."""
    out: dict[str, Any] = {"N": op.size}
    ops = {"N": op}
    if op.kind is OperatorKind.DIRICHLET_LAPLACIAN_1D:
        step = (op.modes[-1] - op.modes[0]) // max(op.size - 1, 1) if op.size > 1 else 1
        doubled = list(op.modes) + [op.modes[-1] + step * (k + 1) for k in range(op.size)]
        ops["2N"] = DiagonalOperator.dirichlet_laplacian(op.diffusivity, modes=doubled)
    for key, o in ops.items():
        try:
            d = distance_from_one(exp_sigma(sigma_i(o, alpha, include_conjugates)))
        except FracPeriodError:
            d = math.nan
        out[f"min_distance_{key}"] = d
    return out


def profile_table(c: Classification) -> dict:
    return {
        name: {**p.as_dict(), "decays": c.decays[name]} for name, p in c.profiles.items()
    }


def build_report(
    *,
    name: str,
    alpha: float,
    op: DiagonalOperator,
    forcing: ForcingSpec,
    traj: Trajectory,
    include_conjugates: bool,
    branch: Branch = Branch.MULTIVALUED,
    classification: Classification | None = None,
    params: ClassifyParams | None = None,
    bloch_p: float = 0.0,
) -> dict:
    grid = traj.grid
    report: dict[str, Any] = {
        "tool": {"name": TOOL_NAME, "version": __version__},
        "scenario": name,
        "alpha": alpha,
        "grid": {"dt": grid.dt, "n_steps": grid.n_steps, "horizon": grid.t_max},
        "forcing_frequencies": list(forcing.declared_spectrum),
    }
    _, spectral = spectral_section(op, alpha, include_conjugates, branch)
    report.update(spectral)
    report["mild_residual"] = mild_residual(alpha, op, traj, forcing.sample(grid))

    if classification is not None:
        assert params is not None
        c = classification
        report["hypothesis_flags"] = c.hypothesis_flags.as_dict()
        report["verdict"] = c.verdict.value
        report["decay_rule"] = {"ratio": params.ratio, "floor": params.floor}
        report["evidence"] = c.evidence.as_dict()
        report["profiles"] = profile_table(c)
        if bloch_p not in (0.0, math.pi):
            extra = periodicity_profile(traj, bloch_p, params.windows)
            report["profiles"]["requested"] = {
                **extra.as_dict(),
                "decays": decay_verdict(extra, params.ratio, params.floor),
            }
        omegas = sorted({abs(w) for w in forcing.declared_spectrum})
        report["fourier_diagnostic"] = {
            "omegas": omegas,
            "windows": list(params.windows),
            "amplitudes": window_fourier_amplitudes(traj, omegas, params.windows),
        }
        report["massera_truncation_check"] = massera_truncation_check(op, alpha, include_conjugates)
        report["notes"] = list(NOTES)
    else:
        report["verdict"] = None
    return _clean(report)


def verdict_from_report(report: dict) -> str:
    """Re-derive the verdict from a report's own flags and ``d(T)`` tables."""
    rule = report["decay_rule"]
    decays = {}
    for key, entry in report["profiles"].items():
        profile = PeriodicityProfile(
            tuple(entry["windows"]), tuple(entry["residuals"]), entry["bloch_p"]
        )
        decays[key] = decay_verdict(profile, rule["ratio"], rule["floor"])
    return verdict_from_evidence(report["hypothesis_flags"], decays).value


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def trajectory_csv(traj: Trajectory) -> str:
    """``t,mode,re,im`` rows in time-major, mode-minor order."""
    buf = io.StringIO()
    buf.write("t,mode,re,im\n")
    t = traj.grid.t
    labels = [str(m) for m in (traj.modes or range(1, traj.values.shape[1] + 1))]
    re = traj.values.real
    im = traj.values.imag
    for k in range(t.shape[0]):
        tk = repr(float(t[k]))
        for j, label in enumerate(labels):
            buf.write(f"{tk},{label},{float(re[k, j])!r},{float(im[k, j])!r}\n")
    return buf.getvalue()


def write_outputs(out_dir: str | Path, files: dict[str, str]) -> list[Path]:
    """Write all output files at once, after every computation has finished."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in files.items():
        path = out / fname
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)
    return written


def load_trajectory_csv(path: str | Path) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """Read back a trajectory table: times and one complex series per mode."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    modes = sorted({int(m) for m in data["mode"]})
    out = {}
    for m in modes:
        rows = data[data["mode"] == m]
        out[m] = rows["re"] + 1j * rows["im"]
    t = np.unique(data["t"])
    return t, out
