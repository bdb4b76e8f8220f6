"""Numerical evidence for asymptotic (anti-)periodicity and scenario verdicts.

A function ``g`` is asymptotically Bloch 1-periodic of type ``p`` when
``g(t + 1) - e^(ip) g(t) -> 0``. On a finite horizon this is measured by the
window residuals

.. math::

    d(T) = \\max_{t_k \\in [T, T+1]} \\| u(t_k + 1) - e^{ip} u(t_k) \\|,

and a profile is judged to decay when the residuals fall below a floor, or
are nonincreasing and shrink by a fixed ratio across the windows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from fracperiod.errors import DomainError, OffGridShiftError
from fracperiod.fractional_calculus import check_order
from fracperiod.mild_solver import ForcingSpec, Trajectory, solve
from fracperiod.operator_model import (
    DiagonalOperator,
    MasseraConditions,
    SpectralSet,
    Variant,
    in_odd_pi_z,
    in_two_pi_z,
    katznelson_tzafriri_hypothesis,
    massera_conditions,
    sigma_i,
)

DEFAULT_WINDOWS = (2.0, 6.0, 10.0)
DEFAULT_RATIO = 0.5
DEFAULT_FLOOR = 1.0e-6


@dataclass(frozen=True)
class PeriodicityProfile:
    windows: tuple[float, ...]
    residuals: tuple[float, ...]
    bloch_p: float = 0.0

    def as_dict(self) -> dict:
        return {
            "bloch_p": self.bloch_p,
            "windows": list(self.windows),
            "residuals": list(self.residuals),
        }


def periodicity_profile(
    traj: Trajectory, bloch_p: float, windows: Sequence[float]
) -> PeriodicityProfile:
    """Window residuals ``d(T)`` of ``u(t + 1) - e^(ip) u(t)``.

    Maxima are taken over grid points only; the unit shift must be a whole
    number of steps.
    """
    grid = traj.grid
    shift = grid.steps_per_unit()
    if shift is None:
        raise OffGridShiftError(f"1/dt is not an integer (dt = {grid.dt!r})")
    windows = tuple(float(T) for T in windows)
    if any(b <= a for a, b in zip(windows, windows[1:])):
        raise DomainError("windows must be strictly increasing")
    if windows and windows[-1] + 2.0 > grid.t_max + 1.0e-9:
        raise DomainError(
            f"grid ends at {grid.t_max:g} but window T = {windows[-1]:g} needs T + 2"
        )

    phase = complex(math.cos(bloch_p), math.sin(bloch_p))
    residuals = []
    for T in windows:
        lo = int(math.ceil(T / grid.dt - 1.0e-9))
        hi = int(math.floor((T + 1.0) / grid.dt + 1.0e-9))
        head = traj.values[lo : hi + 1]
        tail = traj.values[lo + shift : hi + shift + 1]
        residuals.append(float(np.max(np.linalg.norm(tail - phase * head, axis=1))))
    return PeriodicityProfile(windows, tuple(residuals), float(bloch_p))


def decay_verdict(
    profile: PeriodicityProfile, ratio: float = DEFAULT_RATIO, floor: float = DEFAULT_FLOOR
) -> bool:
    """True when the last residual is below ``floor``, or the residuals are
    nonincreasing and the last is at most ``ratio`` times the first."""
    d = profile.residuals
    if len(d) < 3:
        raise DomainError("decay_verdict needs at least three windows")
    if d[-1] <= floor:
        return True
    monotone = all(b <= a for a, b in zip(d, d[1:]))
    return monotone and d[-1] <= ratio * d[0]


class SpectrumTarget(enum.Enum):
    TWO_PI_Z = "2piZ"
    ODD_PI_Z = "(2Z+1)pi"


def forcing_spectrum_check(forcing: ForcingSpec, target: SpectrumTarget) -> bool:
    member = in_two_pi_z if target is SpectrumTarget.TWO_PI_Z else in_odd_pi_z
    return all(member(w) for w in forcing.declared_spectrum)


def window_fourier_amplitudes(
    traj: Trajectory, omegas: Sequence[float], windows: Sequence[float]
) -> list[list[float]]:
    """Diagnostic only: ``|int_T^{T+1} e^(-i omega t) u(t) dt|`` (2-norm over modes).

    Returns one row per window, one column per frequency.
    """
    grid = traj.grid
    t = grid.t
    rows = []
    for T in windows:
        lo = int(math.ceil(T / grid.dt - 1.0e-9))
        hi = int(math.floor((T + 1.0) / grid.dt + 1.0e-9))
        ts = t[lo : hi + 1]
        us = traj.values[lo : hi + 1]
        row = []
        for w in omegas:
            integrand = np.exp(-1j * w * ts)[:, None] * us
            amp = np.trapezoid(integrand, ts, axis=0)
            row.append(float(np.linalg.norm(amp)))
        rows.append(row)
    return rows


# {{{ classification


class Verdict(enum.Enum):
    ALL_PERIODIC = "AllAsymptotic1Periodic"
    ALL_ANTI_PERIODIC = "AllAsymptoticAnti1Periodic"
    MASSERA_EXISTENCE = "MasseraExistence"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ClassifyParams:
    windows: tuple[float, ...] = DEFAULT_WINDOWS
    ratio: float = DEFAULT_RATIO
    floor: float = DEFAULT_FLOOR
    include_conjugates: bool = True


@dataclass(frozen=True)
class HypothesisFlags:
    kt_periodic: bool
    kt_anti_periodic: bool
    forcing_odd_pi: bool
    massera: MasseraConditions

    def as_dict(self) -> dict:
        return {
            "kt_periodic": self.kt_periodic,
            "kt_anti_periodic": self.kt_anti_periodic,
            "forcing_in_odd_piZ": self.forcing_odd_pi,
            "massera": self.massera.as_dict(),
        }


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    evidence: PeriodicityProfile
    hypothesis_flags: HypothesisFlags
    spectral_set: SpectralSet
    #: every profile that was computed, keyed by name
    profiles: dict[str, PeriodicityProfile] = field(default_factory=dict)
    #: decay_verdict of each profile in ``profiles``
    decays: dict[str, bool] = field(default_factory=dict)


def verdict_from_evidence(flags: dict, decays: dict[str, bool]) -> Verdict:
    """Verdict rule, applied to recorded flags and profile decisions.

    ``flags`` uses the keys of :meth:`HypothesisFlags.as_dict`; ``decays``
    maps ``"periodic"``, ``"anti_periodic"`` and ``"particular"`` to the
    outcome of :func:`decay_verdict` on the matching profile.
    """
    if flags["kt_periodic"] and decays.get("periodic", False):
        return Verdict.ALL_PERIODIC
    if flags["kt_anti_periodic"] and flags["forcing_in_odd_piZ"] and decays.get(
        "anti_periodic", False
    ):
        return Verdict.ALL_ANTI_PERIODIC
    if flags["massera"]["holds"] and decays.get("particular", False):
        return Verdict.MASSERA_EXISTENCE
    return Verdict.INCONCLUSIVE


def classify_scenario(
    op: DiagonalOperator,
    alpha: float,
    forcing: ForcingSpec,
    traj: Trajectory,
    params: ClassifyParams = ClassifyParams(),
    *,
    spectral_set: SpectralSet | None = None,
) -> Classification:
    """Tie the hypotheses of the periodicity theorems to trajectory evidence.

    The Massera branch is judged on the particular solution ``u = F_alpha f``
    (zero initial value); it is solved here when ``traj`` starts elsewhere.
    """
    alpha = check_order(alpha)
    s = spectral_set if spectral_set is not None else sigma_i(op, alpha, params.include_conjugates)
    freqs = forcing.declared_spectrum
    flags = HypothesisFlags(
        kt_periodic=katznelson_tzafriri_hypothesis(s, freqs, Variant.PERIODIC),
        kt_anti_periodic=katznelson_tzafriri_hypothesis(s, freqs, Variant.ANTI_PERIODIC),
        forcing_odd_pi=forcing_spectrum_check(forcing, SpectrumTarget.ODD_PI_Z),
        massera=massera_conditions(op, alpha, s, freqs),
    )

    profiles = {
        "periodic": periodicity_profile(traj, 0.0, params.windows),
        "anti_periodic": periodicity_profile(traj, math.pi, params.windows),
    }
    if np.any(traj.initial != 0):
        particular = solve(alpha, op, np.zeros(op.size), forcing, traj.grid)
        profiles["particular"] = periodicity_profile(particular, 0.0, params.windows)
    else:
        profiles["particular"] = profiles["periodic"]

    decays = {k: decay_verdict(p, params.ratio, params.floor) for k, p in profiles.items()}
    verdict = verdict_from_evidence(flags.as_dict(), decays)
    evidence_key = {
        Verdict.ALL_ANTI_PERIODIC: "anti_periodic",
        Verdict.MASSERA_EXISTENCE: "particular",
    }.get(verdict, "periodic")

    return Classification(verdict, profiles[evidence_key], flags, s, profiles, decays)


# }}}
