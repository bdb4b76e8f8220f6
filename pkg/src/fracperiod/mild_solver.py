"""Mode-by-mode mild solutions of ``D^alpha_C u = A u + f``, ``u(0) = x``.

On the eigenmode with eigenvalue ``mu`` the mild solution is

.. math::

    u(t) = E_{\\alpha,1}(\\mu t^\\alpha) x
         + \\int_0^t (t - s)^{\\alpha - 1} E_{\\alpha,\\alpha}(\\mu (t - s)^\\alpha) f(s) \\, ds.

The convolution is discretized by product integration: ``f`` is replaced by
its piecewise-linear interpolant and integrated against the full kernel
``tau^(alpha-1) E_{alpha,alpha}(mu tau^alpha)``. On the first step the kernel
moments are exact (through ``E_{alpha,alpha+1}`` and ``E_{alpha,alpha+2}``);
on later steps the kernel is smooth and Gauss-Legendre quadrature is exact to
rounding. Freezing ``E_{alpha,alpha}`` at midpoints would only be accurate to
``O(dt^(2 alpha))`` because of its ``tau^alpha`` behaviour at the origin.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from fracperiod.errors import DimensionError, DomainError
from fracperiod.fractional_calculus import (
    SampledFunction,
    TimeGrid,
    check_order,
    hat_convolution,
    riemann_liouville_integral,
)
from fracperiod.operator_model import DiagonalOperator
from fracperiod.special_functions import mittag_leffler

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS

log = logging.getLogger(__name__)

THREADS_ENV = "FRACPERIOD_THREADS"


# {{{ forcing


@dataclass(frozen=True)
class ForcingTerm:
    """``amplitude * exp(i omega t)``."""

    omega: float
    amplitude: complex


@dataclass(frozen=True)
class DecayTerm:
    """``amplitude * exp(-rate t)`` with ``rate > 0``."""

    amplitude: complex
    rate: float

    def __post_init__(self) -> None:
        if not self.rate > 0.0:
            raise DomainError(f"decay rate must be positive: got {self.rate}")


@dataclass(frozen=True)
class ModeForcing:
    terms: tuple[ForcingTerm, ...] = ()
    decay: DecayTerm | None = None

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros(t.shape, dtype=np.complex128)
        for term in self.terms:
            out += term.amplitude * np.exp(1j * term.omega * t)
        if self.decay is not None:
            out += self.decay.amplitude * np.exp(-self.decay.rate * t)
        return out


@dataclass(frozen=True)
class ForcingSpec:
    """Per-mode trigonometric forcing with an optional decaying remainder.

    The declared frequencies stand in for the spectrum of ``f``; the decaying
    term plays the role of the ``C_0`` perturbation of asymptotic mild
    solutions.
    """

    modes: tuple[ModeForcing, ...]

    @classmethod
    def uniform(
        cls,
        n_modes: int,
        terms: Sequence[ForcingTerm] = (),
        decay: DecayTerm | None = None,
    ) -> ForcingSpec:
        mode = ModeForcing(tuple(terms), decay)
        return cls(tuple(mode for _ in range(n_modes)))

    @classmethod
    def cosine(cls, n_modes: int, omega: float, decay: DecayTerm | None = None) -> ForcingSpec:
        """``cos(omega t)`` (plus ``decay``) in every mode."""
        half = ForcingTerm(omega, 0.5), ForcingTerm(-omega, 0.5)
        return cls.uniform(n_modes, half if omega != 0.0 else (ForcingTerm(0.0, 1.0),), decay)

    @classmethod
    def zero(cls, n_modes: int) -> ForcingSpec:
        return cls.uniform(n_modes)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def declared_spectrum(self) -> tuple[float, ...]:
        freqs = {term.omega for mode in self.modes for term in mode.terms if term.amplitude != 0}
        return tuple(sorted(freqs))

    def sample(self, grid: TimeGrid) -> SampledFunction:
        t = grid.t
        values = np.stack([mode(t) for mode in self.modes], axis=1)
        return SampledFunction(grid, values)

    def permuted(self, order: Sequence[int]) -> ForcingSpec:
        return ForcingSpec(tuple(self.modes[i] for i in order))


# }}}


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: ``values[k, j]`` is mode ``modes[j]`` at ``t_k``."""

    grid: TimeGrid
    values: np.ndarray
    initial: np.ndarray
    modes: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.values.shape != (self.grid.n_steps + 1, len(self.initial)):
            raise DimensionError(
                f"trajectory of shape {self.values.shape} does not match grid and "
                f"{len(self.initial)} modes"
            )

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def as_sampled(self) -> SampledFunction:
        return SampledFunction(self.grid, self.values)


def scalar_resolvent_s(alpha: float, mu: complex, t: Any) -> Any:
    """Scalar solution operator ``S_alpha(t) = E_{alpha,1}(mu t^alpha)``."""
    alpha = check_order(alpha)
    mu = complex(mu)
    if mu.real >= 0.0 and mu != 0:
        raise DomainError(f"eigenvalue must have negative real part: got {mu}")
    t = np.asarray(t, dtype=np.float64)
    z = (mu.real if mu.imag == 0.0 else mu) * t**alpha
    return mittag_leffler(z, alpha, 1.0)


def _ml_on(mu: complex, tau: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    mu = complex(mu)
    if mu.imag == 0.0:
        return np.asarray(mittag_leffler(mu.real * tau**alpha, alpha, beta), dtype=np.float64)
    return np.asarray(mittag_leffler(mu * tau**alpha + 0j, alpha, beta))


def kernel_weights(alpha: float, mu: complex, dt: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Hat-function moments of ``k(tau) = tau^(alpha-1) E_{alpha,alpha}(mu tau^alpha)``.

    Returns ``a, b`` (``m = 1, ..., n``) with
    ``a_m = int k(tau) (tau - tau_{m-1}) / dt`` and
    ``b_m = int k(tau) (tau_m - tau) / dt`` over ``[tau_{m-1}, tau_m]``.
    """
    mu = complex(mu)
    dtype = np.float64 if mu.imag == 0.0 else np.complex128
    a = np.empty(n, dtype=dtype)
    b = np.empty(n, dtype=dtype)

    # first step: K1(t) = t^alpha E_{a,a+1}(mu t^alpha), K2(t) = t^(alpha+1) E_{a,a+2}(mu t^alpha)
    tau = np.array([dt])
    k1 = dt**alpha * _ml_on(mu, tau, alpha, alpha + 1.0)[0]
    k2 = dt ** (alpha + 1.0) * _ml_on(mu, tau, alpha, alpha + 2.0)[0]
    a[0] = k1 - k2 / dt
    b[0] = k2 / dt

    if n > 1:
        m = np.arange(2, n + 1, dtype=np.float64)
        tau = dt * (m[:, None] - 1.0 + _GL_NODES[None, :])
        kernel = tau ** (alpha - 1.0) * _ml_on(mu, tau.ravel(), alpha, alpha).reshape(tau.shape)
        a[1:] = dt * (kernel @ (_GL_WEIGHTS * _GL_NODES))
        b[1:] = dt * (kernel @ (_GL_WEIGHTS * (1.0 - _GL_NODES)))
    return a, b


def solve_mode(
    alpha: float, mu: complex, x0: complex, forcing: np.ndarray, grid: TimeGrid
) -> np.ndarray:
    """Mild solution of one mode sampled on ``grid``.

    :arg forcing: samples of ``f_n`` on ``grid``, shape ``(n_steps + 1,)``.
    """
    alpha = check_order(alpha)
    f = np.asarray(forcing, dtype=np.complex128).reshape(-1)
    if f.shape[0] != grid.n_steps + 1:
        raise DimensionError(f"forcing has {f.shape[0]} samples, grid has {grid.n_steps + 1}")

    u = _ml_on(mu, grid.t, alpha, 1.0) * complex(x0)
    if np.any(f != 0):
        a, b = kernel_weights(alpha, mu, grid.dt, grid.n_steps)
        u = u + hat_convolution(a, b, f[:, None])[:, 0]
    return np.asarray(u, dtype=np.complex128)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 0
    try:
        return max(0, int(raw))
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 0


def solve(
    alpha: float,
    op: DiagonalOperator,
    x0: Sequence[complex],
    forcing: ForcingSpec,
    grid: TimeGrid,
) -> Trajectory:
    """Solve every mode independently and assemble a :class:`Trajectory`.

    Modes may run on a thread pool (``FRACPERIOD_THREADS``); each writes its
    own column, so the result does not depend on scheduling.
    """
    alpha = check_order(alpha)
    x0 = np.asarray(x0, dtype=np.complex128).reshape(-1)
    if x0.shape[0] != op.size or forcing.n_modes != op.size:
        raise DimensionError(
            f"operator has {op.size} modes, initial value {x0.shape[0]}, "
            f"forcing {forcing.n_modes}"
        )

    sampled = forcing.sample(grid).values
    out = np.empty((grid.n_steps + 1, op.size), dtype=np.complex128)

    def run(j: int) -> None:
        out[:, j] = solve_mode(alpha, op.eigenvalues[j], x0[j], sampled[:, j], grid)

    threads = _thread_count()
    if threads > 0 and op.size > 1:
        with ThreadPoolExecutor(max_workers=min(threads, op.size)) as pool:
            list(pool.map(run, range(op.size)))
    else:
        for j in range(op.size):
            run(j)

    return Trajectory(grid, out, x0.copy(), tuple(op.modes))


def mild_residual(
    alpha: float, op: DiagonalOperator, traj: Trajectory, forcing: SampledFunction
) -> float:
    """``max_k |u(t_k) - u(0) - A J^alpha u(t_k) - J^alpha f(t_k)|``."""
    alpha = check_order(alpha)
    if forcing.values.shape != traj.values.shape:
        raise DimensionError("trajectory and forcing must share grid and modes")
    ju = riemann_liouville_integral(alpha, traj.as_sampled()).values
    jf = riemann_liouville_integral(alpha, forcing).values
    defect = traj.values - traj.values[0] - op.mu[None, :] * ju - jf
    return float(np.max(np.linalg.norm(defect, axis=1)))


def convolution_operator(alpha: float, a: float, forcing: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """``F_alpha f(t) = int_0^t (t-s)^(alpha-1) P_alpha(t-s) f(s) ds`` for ``A = -a``."""
    return solve_mode(alpha, -a, 0.0, forcing, grid)


def f_alpha_norm_check(
    alpha: float, a: float, forcing: np.ndarray, grid: TimeGrid, *, tol: float = 1.0e-6
) -> bool:
    """Check ``sup |F_alpha f| <= sup |f| / a`` (scalar case, ``M = 1``)."""
    if not a > 0.0:
        raise DomainError(f"decay rate a must be positive: got {a}")
    f = np.asarray(forcing)
    response = convolution_operator(alpha, a, f, grid)
    return bool(np.max(np.abs(response)) <= np.max(np.abs(f)) / a + tol)
