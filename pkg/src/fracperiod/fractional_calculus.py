"""Riemann-Liouville integral and Caputo derivative on uniform grids.

The integral uses product integration: the samples are joined into a
piecewise-linear interpolant, which is integrated exactly against the weakly
singular kernel ``(t - s)^(alpha - 1) / Gamma(alpha)``. The derivative is the
classical L1 scheme. Both are discrete convolutions and are evaluated with
:func:`numpy.convolve` column by column.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from fracperiod.errors import DimensionError, DomainError


def check_order(alpha: float) -> float:
    """Validate a fractional order ``0 < alpha <= 1``."""
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"fractional order must lie in (0, 1]: got {alpha}")
    return alpha


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_k = k dt``, ``k = 0, ..., n_steps``."""

    dt: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise DomainError(f"dt must be positive: got {self.dt}")
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be at least 1: got {self.n_steps}")

    @classmethod
    def covering(cls, t_max: float, dt: float) -> TimeGrid:
        """Smallest grid with spacing ``dt`` that reaches ``t_max``."""
        n = int(math.ceil(t_max / dt - 1.0e-9))
        return cls(dt=dt, n_steps=max(n, 1))

    @property
    def t(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    @property
    def t_max(self) -> float:
        return self.dt * self.n_steps

    def steps_per_unit(self) -> int | None:
        """Number of steps in a unit of time, or *None* if ``1/dt`` is not an integer."""
        k = round(1.0 / self.dt)
        if k >= 1 and abs(k * self.dt - 1.0) <= 1.0e-12:
            return k
        return None


@dataclass(frozen=True)
class SampledFunction:
    """Vector-valued samples on a :class:`TimeGrid`, shape ``(n_steps + 1, dim)``."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[0] != self.grid.n_steps + 1:
            raise DimensionError(
                f"expected {self.grid.n_steps + 1} samples, got array of shape {v.shape}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: TimeGrid, func) -> SampledFunction:
        return cls(grid, np.asarray(func(grid.t)))

    @property
    def dim(self) -> int:
        return self.values.shape[1]


# {{{ weights

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


def product_weights(alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Moments of ``x^(alpha-1)`` against the two hat functions on ``[m-1, m]``.

    Returns arrays ``a, b`` of length ``n`` with, for ``m = 1, ..., n``,

    .. math::

        a_m = \\int_0^1 (m - 1 + y)^{\\alpha - 1} y \\, dy, \\qquad
        b_m = \\int_0^1 (m - 1 + y)^{\\alpha - 1} (1 - y) \\, dy.

    In physical time both scale with ``dt^alpha``. For ``m >= 2`` the integrand
    is smooth and a 20-point Gauss-Legendre rule is exact to rounding; the
    usual closed forms (differences of ``m^(alpha+1)``) cancel badly for large
    ``m``.
    """
    a = np.empty(n)
    b = np.empty(n)
    a[0] = 1.0 / (alpha + 1.0)
    b[0] = 1.0 / (alpha * (alpha + 1.0))
    if n > 1:
        m = np.arange(2, n + 1, dtype=np.float64)
        kernel = (m[:, None] - 1.0 + _GL_NODES[None, :]) ** (alpha - 1.0)
        a[1:] = kernel @ (_GL_WEIGHTS * _GL_NODES)
        b[1:] = kernel @ (_GL_WEIGHTS * (1.0 - _GL_NODES))
    return a, b


def l1_weights(alpha: float, n: int) -> np.ndarray:
    """L1 coefficients ``(m + 1)^(1 - alpha) - m^(1 - alpha)``, ``m = 0, ..., n - 1``."""
    m = np.arange(n, dtype=np.float64)
    c = np.empty(n)
    c[0] = 1.0
    p = 1.0 - alpha
    c[1:] = m[1:] ** p * np.expm1(p * np.log1p(1.0 / m[1:]))
    return c


def hat_convolution(a: np.ndarray, b: np.ndarray, values: np.ndarray) -> np.ndarray:
    """``sum_{m=1}^{k} a_m v_{k-m} + b_m v_{k-m+1}`` for every ``k``.

    ``a`` and ``b`` hold ``m = 1, ..., n`` either as 1d arrays shared by all
    columns of ``values`` or as ``(n, dim)`` arrays with one kernel per column.
    Row 0 of the result is zero.
    """
    values = np.asarray(values)
    npts, dim = values.shape
    n = npts - 1
    dtype = np.result_type(values, a, b)
    out = np.zeros((npts, dim), dtype=dtype)
    if n == 0:
        return out

    a = np.asarray(a)
    b = np.asarray(b)
    for j in range(dim):
        aj = a if a.ndim == 1 else a[:, j]
        bj = b if b.ndim == 1 else b[:, j]
        v = values[:, j]
        # sum_m a_m v_{k-m}
        ka = np.concatenate([[0.0], aj])
        conv_a = np.convolve(ka, v)[: n + 1]
        # sum_{i=0}^{k-1} b_{i+1} v_{k-i} = (b * v)[k] - b_{k+1} v_0
        kb = np.concatenate([bj, [0.0]])
        conv_b = np.convolve(kb, v)[: n + 1] - kb * v[0]
        out[:, j] = conv_a + conv_b
    return out


# }}}

# {{{ operators


def riemann_liouville_integral(alpha: float, u: SampledFunction) -> SampledFunction:
    """Product-integration approximation of ``J^alpha u`` at every grid point.

    Exact (to rounding) when ``u`` is piecewise linear on the grid.
    """
    alpha = check_order(alpha)
    n = u.grid.n_steps
    a, b = product_weights(alpha, n)
    scale = u.grid.dt**alpha / math.gamma(alpha)
    return SampledFunction(u.grid, scale * hat_convolution(a, b, u.values))


def caputo_derivative(alpha: float, u: SampledFunction) -> SampledFunction:
    """L1 approximation of the Caputo derivative at ``t_1, ..., t_n``.

    The value at ``t_0`` is a copy of the value at ``t_1``. For ``alpha = 1``
    the scheme reduces to the backward difference.
    """
    alpha = check_order(alpha)
    grid = u.grid
    n = grid.n_steps
    diffs = np.diff(u.values, axis=0)
    c = l1_weights(alpha, n)

    out = np.empty(u.values.shape, dtype=np.result_type(u.values, float))
    for j in range(u.dim):
        out[1:, j] = np.convolve(c, diffs[:, j])[:n]
    out[1:] *= grid.dt ** (-alpha) / math.gamma(2.0 - alpha)
    out[0] = out[1]
    return SampledFunction(grid, out)


def _max_norm(values: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(values, axis=1)))


def inversion_residual(alpha: float, u: SampledFunction) -> float:
    """``max_k |(J^alpha D^alpha u)(t_k) - (u(t_k) - u(0))|``."""
    composed = riemann_liouville_integral(alpha, caputo_derivative(alpha, u))
    return _max_norm(composed.values - (u.values - u.values[0]))


# }}}
