"""Mittag-Leffler function, Mainardi density and the Gamma function.

The Mittag-Leffler function

.. math::

    E_{\\alpha,\\beta}(z) = \\sum_{n \\ge 0} \\frac{z^n}{\\Gamma(\\alpha n + \\beta)}

is evaluated with one of three algorithms (:class:`Regime`):

* ``SERIES``: direct summation with Neumaier compensation. Used for real
  ``-1 <= z <= 10`` (while the series peaks early enough) and for complex
  ``|z| <= 10``. When the largest term dwarfs the sum, the summation is
  repeated in extended precision with :mod:`mpmath`.
* ``CONTOUR``: inversion of the Laplace transform
  ``s^(alpha - beta) / (s^alpha - z)`` on a Weideman-Trefethen parabola.
  Used for real ``-50 < z < -1``.
* ``ASYMPTOTIC``: the algebraic expansion in ``1/z`` (``K = 10`` terms), plus
  the exponential term ``z^((1-beta)/alpha) exp(z^(1/alpha)) / alpha`` when
  ``|arg z| <= alpha pi``. Used for real ``z <= -50`` and large positive ``z``.

Double precision series summation is useless for moderately large negative
``z``: for ``alpha = 0.3`` and ``z = -10`` the largest term is about ``1e935``.
"""

from __future__ import annotations

import enum
import functools
import math
from typing import Any

import mpmath
import numpy as np

from fracperiod.errors import DomainError, EvaluationOverflowError

# {{{ gamma

# Rational Lanczos approximation with g = 6.0246800407767296 and 13 terms
# (the set used by CPython's math module), good to a few ulp for x >= 0.5.
_LANCZOS_G = 6.024680040776729583740234375
_LANCZOS_G_MINUS_HALF = 5.524680040776729583740234375
_LANCZOS_NUM = np.array([
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
])
_LANCZOS_DEN = np.array([
    0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0,
    13339535.0, 2637558.0, 357423.0, 32670.0, 1925.0, 66.0, 1.0,
])
_LOG_PI = math.log(math.pi)
#: above this Gamma(x) overflows the direct product form
_GAMMA_DIRECT_MAX = 170.0
#: (n - 1)! for n = 1, ..., 23, all exact in double precision
_FACTORIALS = np.array([float(math.factorial(n)) for n in range(23)])


def _lanczos_sum(x: np.ndarray) -> np.ndarray:
    # Horner in x for small x, in 1/x for large x (both stay well conditioned)
    small = x < 5.0
    num = np.zeros_like(x)
    den = np.zeros_like(x)
    xs = np.where(small, x, 1.0)
    for c, d in zip(_LANCZOS_NUM[::-1], _LANCZOS_DEN[::-1]):
        num = num * xs + c
        den = den * xs + d
    big_num = np.zeros_like(x)
    big_den = np.zeros_like(x)
    y = np.where(small, 1.0, 1.0 / np.where(small, 1.0, x))
    for c, d in zip(_LANCZOS_NUM, _LANCZOS_DEN):
        big_num = big_num * y + c
        big_den = big_den * y + d
    return np.where(small, num / den, big_num / big_den)


def _gamma_pos(x: np.ndarray) -> np.ndarray:
    # Gamma(x) for 0.5 <= x <= 170
    y = x + _LANCZOS_G_MINUS_HALF
    # z corrects for the rounding error in y
    q = np.where(x > _LANCZOS_G_MINUS_HALF, y - x, y - _LANCZOS_G_MINUS_HALF)
    z = np.where(x > _LANCZOS_G_MINUS_HALF, q - _LANCZOS_G_MINUS_HALF, q - x)
    z = z * _LANCZOS_G / y
    r = _lanczos_sum(x) / np.exp(y)
    r = r + z * r
    half = y ** (0.5 * x - 0.25)
    return r * half * half


def _lgamma_pos(x: np.ndarray) -> np.ndarray:
    # log Gamma(x) for x >= 0.5
    return np.log(_lanczos_sum(x)) - _LANCZOS_G + (x - 0.5) * (
        np.log(x + _LANCZOS_G_MINUS_HALF) - 1.0
    )


def _sinpi(x: np.ndarray) -> np.ndarray:
    # sin(pi x) with exact zeros at the integers; the argument is folded into
    # [-1/2, 1/2] (exactly, by Sterbenz) before multiplying by pi
    r = x - 2.0 * np.round(0.5 * x)  # in [-1, 1]
    a = np.abs(r)
    a = np.where(a > 0.5, 1.0 - a, a)
    return np.copysign(np.sin(np.pi * a), r) * (a != 0.0)


def log_abs_rgamma(x: Any) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(log|1/Gamma(x)|, sign(1/Gamma(x)))`` for real ``x``.

    At the poles ``x = 0, -1, -2, ...`` the sign is 0 and the log is ``-inf``.
    """
    x = np.asarray(x, dtype=np.float64)
    logval = np.empty_like(x)
    sign = np.ones_like(x)

    pos = x >= 0.5
    if np.any(pos):
        logval[pos] = -_lgamma_pos(x[pos])

    neg = ~pos
    if np.any(neg):
        # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        xn = x[neg]
        s = _sinpi(xn)
        with np.errstate(divide="ignore"):
            logval[neg] = np.log(np.abs(s)) + _lgamma_pos(1.0 - xn) - _LOG_PI
        sign[neg] = np.sign(s)

    return logval, sign


def rgamma(x: Any) -> Any:
    """Reciprocal Gamma function, exactly zero at the poles of Gamma."""
    xa = np.asarray(x, dtype=np.float64)
    out = np.empty_like(xa)

    small = (xa >= 0.5) & (xa <= _GAMMA_DIRECT_MAX)
    if np.any(small):
        # the product form is more accurate than exp(-lgamma)
        xs = xa[small]
        g = _gamma_pos(xs)
        exact = (xs == np.round(xs)) & (xs <= len(_FACTORIALS))
        g[exact] = _FACTORIALS[xs[exact].astype(np.int64) - 1]
        out[small] = 1.0 / g

    neg = xa < 0.5
    if np.any(neg):
        xn = xa[neg]
        out[neg] = _sinpi(xn) / (math.pi * rgamma(1.0 - xn))

    big = xa > _GAMMA_DIRECT_MAX
    if np.any(big):
        lr, _ = log_abs_rgamma(xa[big])
        out[big] = np.exp(lr)

    return out if out.ndim else float(out)


def gamma(x: Any) -> Any:
    with np.errstate(divide="ignore"):
        return 1.0 / np.asarray(rgamma(x)) if np.ndim(x) else 1.0 / rgamma(x)


# }}}

# {{{ mittag-leffler


class Regime(enum.Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    CONTOUR = "contour"


#: radius of the series regime for complex arguments
SERIES_RADIUS = 10.0
#: real z below -ASYMPTOTIC_THRESHOLD use the asymptotic expansion
ASYMPTOTIC_THRESHOLD = 50.0
#: real z in [-NEGATIVE_SERIES_RADIUS, 0] use the series
NEGATIVE_SERIES_RADIUS = 1.0

SERIES_MAX_TERMS = 1000
ASYMPTOTIC_TERMS = 10
CONTOUR_NODES = 16

_EPS = np.finfo(np.float64).eps
_MAX_LOG = 709.0


def _check_params(alpha: float, beta: float) -> tuple[float, float]:
    alpha = float(alpha)
    beta = float(beta)
    if not (0.0 < alpha <= 1.0 or alpha == 2.0):
        raise DomainError(f"alpha must lie in (0, 1] (or equal 2): got {alpha}")
    if not beta > 0.0:
        raise DomainError(f"beta must be positive: got {beta}")
    return alpha, beta


def _series_peak(absz: float, alpha: float) -> float:
    # index of the largest term |z|^n / Gamma(alpha n + beta)
    return absz ** (1.0 / alpha) / alpha if absz > 0 else 0.0


def _series_terms_needed(absz: float, alpha: float, beta: float, rtol: float = 1.0e-24) -> int:
    """First index past the peak where ``|z|^n / Gamma(alpha n + beta) < rtol``,
    or ``SERIES_MAX_TERMS + 1`` if the budget is exceeded."""
    if absz == 0.0:
        return 1
    logz = math.log(absz)
    logtol = math.log(rtol)
    peak = _series_peak(absz, alpha)
    for n in range(1, SERIES_MAX_TERMS + 1):
        if n > peak and n * logz - math.lgamma(alpha * n + beta) < logtol:
            return n
    return SERIES_MAX_TERMS + 1


@functools.lru_cache(maxsize=64)
def _mp_rgamma_table(alpha: float, beta: float, digits: int) -> tuple:
    # 1/Gamma(alpha n + beta), n = 0..SERIES_MAX_TERMS, at ``digits`` digits;
    # shared by every point evaluated with the same parameters
    with mpmath.workdps(digits):
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        return tuple(mpmath.rgamma(a * n + b) for n in range(SERIES_MAX_TERMS + 1))


@functools.lru_cache(maxsize=64)
def _log_rgamma_table(alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(SERIES_MAX_TERMS + 1, dtype=np.float64)
    lr, sg = log_abs_rgamma(alpha * n + beta)
    lr.setflags(write=False)
    sg.setflags(write=False)
    return lr, sg


def _series_mp(z: complex, alpha: float, beta: float) -> complex:
    """Extended-precision series with enough digits that the cancellation
    between the largest term and the sum still leaves 25 significant digits."""
    absz = abs(z)
    peak = _series_peak(absz, alpha)
    lrs, _ = _log_rgamma_table(alpha, beta)
    n = np.arange(SERIES_MAX_TERMS + 1)
    with np.errstate(divide="ignore"):
        log10_max = float(np.max(n * math.log(absz) + lrs)) / math.log(10.0) if absz > 0 else 0.0
    # assume |E| >= 1e-5 at first and verify below
    digits = int(math.ceil(max(log10_max, 0.0))) + 30
    for _ in range(4):
        digits = 20 * int(math.ceil(digits / 20.0))  # coarse steps keep the cache small
        table = _mp_rgamma_table(alpha, beta, digits)
        with mpmath.workdps(digits):
            zz = mpmath.mpf(z.real) if z.imag == 0.0 else mpmath.mpc(z)
            total = +table[0]
            power = mpmath.mpf(1)
            tol = mpmath.mpf(10) ** -20
            for k in range(1, SERIES_MAX_TERMS + 1):
                power *= zz
                term = power * table[k]
                total += term
                if k > peak and abs(term) <= tol * abs(total):
                    break
            else:
                raise DomainError(
                    f"Mittag-Leffler series did not converge in {SERIES_MAX_TERMS} terms "
                    f"at |z| = {absz:.6g} (alpha = {alpha})"
                )
            if total == 0:
                return 0j
            lost = log10_max - float(mpmath.log10(abs(total)))
            if digits - lost >= 25:
                return complex(total)
            digits = int(math.ceil(lost)) + 30
    return complex(total)


def _series(z: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Compensated series summation, vectorized over ``z`` (real or complex)."""
    z = np.asarray(z)
    iscomplex = np.iscomplexobj(z)
    absz = np.abs(z)
    peak = _series_peak(float(np.max(absz, initial=0.0)), alpha)

    r0 = rgamma(beta)
    total = np.full(z.shape, r0, dtype=z.dtype)
    comp = np.zeros_like(total)
    maxterm = np.full(z.shape, abs(r0))

    nonzero = absz > 0
    with np.errstate(divide="ignore"):
        logabs = np.where(nonzero, np.log(np.where(nonzero, absz, 1.0)), -np.inf)
    phase = np.exp(1j * np.angle(z)) if iscomplex else np.sign(z)

    lrs, sgs = _log_rgamma_table(alpha, beta)
    power_phase = np.ones_like(total)
    for n in range(1, SERIES_MAX_TERMS + 1):
        power_phase = power_phase * phase
        with np.errstate(under="ignore"):
            term = power_phase * (sgs[n] * np.exp(n * logabs + lrs[n]))

        # Neumaier summation
        t = total + term
        big = np.abs(total) >= np.abs(term)
        comp += np.where(big, (total - t) + term, (term - t) + total)
        total = t
        maxterm = np.maximum(maxterm, np.abs(term))

        if n > peak and np.all(np.abs(term) <= 0.25 * _EPS * np.abs(total + comp)):
            break
    else:
        raise DomainError(
            f"Mittag-Leffler series did not converge in {SERIES_MAX_TERMS} terms "
            f"for alpha = {alpha}, max |z| = {np.max(absz):.6g}"
        )

    result = total + comp

    # catastrophic cancellation: redo affected points in extended precision
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = maxterm / np.abs(result)
    bad = ~(cond * n * _EPS <= 1.0e-13)
    if np.any(bad):
        for idx in zip(*np.nonzero(bad)):
            val = _series_mp(complex(z[idx]), alpha, beta)
            result[idx] = val if iscomplex else val.real

    return result


def _contour(z: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """Laplace inversion on a parabola, for real ``z <= 0`` and ``alpha <= 1``."""
    m = CONTOUR_NODES
    h = 3.0 / m
    mu = math.pi * m / 12.0
    u = h * np.arange(m + 1)
    w = 1.0 + 1j * u
    s = mu * w * w
    weight = np.exp(s) * s ** (alpha - beta) * w
    sa = s**alpha

    z = np.asarray(z, dtype=np.float64)
    vals = weight / (sa - z[..., None])
    total = vals[..., 0] + 2.0 * np.sum(vals[..., 1:], axis=-1)
    return (h * mu / math.pi) * total.real


def _asymptotic(z: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    total = np.zeros_like(z)
    for k in range(ASYMPTOTIC_TERMS, 0, -1):
        total = total - z ** (-float(k)) * rgamma(beta - alpha * k)

    # exponential term, present when |arg z| <= alpha pi
    pos = z > 0
    if np.any(pos):
        zp = z[pos]
        expo = zp ** (1.0 / alpha)
        logmag = expo + (1.0 - beta) / alpha * np.log(zp) - math.log(alpha)
        if np.any(logmag > _MAX_LOG):
            raise EvaluationOverflowError(
                f"E_(alpha,beta)(z) overflows for z = {np.max(zp):.6g} (alpha = {alpha})"
            )
        total[pos] += zp ** ((1.0 - beta) / alpha) * np.exp(expo) / alpha
    if alpha == 1.0 and np.any(~pos):
        zn = z[~pos]
        total[~pos] += np.abs(zn) ** (1.0 - beta) * np.cos(math.pi * (1.0 - beta)) * np.exp(zn)

    return total


def select_regime(z: float, alpha: float) -> Regime:
    """Regime used by :func:`mittag_leffler` for a real argument ``z``."""
    if alpha == 2.0:
        return Regime.SERIES
    if z > 0.0:
        if z <= SERIES_RADIUS and z ** (1.0 / alpha) <= 50.0:
            return Regime.SERIES
        return Regime.ASYMPTOTIC
    if z >= -NEGATIVE_SERIES_RADIUS:
        return Regime.SERIES
    if z > -ASYMPTOTIC_THRESHOLD:
        return Regime.CONTOUR
    return Regime.ASYMPTOTIC


def _regime_masks(z: np.ndarray, alpha: float) -> dict[Regime, np.ndarray]:
    # vectorized select_regime
    if alpha == 2.0:
        return {Regime.SERIES: np.ones(z.shape, dtype=bool)}
    with np.errstate(invalid="ignore", over="ignore"):
        pos_series = (z > 0.0) & (z <= SERIES_RADIUS) & (np.abs(z) ** (1.0 / alpha) <= 50.0)
    series = pos_series | ((z <= 0.0) & (z >= -NEGATIVE_SERIES_RADIUS))
    contour = (z < -NEGATIVE_SERIES_RADIUS) & (z > -ASYMPTOTIC_THRESHOLD)
    return {
        Regime.SERIES: series,
        Regime.CONTOUR: contour,
        Regime.ASYMPTOTIC: ~(series | contour),
    }


def regime_is_valid(regime: Regime, z: float, alpha: float) -> bool:
    """Whether ``regime`` may be forced at the real point ``z``.

    The forced domains are wider than the automatic ones so that neighbouring
    regimes overlap and can be cross-checked.
    """
    if regime is Regime.SERIES:
        # the series must converge well inside the term budget
        return abs(z) <= SERIES_RADIUS and _series_terms_needed(abs(z), alpha, 1.0) <= SERIES_MAX_TERMS
    if regime is Regime.CONTOUR:
        return alpha <= 1.0 and z <= 0.0
    # with K = 10 terms the expansion is good to ~1e-8 from |z| = 30 for all
    # alpha <= 1 (alpha = 0.9 is the worst case; at |z| = 20 it is only 1e-6)
    if z > 0.0:
        return alpha <= 1.0 and (z > SERIES_RADIUS or z ** (1.0 / alpha) > 50.0)
    return alpha <= 1.0 and z <= -30.0


def mittag_leffler(
    z: Any, alpha: float, beta: float = 1.0, *, regime: Regime | None = None
) -> Any:
    """Evaluate the two-parameter Mittag-Leffler function ``E_{alpha,beta}(z)``.

    :arg z: real scalar or array, or a complex scalar/array with ``|z| <= 10``.
    :arg regime: force a specific algorithm (used for cross-validation); the
        default picks one per point with :func:`select_regime`.

    Real arguments give real results. Raises :class:`DomainError` for complex
    arguments outside the series disk and :class:`EvaluationOverflowError` for
    large positive ``z``.
    """
    alpha, beta = _check_params(alpha, beta)

    scalar = np.ndim(z) == 0
    za = np.atleast_1d(np.asarray(z))
    if np.iscomplexobj(za):
        if np.all(za.imag == 0.0):
            za = za.real.copy()
        else:
            if regime not in (None, Regime.SERIES) or np.any(np.abs(za) > SERIES_RADIUS):
                raise DomainError(
                    f"complex z is only supported in the series regime |z| <= {SERIES_RADIUS:g}"
                )
            out = _series(za.astype(np.complex128), alpha, beta)
            return complex(out[0]) if scalar else out
    za = za.astype(np.float64)

    if alpha == 1.0 and beta == 1.0 and regime is None:
        out = np.exp(za)
        return float(out[0]) if scalar else out

    out = np.empty_like(za)
    if regime is not None:
        for zi in za.flat:
            if not regime_is_valid(regime, float(zi), alpha):
                raise DomainError(f"regime {regime.value!r} is not valid at z = {zi:g}")
        groups = {regime: np.ones(za.shape, dtype=bool)}
    else:
        groups = _regime_masks(za, alpha)

    evaluators = {
        Regime.SERIES: _series,
        Regime.CONTOUR: _contour,
        Regime.ASYMPTOTIC: _asymptotic,
    }
    for r, mask in groups.items():
        if np.any(mask):
            out[mask] = evaluators[r](za[mask], alpha, beta)

    return float(out[0]) if scalar else out


def mittag_leffler_decay_check(
    alpha: float, grid: Any, a: float, tol: float, *, beta: float = 1.0
) -> bool:
    """Check that ``t -> E_{alpha,beta}(-a t^alpha)`` is nonincreasing on
    ``grid`` and ends below ``tol``."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1]: got {alpha}")
    t = np.asarray(grid, dtype=np.float64)
    values = np.atleast_1d(mittag_leffler(-a * t**alpha, alpha, beta))
    slack = 4.0 * _EPS * np.abs(values[:-1])
    monotone = bool(np.all(np.diff(values) <= slack))
    return monotone and bool(values[-1] < tol)


# }}}

# {{{ mainardi density

#: below this argument the Mainardi density is summed as a series
MAINARDI_SERIES_LIMIT = 1.0


def _mainardi_series(alpha: float, theta: np.ndarray) -> np.ndarray:
    total = np.full(theta.shape, rgamma(1.0 - alpha))
    tmax = float(np.max(theta, initial=0.0))
    if tmax == 0.0:
        return total
    with np.errstate(divide="ignore"):
        logt = np.log(theta)
    for n in range(1, SERIES_MAX_TERMS):
        lr, sg = log_abs_rgamma(1.0 - alpha - alpha * n)
        lfact = math.lgamma(n + 1)
        if sg != 0.0:
            with np.errstate(under="ignore"):
                term = (-1.0) ** n * float(sg) * np.exp(n * logt + float(lr) - lfact)
            total = total + term
        # reflection bound |1/Gamma(1 - alpha - alpha n)| <= Gamma(alpha (n + 1)) / pi
        # keeps near-pole terms from ending the loop early
        envelope = math.exp(n * math.log(tmax) + math.lgamma(alpha * (n + 1)) - lfact) / math.pi
        if envelope <= 0.25 * _EPS * float(np.min(np.abs(total))):
            return total
    raise DomainError("Mainardi series did not converge")


# composite Gauss-Legendre rule on [0, pi] for the Zolotarev integral
def _zolotarev_rule(panels: int = 64, order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


_ZOLOTAREV_NODES, _ZOLOTAREV_WEIGHTS = _zolotarev_rule()


def _zolotarev_a(alpha: float, phi: np.ndarray) -> np.ndarray:
    return (
        np.sin(alpha * phi) ** alpha * np.sin((1.0 - alpha) * phi) ** (1.0 - alpha) / np.sin(phi)
    ) ** (1.0 / (1.0 - alpha))


def _mainardi_integral(alpha: float, theta: np.ndarray) -> np.ndarray:
    # positive integrand: M(x) = x^(a/(1-a)) / (pi (1-a)) int_0^pi A e^(-x^(1/(1-a)) A)
    amp = _zolotarev_a(alpha, _ZOLOTAREV_NODES)
    scale = theta ** (1.0 / (1.0 - alpha))
    with np.errstate(over="ignore", under="ignore"):
        integrand = amp[None, :] * np.exp(-scale[:, None] * amp[None, :])
    integral = integrand @ _ZOLOTAREV_WEIGHTS
    return theta ** (alpha / (1.0 - alpha)) * integral / (math.pi * (1.0 - alpha))


def mainardi_density(alpha: float, theta: Any) -> Any:
    """Mainardi (Wright-type) probability density ``Phi_alpha(theta)``.

    Defined by the series ``sum_n (-theta)^n / (n! Gamma(1 - alpha - alpha n))``;
    its Laplace transform is ``E_{alpha,1}(-z)``. Small arguments are summed
    directly, larger ones use the Zolotarev integral representation, whose
    integrand is positive.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1): got {alpha}")
    scalar = np.ndim(theta) == 0
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    if np.any(th < 0.0):
        raise DomainError("theta must be nonnegative")

    out = np.empty_like(th)
    small = th <= MAINARDI_SERIES_LIMIT
    if np.any(small):
        out[small] = _mainardi_series(alpha, th[small])
    if np.any(~small):
        out[~small] = _mainardi_integral(alpha, th[~small])

    return float(out[0]) if scalar else out


def gauss_legendre_composite(a: float, b: float, n: int, order: int = 16):
    """Nodes and weights of a composite Gauss-Legendre rule with ``n`` nodes."""
    panels = max(1, n // order)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (
        (mid[:, None] + half[:, None] * x[None, :]).ravel(),
        (half[:, None] * w[None, :]).ravel(),
    )


#: upper truncation of the subordination integrals
THETA_MAX = 40.0


def subordination_identity_residual(
    alpha: float, z: float, quad_n: int, *, theta_max: float = THETA_MAX
) -> float:
    """Largest defect in the two Laplace identities of the Mainardi density.

    Compares quadratures of ``Phi(t) e^(-z t)`` and ``alpha t Phi(t) e^(-z t)``
    over ``[0, theta_max]`` with ``E_{alpha,1}(-z)`` and ``E_{alpha,alpha}(-z)``.
    """
    nodes, weights = gauss_legendre_composite(0.0, theta_max, quad_n)
    phi = mainardi_density(alpha, nodes)
    kernel = phi * np.exp(-z * nodes)
    first = float(np.dot(weights, kernel))
    second = float(np.dot(weights, alpha * nodes * kernel))
    return max(
        abs(first - mittag_leffler(-z, alpha, 1.0)),
        abs(second - mittag_leffler(-z, alpha, alpha)),
    )


# }}}
