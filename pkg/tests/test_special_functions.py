from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import special

import oracles
from checks import OVERLAP_GRID, regime_overlap_error
from fracperiod.errors import DomainError, EvaluationOverflowError
from fracperiod.special_functions import (
    Regime,
    gamma,
    gauss_legendre_composite,
    log_abs_rgamma,
    mainardi_density,
    mittag_leffler,
    mittag_leffler_decay_check,
    rgamma,
    select_regime,
    subordination_identity_residual,
)

# values from tests/oracles.py (60-digit direct summation)
E_06_06_M37 = 0.021262278256366559365
E_05_1_M1 = 0.42758357615580700441
E_05_1_M10 = 0.05614099274382258588
PHI_03_1 = 0.39052334188638718059
PHI_07_3 = 0.0074514746826409527186

ALPHAS = (0.3, 0.5, 0.7, 0.9)


# {{{ gamma


def test_gamma_matches_scipy_on_wide_range():
    x = np.concatenate([np.linspace(-30.3, -0.05, 997), np.linspace(0.05, 170.0, 2000)])
    x = x[np.abs(x - np.round(x)) > 1e-6]
    ours = rgamma(x)
    ref = special.rgamma(x)
    assert np.max(np.abs(ours - ref) / np.abs(ref)) < 1e-14


def test_rgamma_is_exactly_zero_at_poles():
    poles = -np.arange(0, 40, dtype=float)
    assert np.all(rgamma(poles) == 0.0)
    logval, sign = log_abs_rgamma(poles)
    assert np.all(np.isneginf(logval)) and np.all(sign == 0.0)


@pytest.mark.parametrize("n", range(1, 15))
def test_gamma_integers(n):
    assert gamma(float(n)) == pytest.approx(math.factorial(n - 1), rel=2e-16)


def test_log_abs_rgamma_large_argument():
    x = np.array([200.0, 500.5, 1000.25])
    logval, sign = log_abs_rgamma(x)
    np.testing.assert_allclose(logval, -special.gammaln(x), rtol=1e-15)
    assert np.all(sign == 1.0)


def test_log_abs_rgamma_sign_on_negative_axis():
    x = np.array([-0.5, -1.5, -2.5, -3.5])
    _, sign = log_abs_rgamma(x)
    np.testing.assert_array_equal(sign, np.sign(special.gamma(x)))


# }}}

# {{{ mittag-leffler: documented examples


def test_ml_exponential():
    assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(2.718281828459045, rel=1e-15)


def test_ml_at_zero_is_rgamma_beta():
    assert mittag_leffler(0.0, 0.5, 0.5) == pytest.approx(0.5641895835477563, rel=1e-15)


def test_ml_cosine_zero():
    assert abs(mittag_leffler(-((math.pi / 2) ** 2), 2.0, 1.0)) < 1e-14


def test_ml_frozen_oracle_value():
    assert mittag_leffler(-3.7, 0.6, 0.6) == pytest.approx(E_06_06_M37, rel=1e-12)


@pytest.mark.parametrize("z,expected", [(-1.0, E_05_1_M1), (-10.0, E_05_1_M10)])
def test_ml_half_matches_oracle(z, expected):
    assert mittag_leffler(z, 0.5, 1.0) == pytest.approx(expected, rel=1e-13)


def test_ml_half_is_erfcx():
    # E_{1/2,1}(-x) = exp(x^2) erfc(x)
    x = np.linspace(0.0, 60.0, 601)
    ours = mittag_leffler(-x, 0.5, 1.0)
    np.testing.assert_allclose(ours, special.erfcx(x), rtol=1e-12)


def test_ml_real_input_gives_real_output():
    out = mittag_leffler(np.linspace(-40, 5, 10), 0.7, 1.0)
    assert out.dtype == np.float64
    assert isinstance(mittag_leffler(-3.0, 0.7), float)


def test_ml_complex_inside_series_disk():
    z = 3.0 + 4.0j
    # E_{1,1} = exp also holds for complex z through the series
    assert abs(mittag_leffler(z, 1.0, 1.0) - np.exp(z)) < 1e-11 * abs(np.exp(z))
    # E_{2,1}(z^2) = cosh(z)
    w = 1.0 + 2.0j
    assert abs(mittag_leffler(w * w, 2.0, 1.0) - np.cosh(w)) < 1e-12


def test_ml_complex_outside_series_disk_is_domain_error():
    with pytest.raises(DomainError):
        mittag_leffler(30.0 + 1.0j, 0.5)


def test_ml_complex_with_zero_imaginary_part_is_real():
    assert mittag_leffler(-2.0 + 0j, 0.5) == pytest.approx(special.erfcx(2.0), rel=1e-13)


def test_ml_overflow_for_large_positive_z():
    with pytest.raises(EvaluationOverflowError):
        mittag_leffler(2000.0, 0.5)


@pytest.mark.parametrize("alpha,beta", [(0.0, 1.0), (-1.0, 1.0), (0.5, 0.0), (0.5, -1.0)])
def test_ml_invalid_parameters(alpha, beta):
    with pytest.raises(DomainError):
        mittag_leffler(1.0, alpha, beta)


def test_ml_large_positive_argument_asymptotic():
    # E_{1/2,1}(x) = exp(x^2) erfc(-x)
    x = np.array([12.0, 20.0, 25.0])
    ref = np.exp(x * x) * special.erfc(-x)
    np.testing.assert_allclose(mittag_leffler(x, 0.5, 1.0), ref, rtol=1e-12)


# }}}

# {{{ regimes


def test_select_regime_thresholds():
    assert select_regime(-0.5, 0.5) is Regime.SERIES
    assert select_regime(-5.0, 0.5) is Regime.CONTOUR
    assert select_regime(-60.0, 0.5) is Regime.ASYMPTOTIC
    assert select_regime(3.0, 0.9) is Regime.SERIES


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("beta_kind", ["one", "alpha"])
def test_regime_overlap_agreement(alpha, beta_kind):
    beta = 1.0 if beta_kind == "one" else alpha
    worst, compared = regime_overlap_error(alpha, beta, OVERLAP_GRID)
    assert compared > 50
    assert worst <= 1e-7


def test_forced_regime_outside_validity_raises():
    with pytest.raises(DomainError):
        mittag_leffler(-5.0, 0.5, regime=Regime.ASYMPTOTIC)


@pytest.mark.parametrize("regime", [Regime.SERIES, Regime.CONTOUR])
def test_forced_regimes_reproduce_exponential(regime):
    x = np.arange(-9.5, 0.01, 0.5)
    if regime is Regime.SERIES:
        x = x[x >= -5.0]
    np.testing.assert_allclose(mittag_leffler(x, 1.0, 1.0, regime=regime), np.exp(x), rtol=1e-10)


# }}}

# {{{ invariants


@pytest.mark.parametrize("alpha", ALPHAS + (1.0,))
@pytest.mark.parametrize("beta", [0.3, 0.5, 1.0, 1.7, 2.5])
def test_value_at_zero(alpha, beta):
    assert mittag_leffler(0.0, alpha, beta) * math.gamma(beta) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_complete_monotonicity_spot_check(alpha):
    z = np.linspace(-80.0, 0.0, 801)
    e = mittag_leffler(z, alpha, 1.0)
    assert np.all(e > 0.0) and np.all(e <= 1.0)
    assert np.all(np.diff(e) >= 0.0)


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(0.3, 1.0), z=st.floats(-45.0, -0.01))
def test_matches_high_precision_oracle(alpha, z):
    # direct summation is only affordable while exp(|z|^(1/alpha)) stays moderate
    assume(abs(z) ** (1.0 / alpha) <= 150.0)
    terms = int(4.0 * abs(z) ** (1.0 / alpha) / alpha) + 80
    ref = float(oracles.ml_series(z, alpha, 1.0, terms=terms))
    assert mittag_leffler(z, alpha, 1.0) == pytest.approx(ref, rel=1e-10)


def test_decay_check_examples():
    grid = np.arange(0.0, 101.0)
    # E_{1/2,1}(-10) = erfcx(10) = 0.05614..., so the threshold must exceed it
    assert mittag_leffler_decay_check(0.5, grid, 1.0, 0.06)
    assert not mittag_leffler_decay_check(0.5, grid, 1.0, 0.05)
    assert mittag_leffler_decay_check(1.0, np.arange(0.0, 11.0), 1.0, 1e-3)
    assert not mittag_leffler_decay_check(0.5, [0.0], 1.0, 0.5)


# }}}

# {{{ mainardi


def test_mainardi_at_zero():
    assert mainardi_density(0.5, 0.0) == pytest.approx(0.5641895835477563, rel=1e-15)


def test_mainardi_half_is_gaussian():
    theta = np.linspace(0.0, 10.0, 201)
    ref = np.exp(-theta * theta / 4.0) / math.sqrt(math.pi)
    np.testing.assert_allclose(mainardi_density(0.5, theta), ref, rtol=1e-10)
    assert mainardi_density(0.5, 2.0) == pytest.approx(0.20755374871029736, rel=1e-13)


def test_mainardi_third_is_airy():
    theta = np.linspace(0.0, 10.0, 101)
    ref = 3.0 ** (2.0 / 3.0) * special.airy(theta / 3.0 ** (1.0 / 3.0))[0]
    np.testing.assert_allclose(mainardi_density(1.0 / 3.0, theta), ref, rtol=1e-10)


@pytest.mark.parametrize("alpha,theta,expected", [(0.3, 1.0, PHI_03_1), (0.7, 3.0, PHI_07_3)])
def test_mainardi_frozen_oracle(alpha, theta, expected):
    assert mainardi_density(alpha, theta) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_mainardi_nonnegative_and_normalized(alpha):
    theta = np.linspace(0.0, 10.0, 401)
    assert np.all(mainardi_density(alpha, theta) >= 0.0)
    nodes, weights = gauss_legendre_composite(0.0, 40.0, 4096)
    mass = float(np.dot(weights, mainardi_density(alpha, nodes)))
    assert 1.0 - 1e-5 <= mass <= 1.0 + 1e-14


@pytest.mark.parametrize("alpha", [0.0, 1.0, 1.5])
def test_mainardi_domain(alpha):
    with pytest.raises(DomainError):
        mainardi_density(alpha, 1.0)


def test_mainardi_negative_theta():
    with pytest.raises(DomainError):
        mainardi_density(0.5, -1.0)


@pytest.mark.parametrize(
    "alpha,z,n,tol",
    [(0.5, 0.0, 4096, 1e-6), (0.5, 1.0, 4096, 1e-6), (0.9, 5.0, 8192, 1e-5)],
)
def test_subordination_examples(alpha, z, n, tol):
    assert subordination_identity_residual(alpha, z, n) <= tol


def test_gauss_legendre_composite_integrates_polynomials():
    nodes, weights = gauss_legendre_composite(0.0, 2.0, 64)
    assert np.dot(weights, nodes**7) == pytest.approx(2.0**8 / 8.0, rel=1e-14)


# }}}
