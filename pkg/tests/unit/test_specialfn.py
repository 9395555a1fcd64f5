# tests/unit/test_specialfn.py
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_genlaguerre, gamma

from dirac.errors import DomainError
from dirac.specialfn import (
    CallableFunction,
    LaguerreFunction,
    ScaledFunction,
    ZeroFunction,
    as_radial_function,
    central_derivative,
    laguerre,
    laguerre_derivative,
    log_gamma,
    norm_const_oscillator,
)


def test_laguerre_low_degrees():
    """L_0 = 1, L_1 = 1 + a − x and the tabulated L_2^{1/2}(1) = −1/8."""
    x = np.linspace(0.0, 5.0, 11)

    assert np.all(laguerre(0, 0.7, x) == 1.0)
    np.testing.assert_allclose(laguerre(1, 0.7, x), 1.7 - x, rtol=1e-14)
    assert laguerre(2, 0.5, 1.0) == pytest.approx(-0.125, abs=1e-15)
    assert isinstance(laguerre(3, 0.5, 2.0), float)


@pytest.mark.parametrize("n", [3, 10, 40])
@pytest.mark.parametrize("a", [-0.5, 0.5, 2.5])
def test_laguerre_matches_scipy(n, a):
    x = np.linspace(0.0, 20.0, 41)

    values = laguerre(n, a, x)
    expected = eval_genlaguerre(n, a, x)

    scale = np.max(np.abs(expected))
    np.testing.assert_allclose(values, expected, rtol=1e-8, atol=1e-10 * scale)


def test_laguerre_rejects_invalid_arguments():
    with pytest.raises(DomainError):
        laguerre(201, 0.5, 1.0)
    with pytest.raises(DomainError):
        laguerre(-1, 0.5, 1.0)
    with pytest.raises(DomainError):
        laguerre(2, 0.5, np.array([1.0, np.nan]))


def test_laguerre_derivative_matches_central_difference():
    x = np.linspace(0.5, 6.0, 12)

    analytic = laguerre_derivative(5, 1.5, x)
    numeric = central_derivative(lambda t: laguerre(5, 1.5, t), x)

    np.testing.assert_allclose(analytic, numeric, rtol=1e-8, atol=1e-9)
    assert laguerre_derivative(0, 1.5, 2.0) == 0.0


def test_laguerre_orthogonality():
    """∫ x^a e^{−x} L_n^a L_m^a dx = δ_nm Γ(n+a+1)/n!"""
    a = 0.5
    for n in range(0, 6):
        for m in range(0, 6):
            value, _ = quad(lambda x: x ** a * math.exp(-x) * laguerre(n, a, x) * laguerre(m, a, x),
                            0.0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
            expected = gamma(n + a + 1.0) / math.factorial(n) if n == m else 0.0
            assert value == pytest.approx(expected, abs=1e-8)


def test_log_gamma():
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert log_gamma(6.0) == pytest.approx(math.log(120.0), rel=1e-14)
    # no overflow far beyond the factorial range
    assert log_gamma(500.0) == pytest.approx(math.lgamma(500.0), rel=1e-14)

    for bad in (0.0, -1.0, -0.5):
        with pytest.raises(DomainError):
            log_gamma(bad)


def test_norm_const_oscillator_examples():
    assert norm_const_oscillator(0, 0, 1.0) == pytest.approx(math.sqrt(4.0 / math.sqrt(math.pi)), rel=1e-12)
    assert norm_const_oscillator(0, 0, 1.0) == pytest.approx(1.5023, abs=1e-4)
    assert norm_const_oscillator(0, 1, 1.0) == pytest.approx(math.sqrt(2.0 / math.gamma(2.5)), rel=1e-12)
    assert norm_const_oscillator(0, 1, 1.0) == pytest.approx(1.22658, abs=1e-5)
    # a_n scales like √λ
    assert norm_const_oscillator(3, 2, 4.0) == pytest.approx(2.0 * norm_const_oscillator(3, 2, 1.0), rel=1e-14)


def test_norm_const_oscillator_rejects_invalid_arguments():
    with pytest.raises(DomainError):
        norm_const_oscillator(-1, 0, 1.0)
    with pytest.raises(DomainError):
        norm_const_oscillator(0, 0, 0.0)
    with pytest.raises(DomainError):
        norm_const_oscillator(0, -2, 1.0)


@pytest.mark.parametrize("n,l", [(0, 0), (2, 0), (1, 3), (4, 1)])
def test_norm_const_normalizes_upper_component(n, l):
    """a_n(λr)^{l+1}e^{−λ²r²/2}L_n^{l+1/2}(λ²r²) has unit L² norm"""
    lam = 1.3
    phi = LaguerreFunction(coeff=norm_const_oscillator(n, l, lam), power=l + 1.0, k=2.0, n=n,
                           order=l + 0.5, scale=lam)

    value, _ = quad(lambda r: phi(r) ** 2, 0.0, np.inf, epsabs=1e-13, epsrel=1e-13, limit=400)

    assert value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("decay", [0.0, 1.0])
def test_laguerre_function_derivatives(decay):
    """Closed-form derivatives against 4th-order central differences."""
    # --- 1. Setup ---
    func = LaguerreFunction(coeff=0.8, power=1.7, k=1.0 if decay else 2.0, n=3, order=2.4,
                            scale=3.0 if decay else 1.1, decay=decay)
    r = np.linspace(0.3, 4.0, 30)

    # --- 2. Execution ---
    first = func.derivative(r)
    second = func.second_derivative(r)

    # --- 3. Assertion ---
    np.testing.assert_allclose(first, central_derivative(func, r, order=1), rtol=1e-7, atol=1e-9)
    np.testing.assert_allclose(second, central_derivative(func, r, order=2), rtol=1e-5, atol=1e-6)
    assert func.analytic


def test_laguerre_function_rescaled():
    func = LaguerreFunction(coeff=2.0, power=1.0, k=2.0, n=1, order=0.5, scale=1.0)

    doubled = func.rescaled(3.0)

    assert doubled.coeff == 6.0
    assert doubled(1.5) == pytest.approx(3.0 * func(1.5), rel=1e-15)


def test_radial_function_adapters():
    wrapped = CallableFunction(np.sin)
    exact = CallableFunction(np.sin, np.cos)
    r = np.linspace(0.1, 2.0, 5)

    assert not wrapped.analytic
    assert exact.analytic
    np.testing.assert_allclose(wrapped.derivative(r), np.cos(r), rtol=1e-9)
    np.testing.assert_allclose(exact.derivative(r), np.cos(r), rtol=1e-15)

    scaled = ScaledFunction(exact, -2.0)
    np.testing.assert_allclose(scaled.derivative(r), -2.0 * np.cos(r), rtol=1e-15)

    zero = ZeroFunction()
    assert zero(1.0) == 0.0
    assert np.all(zero.second_derivative(r) == 0.0)

    assert as_radial_function(exact) is exact
    assert isinstance(as_radial_function(np.sin), CallableFunction)
