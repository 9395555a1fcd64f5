"""
Special functions used by the closed forms

Generalized Laguerre polynomials by upward recurrence, log-gamma and the
oscillator normalization constant. All functions are pure and accept scalars
or numpy arrays for the argument x.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Union

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from config.settings import Settings
from dirac.errors import DomainError

ArrayLike = Union[float, NDArray[np.float64]]


@dataclass(frozen=True)
class LaguerreParams:
    """
    Degree and order of a generalized Laguerre polynomial L_n^a

    Attributes:
        n: Degree, nonnegative
        a: Order (superscript); orthogonality integrals need a > −1
    """
    n: int
    a: float

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"Laguerre degree must be nonnegative, got n={self.n}")
        if self.n > Settings.LAGUERRE_MAX_DEGREE:
            raise DomainError(
                f"Laguerre degree {self.n} above supported maximum {Settings.LAGUERRE_MAX_DEGREE}"
            )

    def check_weight(self):
        """Raise unless the weight x^a e^{−x} is integrable"""
        if self.a <= -1.0:
            raise DomainError(f"normalization integrals need a > -1, got a={self.a}")


def laguerre(n: int, a: float, x: ArrayLike) -> ArrayLike:
    """
    Evaluate L_n^a(x) by the three-term recurrence

    Accuracy degrades for large n when x sits near the turning point, which
    is why the degree is capped at Settings.LAGUERRE_MAX_DEGREE.

    Args:
        n: Degree
        a: Order
        x: Argument (scalar or array)

    Returns:
        L_n^a(x) with the shape of x
    """
    LaguerreParams(n, a)
    x_arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x_arr)):
        raise DomainError("Laguerre argument must be finite")

    previous = np.ones_like(x_arr)
    if n == 0:
        return previous if x_arr.ndim else float(previous)

    current = 1.0 + a - x_arr
    for k in range(2, n + 1):
        previous, current = current, ((2 * k - 1 + a - x_arr) * current - (k - 1 + a) * previous) / k

    return current if x_arr.ndim else float(current)


def laguerre_derivative(n: int, a: float, x: ArrayLike) -> ArrayLike:
    """d/dx L_n^a(x) = −L_{n−1}^{a+1}(x), zero for n = 0"""
    if n == 0:
        x_arr = np.asarray(x, dtype=np.float64)
        zeros = np.zeros_like(x_arr)
        return zeros if x_arr.ndim else 0.0
    return -laguerre(n - 1, a + 1.0, x)


def log_gamma(x: float) -> float:
    """
    ln Γ(x) for x > 0

    Args:
        x: Positive argument

    Returns:
        Natural logarithm of the gamma function
    """
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return float(gammaln(x))


def norm_const_oscillator(n: int, kappa_or_order: float, lam: float) -> float:
    """
    a_n = √(2λ Γ(n+1) / Γ(n+κ+3/2)), evaluated in log space

    Normalizes the upper component alone. Pass κ for the κ = l branch; for
    the κ = −l−1 branch pass l, since both branches share the radial form.

    Args:
        n: Level index
        kappa_or_order: κ (or l) entering Γ(n+κ+3/2)
        lam: Oscillator strength λ > 0

    Returns:
        Normalization constant a_n
    """
    if n < 0:
        raise DomainError(f"level index must be nonnegative, got n={n}")
    if lam <= 0.0:
        raise DomainError(f"oscillator strength must be positive, got {lam}")
    shifted = n + kappa_or_order + 1.5
    if shifted <= 0.0:
        raise DomainError(f"n+κ+3/2 must be positive, got {shifted}")

    log_value = math.log(2.0 * lam) + log_gamma(n + 1.0) - log_gamma(shifted)
    return math.exp(0.5 * log_value)


def central_derivative(func, r: ArrayLike, order: int = 1) -> ArrayLike:
    """
    4th-order central difference of a radial function

    The step is relative to |r| so positive-domain functions are never
    sampled at r ≤ 0.

    Args:
        func: Callable accepting arrays
        r: Evaluation points
        order: 1 or 2

    Returns:
        First or second derivative estimate
    """
    r_arr = np.asarray(r, dtype=np.float64)
    h = Settings.FD_STEP * np.where(r_arr != 0.0, np.abs(r_arr), 1.0)
    f_m2, f_m1 = func(r_arr - 2 * h), func(r_arr - h)
    f_p1, f_p2 = func(r_arr + h), func(r_arr + 2 * h)
    if order == 1:
        return (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h)
    if order == 2:
        return (-f_m2 + 16.0 * f_m1 - 30.0 * func(r_arr) + 16.0 * f_p1 - f_p2) / (12.0 * h * h)
    raise ValueError(f"unsupported derivative order {order}")


class RadialFunction(ABC):
    """
    Radial evaluator with first and second derivatives

    Subclasses override the derivatives with closed forms where available;
    the defaults fall back to 4th-order central differences.
    """

    @abstractmethod
    def __call__(self, r: ArrayLike) -> ArrayLike:
        pass

    def derivative(self, r: ArrayLike) -> ArrayLike:
        return central_derivative(self, r, order=1)

    def second_derivative(self, r: ArrayLike) -> ArrayLike:
        return central_derivative(self, r, order=2)

    @property
    def analytic(self) -> bool:
        """True when derivative() is a closed form"""
        return type(self).derivative is not RadialFunction.derivative


class ZeroFunction(RadialFunction):
    """Identically vanishing component"""

    def __call__(self, r):
        r_arr = np.asarray(r, dtype=np.float64)
        return np.zeros_like(r_arr) if r_arr.ndim else 0.0

    def derivative(self, r):
        return self(r)

    def second_derivative(self, r):
        return self(r)

    def __repr__(self) -> str:
        return "ZeroFunction()"


@dataclass(frozen=True)
class ScaledFunction(RadialFunction):
    """factor · base(r)"""
    base: RadialFunction
    factor: float

    def __call__(self, r):
        return self.factor * self.base(r)

    def derivative(self, r):
        return self.factor * self.base.derivative(r)

    def second_derivative(self, r):
        return self.factor * self.base.second_derivative(r)


@dataclass(frozen=True)
class LaguerreFunction(RadialFunction):
    """
    c · y^p · exp(−y^k/2) · L_n^a(y^k) with y = scale·r or y = scale·e^{−decay·r}

    Every bound state of the oscillator class has this shape; the
    derivatives follow from the Laguerre differential equation, so no
    numerical differentiation is involved.

    Attributes:
        coeff: Overall constant c
        power: Exponent p of y
        k: Exponent of y inside the Gaussian-like factor and the polynomial
        n: Laguerre degree
        order: Laguerre order a
        scale: Linear scale (or prefactor of the exponential map)
        decay: Rate of the exponential map, 0 selects the linear map
    """
    coeff: float
    power: float
    k: float
    n: int
    order: float
    scale: float
    decay: float = 0.0

    def _coordinate(self, r):
        r_arr = np.asarray(r, dtype=np.float64)
        if self.decay == 0.0:
            y = self.scale * r_arr
            return y, np.full_like(y, self.scale), np.zeros_like(y)
        y = self.scale * np.exp(-self.decay * r_arr)
        return y, -self.decay * y, self.decay ** 2 * y

    def _profile(self, y):
        p, k, n, a = self.power, self.k, self.n, self.order
        t = y ** k
        poly = laguerre(n, a, t)
        poly_t = laguerre_derivative(n, a, t)
        # t² L″ from the Laguerre equation t L″ + (a+1−t) L′ + n L = 0
        t2_poly_tt = -t * ((a + 1.0 - t) * poly_t + n * poly)
        envelope = np.exp(-0.5 * t)

        bracket = (p - 0.5 * k * t) * poly + k * t * poly_t
        t_bracket_t = (-0.5 * k * t * poly + (p - 0.5 * k * t + k) * t * poly_t
                       + k * t2_poly_tt)

        g = y ** p * envelope * poly
        g_y = y ** (p - 1.0) * envelope * bracket
        g_yy = y ** (p - 2.0) * envelope * ((p - 1.0 - 0.5 * k * t) * bracket + k * t_bracket_t)
        return g, g_y, g_yy

    def __call__(self, r):
        y, _, _ = self._coordinate(r)
        g, _, _ = self._profile(y)
        return _shape_like(r, self.coeff * g)

    def derivative(self, r):
        y, y_r, _ = self._coordinate(r)
        _, g_y, _ = self._profile(y)
        return _shape_like(r, self.coeff * g_y * y_r)

    def second_derivative(self, r):
        y, y_r, y_rr = self._coordinate(r)
        _, g_y, g_yy = self._profile(y)
        return _shape_like(r, self.coeff * (g_yy * y_r ** 2 + g_y * y_rr))

    def rescaled(self, factor: float) -> "LaguerreFunction":
        """Same function multiplied by factor"""
        return replace(self, coeff=self.coeff * factor)


def _shape_like(r, values):
    return values if np.ndim(r) else float(values)


class CallableFunction(RadialFunction):
    """
    Adapter turning a plain callable into a RadialFunction

    Args:
        func: Callable evaluating the function
        first: Optional callable evaluating its derivative
    """

    def __init__(self, func, first=None):
        self._func = func
        self._first = first

    def __call__(self, r):
        return self._func(r)

    def derivative(self, r):
        if self._first is None:
            return central_derivative(self._func, r, order=1)
        return self._first(r)

    @property
    def analytic(self) -> bool:
        return self._first is not None

    def __repr__(self) -> str:
        return f"CallableFunction({self._func!r})"


def as_radial_function(func, first=None) -> RadialFunction:
    """Wrap func unless it already is a RadialFunction"""
    if isinstance(func, RadialFunction) and first is None:
        return func
    return CallableFunction(func, first)
