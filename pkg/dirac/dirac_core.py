"""
Transformed radial Dirac equation

The problem is fixed by (α, κ, ρ) and the odd component W(r); the even
component follows from the gauge fixing V = (S/α)(W + κ/r). With
G = κ/r + W and A = −S/α + C·G the first-order system reads

    (C + 2αS·G) φ + α(A − d/dr) θ = ε φ
    α(A + d/dr) φ − C θ           = ε θ

Eliminating θ gives the Schrödinger-like equation −φ″ + F φ = 0.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from config.settings import Settings
from dirac.errors import DomainError, InvalidBranchError, SingularConfigurationError
from dirac.specialfn import ArrayLike, RadialFunction, as_radial_function

logger = logging.getLogger(__name__)


class OddPotential(ABC):
    """Odd radial component W(r) with its analytic derivative"""

    @abstractmethod
    def value(self, r: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def derivative(self, r: ArrayLike) -> ArrayLike:
        pass

    @property
    def singular_at_origin(self) -> bool:
        return False

    @abstractmethod
    def describe(self) -> str:
        """Human readable form, used in CLI output"""
        pass

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return self.value(r)


@dataclass(frozen=True)
class ZeroW(OddPotential):
    """W ≡ 0 (Coulomb class)"""

    def value(self, r):
        return np.zeros_like(np.asarray(r, dtype=np.float64)) if np.ndim(r) else 0.0

    def derivative(self, r):
        return self.value(r)

    def describe(self) -> str:
        return "0"


@dataclass(frozen=True)
class LinearW(OddPotential):
    """W = λ²r (Dirac-Oscillator)"""
    lam_sq: float

    def value(self, r):
        return self.lam_sq * np.asarray(r, dtype=np.float64) if np.ndim(r) else self.lam_sq * r

    def derivative(self, r):
        return np.full_like(np.asarray(r, dtype=np.float64), self.lam_sq) if np.ndim(r) else self.lam_sq

    def describe(self) -> str:
        return f"{self.lam_sq:g}*r"


@dataclass(frozen=True)
class ExponentialW(OddPotential):
    """W = coefficient · e^{−τr} (Morse class)"""
    coefficient: float
    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise DomainError(f"range parameter τ must be positive, got {self.tau}")

    def value(self, r):
        return self.coefficient * np.exp(-self.tau * np.asarray(r, dtype=np.float64))

    def derivative(self, r):
        return -self.tau * self.value(r)

    def describe(self) -> str:
        return f"{self.coefficient:g}*exp(-{self.tau:g}*r)"


@dataclass(frozen=True)
class PowerLawW(OddPotential):
    """W = coefficient · r^exponent (zero-energy class)"""
    coefficient: float
    exponent: float

    def value(self, r):
        return self.coefficient * np.asarray(r, dtype=np.float64) ** self.exponent

    def derivative(self, r):
        return self.coefficient * self.exponent * np.asarray(r, dtype=np.float64) ** (self.exponent - 1.0)

    @property
    def singular_at_origin(self) -> bool:
        return self.exponent < 0.0

    def describe(self) -> str:
        return f"{self.coefficient:g}*r^{self.exponent:g}"


@dataclass(frozen=True)
class RelativisticPotential:
    """
    Parameters of the transformed radial Dirac problem

    κ is a real number here so intermediate XPCT values are representable;
    use require_physical_kappa() where an integer channel is needed. The
    angle may sit outside (−π/2, π/2) to reach the C < 0 Coulomb branch, but
    C = 0 is always rejected.

    Attributes:
        alpha: Fine structure constant α > 0
        kappa: Spin-orbit coupling κ
        rho: Angle ρ with S = sin ρ, C = cos ρ
        w: Odd radial component
    """
    alpha: float
    kappa: float
    rho: float = 0.0
    w: OddPotential = field(default_factory=ZeroW)

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"α must be positive and finite, got {self.alpha}")
        if not math.isfinite(self.kappa):
            raise DomainError(f"κ must be finite, got {self.kappa}")
        if not (math.isfinite(self.rho) and abs(self.rho) <= math.pi):
            raise DomainError(f"ρ must lie in [−π, π], got {self.rho}")
        if abs(math.cos(self.rho)) < Settings.SINGULAR_THRESHOLD:
            raise SingularConfigurationError(
                f"C = cos ρ vanishes at ρ = {self.rho}; the gauge fixing degenerates"
            )

    @classmethod
    def from_sine(cls, alpha: float, kappa: float, sine: float, w: OddPotential = None,
                  branch: int = 1) -> "RelativisticPotential":
        """
        Build from S instead of ρ, picking C = ±√(1−S²) by branch

        Args:
            alpha: Fine structure constant
            kappa: Spin-orbit coupling
            sine: S = sin ρ, |S| < 1
            w: Odd component, ZeroW when omitted
            branch: +1 for C > 0, −1 for C < 0

        Returns:
            RelativisticPotential
        """
        if not abs(sine) < 1.0:
            raise SingularConfigurationError(f"|S| must be below 1, got {sine}")
        cosine = math.copysign(math.sqrt(1.0 - sine * sine), branch)
        return cls(alpha=alpha, kappa=kappa, rho=math.atan2(sine, cosine), w=w or ZeroW())

    @property
    def S(self) -> float:
        return math.sin(self.rho)

    @property
    def C(self) -> float:
        return math.cos(self.rho)

    @property
    def T(self) -> float:
        return math.tan(self.rho)

    @property
    def whole_line(self) -> bool:
        """True when nothing is singular at r = 0 and r may be negative"""
        return self.kappa == 0 and not self.w.singular_at_origin

    def require_physical_kappa(self):
        """Raise unless κ is a nonzero integer"""
        if self.kappa == 0 or self.kappa != int(self.kappa):
            raise InvalidBranchError(f"κ must be a nonzero integer, got {self.kappa}")

    def check_radius(self, r: ArrayLike):
        if not self.whole_line and np.any(np.asarray(r) <= 0.0):
            raise DomainError("radial argument must be positive")

    def superpotential(self, r: ArrayLike) -> ArrayLike:
        """G = κ/r + W"""
        r_arr = np.asarray(r, dtype=np.float64)
        centrifugal = 0.0 if self.kappa == 0 else self.kappa / r_arr
        return centrifugal + self.w.value(r_arr)

    def superpotential_derivative(self, r: ArrayLike) -> ArrayLike:
        """G′ = −κ/r² + W′"""
        r_arr = np.asarray(r, dtype=np.float64)
        centrifugal = 0.0 if self.kappa == 0 else -self.kappa / r_arr ** 2
        return centrifugal + self.w.derivative(r_arr)

    def coupling(self, r: ArrayLike) -> ArrayLike:
        """A = −S/α + C·G"""
        return -self.S / self.alpha + self.C * self.superpotential(r)

    def __str__(self) -> str:
        return (f"RelativisticPotential(α={self.alpha:g}, κ={self.kappa:g}, ρ={self.rho:g}, "
                f"W={self.w.describe()})")


def _scalar_or_array(r, values):
    return values if np.ndim(r) else float(values)


def gauge_fixed_even(pot: RelativisticPotential, r: ArrayLike) -> ArrayLike:
    """
    Even component from the gauge fixing condition

    Args:
        pot: Problem definition
        r: Radius (scalar or array)

    Returns:
        V(r) = (S/α)[W(r) + κ/r]
    """
    pot.check_radius(r)
    return _scalar_or_array(r, pot.S / pot.alpha * pot.superpotential(r))


@dataclass(frozen=True)
class EffectivePotentialSpec:
    """
    F(r) of −φ″ + F φ = 0 for fixed energy, kept term by term

    Attributes:
        potential: Problem definition
        energy: ε
    """
    potential: RelativisticPotential
    energy: float

    @property
    def energy_term(self) -> float:
        """(ε²−1)/α²"""
        return (self.energy ** 2 - 1.0) / self.potential.alpha ** 2

    def terms(self, r: ArrayLike) -> Dict[str, ArrayLike]:
        pot, eps = self.potential, self.energy
        pot.check_radius(r)
        r_arr = np.asarray(r, dtype=np.float64)
        kappa, S, C, alpha = pot.kappa, pot.S, pot.C, pot.alpha
        w, dw = pot.w.value(r_arr), pot.w.derivative(r_arr)
        inv_r = 0.0 if kappa == 0 else 1.0 / r_arr
        return {
            "centrifugal": C * kappa * (C * kappa + 1.0) * inv_r ** 2,
            "coulomb": 2.0 * kappa * S * eps / alpha * inv_r,
            "w_squared": C ** 2 * w ** 2,
            "w_energy": 2.0 * S * eps * w / alpha,
            "w_slope": -C * dw,
            "w_cross": 2.0 * kappa * C ** 2 * w * inv_r,
            "energy": -self.energy_term * np.ones_like(r_arr),
        }

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return _scalar_or_array(r, sum(self.terms(r).values()))

    def radial(self, r: ArrayLike) -> ArrayLike:
        """F without the energy constant; its eigenvalue is (ε²−1)/α²"""
        return _scalar_or_array(r, self(r) + self.energy_term)


def effective_potential(pot: RelativisticPotential, energy: float, r: ArrayLike) -> ArrayLike:
    """
    F(r) such that [−d²/dr² + F(r)]φ = 0

    Args:
        pot: Problem definition
        energy: ε
        r: Radius (scalar or array)

    Returns:
        C²G² − CG′ + (2Sε/α)G − (ε²−1)/α²
    """
    return EffectivePotentialSpec(pot, energy)(r)


def radial_potential(pot: RelativisticPotential, energy: float, r: ArrayLike) -> ArrayLike:
    """F + (ε²−1)/α², the operator whose eigenvalue with index n is (ε_n²−1)/α²"""
    return EffectivePotentialSpec(pot, energy).radial(r)


@dataclass(frozen=True)
class LowerComponent(RadialFunction):
    """
    θ = α/(C+ε) · (A + d/dr) φ

    The derivative uses φ″ of the upper component, so it is exact whenever
    the upper component provides analytic derivatives.
    """
    potential: RelativisticPotential
    energy: float
    upper: RadialFunction

    def __post_init__(self):
        if abs(self.potential.C + self.energy) < Settings.SINGULAR_THRESHOLD:
            raise SingularConfigurationError(
                f"C + ε vanishes (C={self.potential.C:g}, ε={self.energy:g})"
            )

    @property
    def factor(self) -> float:
        return self.potential.alpha / (self.potential.C + self.energy)

    def __call__(self, r):
        self.potential.check_radius(r)
        coupling = self.potential.coupling(r)
        values = self.factor * (coupling * self.upper(r) + self.upper.derivative(r))
        return _scalar_or_array(r, values)

    def derivative(self, r):
        pot = self.potential
        pot.check_radius(r)
        slope = pot.C * pot.superpotential_derivative(r)
        values = self.factor * (slope * self.upper(r) + pot.coupling(r) * self.upper.derivative(r)
                                + self.upper.second_derivative(r))
        return _scalar_or_array(r, values)


def lower_from_upper(pot: RelativisticPotential, energy: float, phi, phi_prime=None) -> LowerComponent:
    """
    Lower spinor component generated from the upper one

    Args:
        pot: Problem definition
        energy: ε, must satisfy C + ε ≠ 0
        phi: Upper component (RadialFunction or plain callable)
        phi_prime: Optional analytic derivative of phi; 4th-order central
            differences are used when neither this nor phi provides one

    Returns:
        LowerComponent evaluator
    """
    return LowerComponent(pot, energy, as_radial_function(phi, phi_prime))


def residual_rows(pot: RelativisticPotential, energy: float, phi: RadialFunction,
                  theta: RadialFunction, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    Pointwise residuals of both rows of the first-order system

    Args:
        pot: Problem definition
        energy: ε
        phi: Upper component
        theta: Lower component
        r: Evaluation points

    Returns:
        (row1, row2), zero for an exact solution
    """
    pot.check_radius(r)
    r_arr = np.asarray(r, dtype=np.float64)
    alpha, S, C = pot.alpha, pot.S, pot.C
    g = pot.superpotential(r_arr)
    coupling = pot.coupling(r_arr)
    upper, lower = phi(r_arr), theta(r_arr)

    row1 = (C + 2.0 * alpha * S * g - energy) * upper + alpha * (coupling * lower - theta.derivative(r_arr))
    row2 = alpha * (coupling * upper + phi.derivative(r_arr)) - (C + energy) * lower
    return row1, row2
