"""
Closed-form catalog of the Dirac-Oscillator class

Dirac-Oscillator, Dirac-Coulomb, Dirac-Morse and the zero-energy power-law
family. Each constructor validates the class admissibility rules and returns
a SpinorSolution whose components carry analytic derivatives.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.integrate import quad

from config.settings import Settings
from dirac.dirac_core import (
    ExponentialW,
    LinearW,
    PowerLawW,
    RelativisticPotential,
    ZeroW,
    lower_from_upper,
)
from dirac.errors import (
    DiracError,
    DomainError,
    ExcludedParameterError,
    InvalidBranchError,
    LevelCountError,
    NoBoundStateError,
    NonNormalizableError,
    SupercriticalError,
)
from dirac.numerics import RadialGrid, quadrature_inner, sample
from dirac.specialfn import (
    LaguerreFunction,
    RadialFunction,
    ZeroFunction,
    log_gamma,
    norm_const_oscillator,
)

logger = logging.getLogger(__name__)

CLASSES = ("oscillator", "coulomb", "morse", "zero-energy")


@dataclass(frozen=True)
class SpinorSolution:
    """
    Bound state of one catalog class

    Attributes:
        class_tag: One of CLASSES
        n: Level index
        energy: ε
        upper: Upper component φ
        lower: Lower component θ
        potential: Problem the state solves
        params: Class parameters used to build the state
    """
    class_tag: str
    n: int
    energy: float
    upper: RadialFunction
    lower: RadialFunction
    potential: RelativisticPotential
    params: Dict[str, Any] = field(default_factory=dict)

    def upper_derivative(self, r):
        return self.upper.derivative(r)

    def norm(self, grid: RadialGrid) -> float:
        """∫φ² dr, the normalization the constants refer to"""
        values = sample(self.upper, grid)
        return quadrature_inner(values, values, grid)

    def spinor_norm(self, grid: RadialGrid) -> float:
        """∫(φ² + θ²) dr, reported as a diagnostic only"""
        upper, lower = sample(self.upper, grid), sample(self.lower, grid)
        return quadrature_inner(upper, upper, grid) + quadrature_inner(lower, lower, grid)

    def __str__(self) -> str:
        return f"{self.class_tag} n={self.n} ε={self.energy:.12g}"


@dataclass(frozen=True)
class SpectrumRow:
    """
    One row of a spectrum table

    Attributes:
        n: Level index
        energy: ε, None when undefined for this n
        status: "admitted" or the error tag of the violated rule
        reason: Message of the violated rule, empty when admitted
    """
    n: int
    energy: Optional[float]
    status: str = "admitted"
    reason: str = ""

    @property
    def admitted(self) -> bool:
        return self.status == "admitted"

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "energy": self.energy, "status": self.status, "reason": self.reason}


def _check_level(n: int):
    if n != int(n) or n < 0:
        raise DomainError(f"level index must be a nonnegative integer, got {n}")


def _check_positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


def _error_tag(error: DiracError) -> str:
    """NoBoundStateError -> no-bound-state"""
    name = type(error).__name__.replace("Error", "")
    return "".join("-" + c.lower() if c.isupper() else c for c in name).lstrip("-")


# ---------------------------------------------------------------------------
# Dirac-Oscillator
# ---------------------------------------------------------------------------

def oscillator_branch(kappa: int) -> int:
    """
    Orbital l of κ = l (κ ≥ 0) or κ = −l−1 (κ < 0)

    Args:
        kappa: Spin-orbit coupling

    Returns:
        l ≥ 0
    """
    if kappa != int(kappa):
        raise InvalidBranchError(f"κ = {kappa} is neither l nor −l−1 for an integer l ≥ 0")
    kappa = int(kappa)
    return kappa if kappa >= 0 else -kappa - 1


def oscillator_energy(n: int, kappa: int, lam: float, alpha: float) -> float:
    """ε_n = √(1 + 2α²λ²(2n + l + κ + 1))"""
    _check_level(n)
    l = oscillator_branch(kappa)
    return math.sqrt(1.0 + 2.0 * alpha ** 2 * lam ** 2 * (2 * n + l + kappa + 1))


def oscillator_solution(n: int, kappa: int, lam: float, alpha: float) -> SpinorSolution:
    """
    Dirac-Oscillator state, W = λ²r and ρ = 0

    Both branches share φ_n = a_n(λr)^{l+1}e^{−λ²r²/2}L_n^{l+1/2}(λ²r²). The
    lower component is a single Laguerre term in either branch and vanishes
    for n = 0 when κ = −l−1.

    Args:
        n: Level index
        kappa: κ = l or κ = −l−1
        lam: Oscillator strength λ > 0
        alpha: Fine structure constant

    Returns:
        SpinorSolution
    """
    oscillator_branch(kappa)
    return oscillator_state(n, int(kappa), lam, alpha)


def oscillator_state(n: int, kappa: float, lam: float, alpha: float) -> SpinorSolution:
    """
    Dirac-Oscillator state for real κ

    The XPCT references need non-integer κ̂. The branch follows the sign of
    κ + 1/2: l = κ above −1/2 and l = −κ − 1 below, so |κ + 1/2| = l + 1/2.
    """
    _check_level(n)
    _check_positive("λ", lam)
    _check_positive("α", alpha)
    upper_branch = kappa >= -0.5
    l = kappa if upper_branch else -kappa - 1.0
    eps = math.sqrt(1.0 + 2.0 * alpha ** 2 * lam ** 2 * (2 * n + l + kappa + 1.0))
    a_n = norm_const_oscillator(n, l, lam)

    upper = LaguerreFunction(coeff=a_n, power=l + 1.0, k=2.0, n=n, order=l + 0.5, scale=lam)
    if upper_branch:
        coeff = 2.0 * alpha * lam * a_n * (n + kappa + 0.5) / (eps + 1.0)
        lower = LaguerreFunction(coeff=coeff, power=float(kappa), k=2.0, n=n, order=kappa - 0.5, scale=lam)
    elif n == 0:
        lower = ZeroFunction()
    else:
        coeff = -2.0 * alpha * lam * a_n / (eps + 1.0)
        lower = LaguerreFunction(coeff=coeff, power=l + 2.0, k=2.0, n=n - 1, order=l + 1.5, scale=lam)

    pot = RelativisticPotential(alpha=alpha, kappa=kappa, rho=0.0, w=LinearW(lam ** 2))
    logger.debug(f"oscillator n={n} κ={kappa} λ={lam} α={alpha}: ε={eps:.15g}")
    return SpinorSolution("oscillator", n, eps, upper, lower, pot,
                          {"kappa": kappa, "l": l, "lam": lam, "alpha": alpha, "a_n": a_n})


# ---------------------------------------------------------------------------
# Dirac-Coulomb
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoulombParams:
    """
    Derived parameters of the Coulomb class

    Attributes:
        Z: Charge number
        kappa: Nonzero integer
        alpha: Fine structure constant
        branch: Sign of C
    """
    Z: float
    kappa: int
    alpha: float
    branch: int = 1

    def __post_init__(self):
        _check_positive("α", self.alpha)
        if self.kappa == 0 or self.kappa != int(self.kappa):
            raise InvalidBranchError(f"κ must be a nonzero integer, got {self.kappa}")
        if self.branch not in (1, -1):
            raise DomainError(f"branch must be +1 or −1, got {self.branch}")
        if abs(self.alpha * self.Z) >= abs(self.kappa):
            raise SupercriticalError(
                f"|αZ| = {abs(self.alpha * self.Z):g} ≥ |κ| = {abs(self.kappa)}: σ is imaginary"
            )

    @property
    def S(self) -> float:
        return self.alpha * self.Z / self.kappa

    @property
    def C(self) -> float:
        return self.branch * math.sqrt(1.0 - self.S ** 2)

    @property
    def sigma(self) -> float:
        """Relativistic angular momentum σ = κC"""
        return self.kappa * self.C

    @property
    def s(self) -> float:
        """Exponent with φ ∝ r^{s+1} at the origin, the root of s(s+1) = σ(σ+1) above −1/2"""
        return abs(self.sigma + 0.5) - 0.5

    def principal(self, n: int) -> float:
        """N = n + 1/2 + |σ+1/2|"""
        return n + 0.5 + abs(self.sigma + 0.5)

    def energy(self, n: int) -> float:
        _check_level(n)
        return 1.0 / math.sqrt(1.0 + (self.alpha * self.Z / self.principal(n)) ** 2)

    def binding(self, n: int) -> float:
        """(ε_n − 1)/α² without cancellation"""
        x = (self.alpha * self.Z / self.principal(n)) ** 2
        root = math.sqrt(1.0 + x)
        return -x / (root * (1.0 + root)) / self.alpha ** 2

    def mu(self, n: int) -> float:
        """Per-level scale μ_n = −2Zε_n/N"""
        # + 0.0 turns −0.0 (Z = 0) into 0.0
        return -2.0 * self.Z * self.energy(n) / self.principal(n) + 0.0

    def potential(self) -> RelativisticPotential:
        return RelativisticPotential.from_sine(self.alpha, self.kappa, self.S, ZeroW(), self.branch)


def coulomb_solution(n: int, kappa: int, Z: float, alpha: float, branch: int = 1) -> SpinorSolution:
    """
    Dirac-Coulomb state, W = 0 and S = αZ/κ

    φ_n = a_n(μ_n r)^{s+1}e^{−μ_n r/2}L_n^{2s+1}(μ_n r); θ_n follows from
    the lower-from-upper map with the analytic derivative of φ_n.

    Args:
        n: Level index
        kappa: Nonzero integer
        Z: Charge number, Z < 0 binds positive-energy states
        alpha: Fine structure constant
        branch: +1 (C > 0, default) or −1

    Returns:
        SpinorSolution
    """
    params = CoulombParams(Z, kappa, alpha, branch)
    eps = params.energy(n)
    mu = params.mu(n)
    if not mu > 0.0:
        raise NoBoundStateError(f"μ_{n} = {mu:g} ≤ 0: Z·ε must be negative for a bound state")

    s = params.s
    log_norm = math.log(mu) + log_gamma(n + 1.0) - log_gamma(n + 2.0 * s + 2.0) - math.log(2.0 * n + 2.0 * s + 2.0)
    a_n = math.exp(0.5 * log_norm)
    upper = LaguerreFunction(coeff=a_n, power=s + 1.0, k=1.0, n=n, order=2.0 * s + 1.0, scale=mu)
    pot = params.potential()
    lower = lower_from_upper(pot, eps, upper)

    logger.debug(f"coulomb n={n} κ={kappa} Z={Z} α={alpha}: σ={params.sigma:.12g} ε={eps:.15g}")
    return SpinorSolution("coulomb", n, eps, upper, lower, pot,
                          {"Z": Z, "kappa": kappa, "alpha": alpha, "branch": branch,
                           "sigma": params.sigma, "s": s, "mu": mu, "a_n": a_n})


def coulomb_nonrelativistic_limit(n: int, kappa: int, Z: float, alpha: float) -> float:
    """−Z²/(2N²), the α → 0 limit of (ε_n − 1)/α²"""
    return -Z ** 2 / (2.0 * CoulombParams(Z, kappa, alpha).principal(n) ** 2)


# ---------------------------------------------------------------------------
# Dirac-Morse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MorseParams:
    """
    Morse class parameters, κ = 0 and W = −(τλ²/2C)e^{−τr}

    Attributes:
        tau: Range parameter τ > 0
        rho: Angle ρ, C = cos ρ > 0
        lam: Strength λ > 0
        alpha: Fine structure constant
    """
    tau: float
    rho: float
    lam: float
    alpha: float

    def __post_init__(self):
        _check_positive("τ", self.tau)
        _check_positive("λ", self.lam)
        _check_positive("α", self.alpha)
        if not abs(self.rho) < 0.5 * math.pi:
            raise DomainError(f"ρ must lie in (−π/2, π/2), got {self.rho}")

    @property
    def C(self) -> float:
        return math.cos(self.rho)

    @property
    def T(self) -> float:
        return math.tan(self.rho)

    @property
    def n_max(self) -> int:
        """Largest n with nατC ≤ 1, i.e. ⌊√(1+T²)/(ατ)⌋"""
        return int(math.floor(1.0 / (self.C * self.alpha * self.tau) * (1.0 + 1e-14)))

    def angle(self, n: int) -> float:
        """φ_n = ρ − arcsin(nατC), principal branch"""
        _check_level(n)
        if n > self.n_max:
            raise LevelCountError(f"n = {n} exceeds n_max = {self.n_max}")
        return self.rho - math.asin(min(1.0, n * self.alpha * self.tau * self.C))

    def energy(self, n: int) -> float:
        return math.cos(self.angle(n))

    def exponent(self, n: int) -> float:
        """
        v_n = sin φ_n/(ατ) = Tε_n/(ατ) − n

        Snapped to 0 when Tε_n/(ατ) agrees with n to Settings.LEVEL_THRESHOLD_RTOL,
        so a ρ given to ten decimals still puts the threshold level at ε = 1.
        """
        v = math.sin(self.angle(n)) / (self.alpha * self.tau)
        return 0.0 if abs(v) <= Settings.LEVEL_THRESHOLD_RTOL * max(1, n) else v

    def admitted_levels(self) -> List[int]:
        return [n for n in range(self.n_max + 1) if self.exponent(n) > 0.0]

    def potential(self) -> RelativisticPotential:
        w = ExponentialW(-self.tau * self.lam ** 2 / (2.0 * self.C), self.tau)
        return RelativisticPotential(alpha=self.alpha, kappa=0, rho=self.rho, w=w)


def morse_solution(n: int, tau: float, rho: float, lam: float, alpha: float) -> SpinorSolution:
    """
    Dirac-Morse state

    φ_n = a_n y^{v}e^{−y/2}L_n^{2v}(y) with y = λ²e^{−τr} on the whole line,
    normalized by a_n² = 2τv·n!/Γ(n+2v+1).

    Args:
        n: Level index
        tau: Range parameter
        rho: Angle ρ
        lam: Strength λ
        alpha: Fine structure constant

    Returns:
        SpinorSolution
    """
    params = MorseParams(tau, rho, lam, alpha)
    eps = params.energy(n)
    v = params.exponent(n)
    if not v > 0.0:
        raise NonNormalizableError(f"v_{n} = {v:g} ≤ 0: level {n} is not normalizable")

    log_norm = math.log(2.0 * tau * v) + log_gamma(n + 1.0) - log_gamma(n + 2.0 * v + 1.0)
    a_n = math.exp(0.5 * log_norm)
    upper = LaguerreFunction(coeff=a_n, power=v, k=1.0, n=n, order=2.0 * v, scale=lam ** 2, decay=tau)
    pot = params.potential()
    lower = lower_from_upper(pot, eps, upper)

    logger.debug(f"morse n={n} τ={tau} ρ={rho} λ={lam} α={alpha}: ε={eps:.15g} v={v:.12g}")
    return SpinorSolution("morse", n, eps, upper, lower, pot,
                          {"tau": tau, "rho": rho, "lam": lam, "alpha": alpha, "v": v,
                           "n_max": params.n_max, "a_n": a_n})


# ---------------------------------------------------------------------------
# Zero-energy power law
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroEnergyParams:
    """
    Zero-energy family, W = (βλ²/2)r^{β−1}, S = 0 and ε = 1

    Attributes:
        beta: Exponent β, finite and not in {0, 1, 2}
        lam: Strength λ > 0
        l: Orbital quantum number
    """
    beta: float
    lam: float
    l: int

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta in (0.0, 1.0, 2.0):
            raise ExcludedParameterError(f"β = {self.beta} is excluded from the zero-energy family")
        _check_positive("λ", self.lam)
        if self.l != int(self.l) or self.l < 0:
            raise DomainError(f"l must be a nonnegative integer, got {self.l}")

    @property
    def kappa(self) -> int:
        """κ = l for β < 0, κ = −l−1 for β > 0"""
        return int(self.l) if self.beta < 0 else -int(self.l) - 1

    @property
    def mu(self) -> float:
        """μ = −1/2 + 1/β"""
        return -0.5 + 1.0 / self.beta

    @property
    def scale(self) -> float:
        return self.lam ** (2.0 / self.beta)

    def norm_squared_closed_form(self) -> float:
        """∫(y^{−κ}e^{−y^β/2})² dr = λ^{−2/β}Γ((1−2κ)/β)/|β|"""
        shape = (1.0 - 2.0 * self.kappa) / self.beta
        if not shape > 0.0:
            raise NonNormalizableError(
                f"β = {self.beta}, l = {self.l}: r^{-self.kappa} tail is not square integrable"
            )
        return math.exp(log_gamma(shape)) / (self.scale * abs(self.beta))

    def potential(self, alpha: float) -> RelativisticPotential:
        w = PowerLawW(0.5 * self.beta * self.lam ** 2, self.beta - 1.0)
        return RelativisticPotential(alpha=alpha, kappa=self.kappa, rho=0.0, w=w)


def zero_energy_solution(l: int, beta: float, lam: float, alpha: float = 1.0) -> SpinorSolution:
    """
    Zero-energy state, ε = 1 and n = 0

    φ_κ = a_κ(λ^{2/β}r)^{−κ}e^{−λ²r^β/2} equals e^{−∫G}, so (G + d/dr)φ_κ = 0
    and the lower component vanishes identically. a_κ comes from adaptive
    quadrature and is checked against the gamma-function closed form.

    Args:
        l: Orbital quantum number
        beta: Exponent β
        lam: Strength λ
        alpha: Fine structure constant (does not enter φ)

    Returns:
        SpinorSolution
    """
    params = ZeroEnergyParams(beta, lam, l)
    _check_positive("α", alpha)
    closed_form = params.norm_squared_closed_form()

    shape = LaguerreFunction(coeff=1.0, power=-float(params.kappa), k=beta, n=0, order=0.0, scale=params.scale)
    numeric, error = quad(lambda r: shape(r) ** 2, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    if abs(numeric - closed_form) > 1e-8 * closed_form:
        logger.warning(f"zero-energy norm by quadrature {numeric:.15g} differs from closed form {closed_form:.15g}")

    a_kappa = 1.0 / math.sqrt(numeric)
    upper = shape.rescaled(a_kappa)
    pot = params.potential(alpha)
    logger.debug(f"zero-energy β={beta} l={l} λ={lam}: κ={params.kappa} a={a_kappa:.15g}")
    return SpinorSolution("zero-energy", 0, 1.0, upper, ZeroFunction(), pot,
                          {"beta": beta, "lam": lam, "l": l, "kappa": params.kappa,
                           "mu": params.mu, "alpha": alpha, "a_kappa": a_kappa,
                           "quadrature_error": error})


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def solution_builder(class_name: str, params: Dict[str, Any]) -> Callable[[int], SpinorSolution]:
    """
    Level-indexed constructor for one class

    Args:
        class_name: One of CLASSES
        params: Keyword parameters of the class constructor (without n)

    Returns:
        Callable n -> SpinorSolution
    """
    if class_name == "oscillator":
        return lambda n: oscillator_solution(n, params["kappa"], params["lam"], params["alpha"])
    if class_name == "coulomb":
        return lambda n: coulomb_solution(n, params["kappa"], params["Z"], params["alpha"],
                                          params.get("branch", 1))
    if class_name == "morse":
        return lambda n: morse_solution(n, params["tau"], params["rho"], params["lam"], params["alpha"])
    if class_name == "zero-energy":
        return lambda n: zero_energy_solution(params["l"], params["beta"], params["lam"],
                                              params.get("alpha", 1.0))
    raise DomainError(f"unknown class '{class_name}', expected one of {CLASSES}")


def _energy_only(class_name: str, params: Dict[str, Any], n: int) -> Optional[float]:
    """Energy of a level that failed admissibility, None when undefined"""
    try:
        if class_name == "oscillator":
            return oscillator_energy(n, params["kappa"], params["lam"], params["alpha"])
        if class_name == "coulomb":
            return CoulombParams(params["Z"], params["kappa"], params["alpha"],
                                 params.get("branch", 1)).energy(n)
        if class_name == "morse":
            return MorseParams(params["tau"], params["rho"], params["lam"], params["alpha"]).energy(n)
    except DiracError:
        return None
    return None


def spectrum_table(class_name: str, params: Dict[str, Any], n_from: int, n_to: int) -> List[SpectrumRow]:
    """
    Batch evaluation of ε_n for n_from ≤ n ≤ n_to

    Inadmissible levels become tagged rows instead of aborting the batch.
    The zero-energy family has the single row n = 0.

    Args:
        class_name: One of CLASSES
        params: Class parameters
        n_from: First level
        n_to: Last level (inclusive)

    Returns:
        List of SpectrumRow
    """
    builder = solution_builder(class_name, params)
    if class_name == "zero-energy":
        levels = [0]
    else:
        levels = list(range(max(0, n_from), n_to + 1))

    rows: List[SpectrumRow] = []
    for n in levels:
        try:
            rows.append(SpectrumRow(n, builder(n).energy))
        except DiracError as e:
            logger.warning(f"{class_name} level {n} skipped: {e}")
            rows.append(SpectrumRow(n, _energy_only(class_name, params, n), _error_tag(e), str(e)))
    return rows
