"""
Extended point canonical transformation engine

Maps the Dirac-Oscillator reference (Ŝ = 0, Ĉ = 1, Ŵ = λ²x) through
r = q(x), φ(r) = g(x)φ̂(x), θ(r) = h(x)θ̂(x) with g = √|q′| and h = ξ/g
onto the Coulomb (q = x²), Morse (q = −(2/τ)ln x) and zero-energy
(q = x^{2μ+1}) classes.

The coupling matching holds up to a constant c,
    A(q(x)) = (1/q′)[Ĝ(x) − ½q″/q′] + c,
and the lower component picks up αc·φ/(C+ε) from it:
    θ = (ξ/g)θ̂ + αc·φ/(C+ε),   ξ = sign(q′)(ε̂+1)/(ε+C).
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from config.settings import Settings
from dirac.dirac_core import (
    ExponentialW,
    OddPotential,
    PowerLawW,
    RelativisticPotential,
    ZeroW,
)
from dirac.errors import (
    DomainError,
    ExcludedParameterError,
    InconsistentBranchError,
    NoBoundStateError,
    NonConstantDifferenceError,
    SingularConfigurationError,
    TermMatchingError,
)
from dirac.solutions import MorseParams, SpinorSolution, oscillator_state
from dirac.specialfn import ArrayLike, RadialFunction

logger = logging.getLogger(__name__)

FAMILIES = ("square", "neglog", "power")


class TransformFamily(ABC):
    """Monotone q(x) on (0, ∞) with analytic derivatives and inverse"""

    name: str = ""

    @abstractmethod
    def q(self, x: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def dq(self, x: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def d2q(self, x: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def d3q(self, x: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def inverse(self, r: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def symbolic(self, x: sp.Symbol) -> sp.Expr:
        pass

    @property
    @abstractmethod
    def sign(self) -> int:
        """Sign of q′ on (0, ∞)"""
        pass

    def describe(self) -> str:
        return self.name

    def _check_x(self, x):
        if np.any(np.asarray(x) <= 0.0):
            raise DomainError("transform argument x must be positive")


@dataclass(frozen=True)
class Square(TransformFamily):
    """q = x²"""
    name = "square"

    def q(self, x):
        self._check_x(x)
        return np.asarray(x, dtype=np.float64) ** 2

    def dq(self, x):
        return 2.0 * np.asarray(x, dtype=np.float64)

    def d2q(self, x):
        return np.full_like(np.asarray(x, dtype=np.float64), 2.0)

    def d3q(self, x):
        return np.zeros_like(np.asarray(x, dtype=np.float64))

    def inverse(self, r):
        if np.any(np.asarray(r) <= 0.0):
            raise DomainError("q = x² maps onto r > 0 only")
        return np.sqrt(np.asarray(r, dtype=np.float64))

    def symbolic(self, x):
        return x ** 2

    @property
    def sign(self) -> int:
        return 1

    def describe(self) -> str:
        return "q(x) = x^2"


@dataclass(frozen=True)
class NegLog(TransformFamily):
    """q = −(2/τ) ln x"""
    tau: float
    name = "neglog"

    def __post_init__(self):
        if not self.tau > 0.0:
            raise DomainError(f"τ must be positive, got {self.tau}")

    def q(self, x):
        self._check_x(x)
        return -2.0 / self.tau * np.log(np.asarray(x, dtype=np.float64))

    def dq(self, x):
        return -2.0 / (self.tau * np.asarray(x, dtype=np.float64))

    def d2q(self, x):
        return 2.0 / (self.tau * np.asarray(x, dtype=np.float64) ** 2)

    def d3q(self, x):
        return -4.0 / (self.tau * np.asarray(x, dtype=np.float64) ** 3)

    def inverse(self, r):
        return np.exp(-0.5 * self.tau * np.asarray(r, dtype=np.float64))

    def symbolic(self, x):
        return -2 / sp.nsimplify(self.tau) * sp.log(x)

    @property
    def sign(self) -> int:
        return -1

    def describe(self) -> str:
        return f"q(x) = -(2/{self.tau:g}) ln x"


@dataclass(frozen=True)
class Power(TransformFamily):
    """q = x^{2μ+1}, μ ∉ {0, ±1/2}"""
    mu: float
    name = "power"

    def __post_init__(self):
        if not math.isfinite(self.mu) or self.mu in (0.0, 0.5, -0.5):
            raise ExcludedParameterError(f"μ = {self.mu} is excluded (μ ≠ 0, ±1/2)")

    @property
    def m(self) -> float:
        return 2.0 * self.mu + 1.0

    @property
    def beta(self) -> float:
        return 2.0 / self.m

    def q(self, x):
        self._check_x(x)
        return np.asarray(x, dtype=np.float64) ** self.m

    def dq(self, x):
        return self.m * np.asarray(x, dtype=np.float64) ** (self.m - 1.0)

    def d2q(self, x):
        return self.m * (self.m - 1.0) * np.asarray(x, dtype=np.float64) ** (self.m - 2.0)

    def d3q(self, x):
        m = self.m
        return m * (m - 1.0) * (m - 2.0) * np.asarray(x, dtype=np.float64) ** (m - 3.0)

    def inverse(self, r):
        if np.any(np.asarray(r) <= 0.0):
            raise DomainError("q = x^(2μ+1) maps onto r > 0 only")
        return np.asarray(r, dtype=np.float64) ** (1.0 / self.m)

    def symbolic(self, x):
        return x ** (2 * sp.nsimplify(self.mu) + 1)

    @property
    def sign(self) -> int:
        return 1 if self.m > 0 else -1

    def describe(self) -> str:
        return f"q(x) = x^{self.m:g}"


def make_family(name: str, tau: float = None, mu: float = None) -> TransformFamily:
    """Family by CLI name"""
    if name == "square":
        return Square()
    if name == "neglog":
        return NegLog(1.0 if tau is None else tau)
    if name == "power":
        if mu is None:
            raise DomainError("the power family needs μ")
        return Power(mu)
    raise DomainError(f"unknown family '{name}', expected one of {FAMILIES}")


@dataclass(frozen=True)
class TransformSpec:
    """
    q family plus the reference and target parameters

    Attributes:
        family: Transformation family
        alpha: Fine structure constant (shared by both problems)
        lam: Reference oscillator strength (Morse, zero-energy)
        kappa_hat: Reference κ̂ (Coulomb, zero-energy); the Morse map picks
            κ̂ per level
        Z: Charge number of the Coulomb target
        rho: Angle of the Morse target
    """
    family: TransformFamily
    alpha: float = 1.0
    lam: float = 1.0
    kappa_hat: Optional[float] = None
    Z: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise DomainError(f"α must be positive, got {self.alpha}")
        if not self.lam > 0.0:
            raise DomainError(f"λ must be positive, got {self.lam}")
        if isinstance(self.family, (Square, Power)) and self.kappa_hat is None:
            raise DomainError(f"the {self.family.name} family needs κ̂")

    @classmethod
    def for_coulomb(cls, kappa: int, Z: float, alpha: float) -> "TransformSpec":
        """Reference reaching coulomb_solution(·, κ, Z, α): κ̂ = 2κC + 1/2"""
        S = alpha * Z / kappa
        if not abs(S) < 1.0:
            raise SingularConfigurationError(f"|αZ/κ| = {abs(S):g} must be below 1")
        sigma = kappa * math.sqrt(1.0 - S * S)
        return cls(Square(), alpha=alpha, kappa_hat=2.0 * sigma + 0.5, Z=Z)

    @classmethod
    def for_morse(cls, tau: float, rho: float, lam: float, alpha: float) -> "TransformSpec":
        return cls(NegLog(tau), alpha=alpha, lam=lam, rho=rho)

    @classmethod
    def for_zero_energy(cls, l: int, beta: float, lam: float, alpha: float = 1.0) -> "TransformSpec":
        """Reference reaching zero_energy_solution(l, β, λ): κ̂ = −1/2 − (2l+1)/|β|"""
        if not math.isfinite(beta) or beta == 0.0:
            raise ExcludedParameterError(f"β = {beta} is excluded")
        mu = -0.5 + 1.0 / beta
        return cls(Power(mu), alpha=alpha, lam=lam, kappa_hat=-0.5 - (2 * l + 1) / abs(beta))


@dataclass(frozen=True)
class ReferenceLevel:
    """
    Oscillator parameters and mapping constants for one level

    Attributes:
        n: Level index
        energy: ε of the new problem
        lam: Reference λ
        kappa_hat: Reference κ̂
        energy_hat: Reference ε̂
        xi: ξ = sign(q′)(ε̂+1)/(ε+C)
        constant: c of the coupling matching
    """
    n: int
    energy: float
    lam: float
    kappa_hat: float
    energy_hat: float
    xi: float
    constant: float


@dataclass
class XpctResult:
    """
    Parameter map produced by derive()

    Attributes:
        spec: The transformation
        target_class: Catalog class of the image
        kappa: New κ (real)
        w: New odd component
        rho: New angle
        constant_match: Constant c of the coupling matching, as text
        spectrum_relation: Energy condition, as text
    """
    spec: TransformSpec
    target_class: str
    kappa: float
    w: OddPotential
    rho: float
    constant_match: str
    spectrum_relation: str

    @property
    def S(self) -> float:
        return math.sin(self.rho)

    @property
    def C(self) -> float:
        return math.cos(self.rho)

    def potential(self) -> RelativisticPotential:
        return RelativisticPotential(alpha=self.spec.alpha, kappa=self.kappa, rho=self.rho, w=self.w)

    def level(self, n: int) -> ReferenceLevel:
        """Energy and reference parameters of level n"""
        spec = self.spec
        alpha = spec.alpha
        if isinstance(spec.family, Square):
            sigma = self.kappa * self.C
            principal = n + 0.5 + abs(sigma + 0.5)
            eps = 1.0 / math.sqrt(1.0 + (alpha * spec.Z / principal) ** 2)
            lam_sq = -2.0 * spec.Z * eps / principal
            if not lam_sq > 0.0:
                raise NoBoundStateError(f"reference λ² = {lam_sq:g} ≤ 0: Z·ε must be negative")
            lam, kappa_hat = math.sqrt(lam_sq), spec.kappa_hat
            constant = -self.S / alpha - 0.5 * lam_sq
        elif isinstance(spec.family, NegLog):
            params = MorseParams(spec.family.tau, spec.rho, spec.lam, alpha)
            eps = params.energy(n)
            v = params.exponent(n)
            if not v > 0.0:
                raise NoBoundStateError(f"v_{n} = {v:g} ≤ 0: level {n} has no reference")
            lam, kappa_hat = spec.lam, 2.0 * v - 0.5
            constant = -self.S / alpha + 0.5 * spec.family.tau * (kappa_hat + 0.5)
        else:
            if n != 0:
                raise InconsistentBranchError(f"the power family admits n = 0 only, got n = {n}")
            eps, lam, kappa_hat, constant = 1.0, spec.lam, spec.kappa_hat, -self.S / alpha

        reference = oscillator_state(n, kappa_hat, lam, alpha)
        xi = spec.family.sign * (reference.energy + 1.0) / (eps + self.C)
        return ReferenceLevel(n, eps, lam, kappa_hat, reference.energy, xi, constant)

    def energy(self, n: int) -> float:
        return self.level(n).energy

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.spec.family.name,
            "transform": self.spec.family.describe(),
            "target_class": self.target_class,
            "kappa": self.kappa,
            "W": self.w.describe(),
            "rho": self.rho,
            "S": self.S,
            "C": self.C,
            "constant_match": self.constant_match,
            "spectrum_relation": self.spectrum_relation,
        }


def derive(spec: TransformSpec) -> XpctResult:
    """
    New-problem parameters from the coupling matching

    Square: W = 0, σ = Cκ = (κ̂ − 1/2)/2 with κ² = σ² + (αZ)².
    NegLog: κ = 0, W = −(τλ²/2C)e^{−τr}.
    Power:  C = 1, κ = (κ̂ − μ)/(2μ+1), W = (λ²/(2μ+1)) r^{β−1}, β = 2/(2μ+1),
            requiring κ̂ ≤ −1/2 (n = 0).

    Args:
        spec: TransformSpec

    Returns:
        XpctResult
    """
    family, alpha = spec.family, spec.alpha
    if isinstance(family, Square):
        sigma = 0.5 * (spec.kappa_hat - 0.5)
        if sigma == 0.0:
            raise SingularConfigurationError("κ̂ = 1/2 gives σ = 0 and C = 0")
        kappa = math.copysign(math.sqrt(sigma ** 2 + (alpha * spec.Z) ** 2), sigma)
        rho = math.atan2(alpha * spec.Z / kappa, sigma / kappa)
        result = XpctResult(spec, "coulomb", kappa, ZeroW(), rho,
                            "c = -S/alpha - lam_n^2/2",
                            "eps_n = (1 + (alpha*Z/N)^2)^(-1/2), N = n + 1/2 + |sigma + 1/2|, lam_n^2 = mu_n")
    elif isinstance(family, NegLog):
        if not abs(spec.rho) < 0.5 * math.pi:
            raise DomainError(f"ρ must lie in (−π/2, π/2), got {spec.rho}")
        C = math.cos(spec.rho)
        w = ExponentialW(-family.tau * spec.lam ** 2 / (2.0 * C), family.tau)
        result = XpctResult(spec, "morse", 0.0, w, spec.rho,
                            "c = -S/alpha + tau*(kappa_hat + 1/2)/2",
                            "eps^2 + (T*eps - n*alpha*tau)^2 = 1, |kappa_hat + 1/2| = 2 v_n")
    else:
        if spec.kappa_hat > -0.5:
            raise InconsistentBranchError(
                f"κ̂ = {spec.kappa_hat:g} > −1/2: the x^0 balance (2κ̂+1) + |2κ̂+1| = −4n has no solution"
            )
        m = family.m
        kappa = (spec.kappa_hat - family.mu) / m
        w = PowerLawW(spec.lam ** 2 / m, family.beta - 1.0)
        result = XpctResult(spec, "zero-energy", kappa, w, 0.0,
                            "c = -S/alpha = 0",
                            "S = 0, eps = 1, n = 0")

    logger.info(f"XPCT {family.describe()}: κ={result.kappa:.12g}, W={result.w.describe()}, "
                f"class={result.target_class}")
    return result


@dataclass
class CouplingIdentityReport:
    """
    Constancy of A(q(x)) − (1/q′)[Ĝ(x) − ½q″/q′]

    Attributes:
        constant: Mean difference over the samples
        expected: c from the parameter map
        spread: (max − min) of the difference relative to the term scale
        samples: Number of sample points
    """
    constant: float
    expected: float
    spread: float
    samples: int

    def to_dict(self) -> Dict[str, float]:
        return {"constant": self.constant, "expected": self.expected,
                "spread": self.spread, "samples": self.samples}


def verify_coupling_identity(spec: TransformSpec, result: XpctResult, sample_xs: Sequence[float],
                             n: int = 0, tolerance: float = None) -> CouplingIdentityReport:
    """
    Check that the coupling matching holds up to a constant

    Args:
        spec: TransformSpec
        result: Output of derive(spec)
        sample_xs: Positive sample points in x
        n: Level whose reference parameters enter Ĝ
        tolerance: Allowed relative spread

    Returns:
        CouplingIdentityReport
    """
    xs = np.asarray(sample_xs, dtype=np.float64)
    if xs.size == 0:
        raise DomainError("at least one sample point is required")
    tolerance = Settings.tolerance("coupling_identity") if tolerance is None else tolerance
    family = spec.family
    level = result.level(n)

    r = family.q(xs)
    lhs = result.potential().coupling(r)
    g_hat = level.kappa_hat / xs + level.lam ** 2 * xs
    dq = family.dq(xs)
    rhs = (g_hat - 0.5 * family.d2q(xs) / dq) / dq
    diff = lhs - rhs

    scale = max(float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))), 1.0)
    spread = float(np.max(diff) - np.min(diff)) / scale
    report = CouplingIdentityReport(float(np.mean(diff)), level.constant, spread, int(xs.size))
    if spread > tolerance:
        raise NonConstantDifferenceError(
            f"{family.describe()}: difference varies by {spread:.3g} (relative) across samples"
        )
    logger.debug(f"identity check {family.describe()}: constant {report.constant:.15g}, spread {spread:.3g}")
    return report


# ---------------------------------------------------------------------------
# Term matching of the second-order equations
# ---------------------------------------------------------------------------

@dataclass
class SpectrumRelation:
    """
    Outcome of the power-by-power matching

    Attributes:
        family: Family name
        coefficients: Exponent of x -> coefficient of LHS − RHS before solving
        relation: Expression in ε (and n) that vanishes on the spectrum
        parameter_map: Parameters fixed by the matching
        closed_form: Closed-form ε_n where one exists
    """
    family: str
    coefficients: Dict[sp.Expr, sp.Expr]
    relation: sp.Expr
    parameter_map: Dict[str, sp.Expr] = field(default_factory=dict)
    closed_form: Optional[sp.Expr] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "coefficients": {str(k): str(v) for k, v in sorted(self.coefficients.items(), key=lambda kv: float(kv[0]))},
            "relation": f"{self.relation} = 0",
            "parameter_map": {k: str(v) for k, v in self.parameter_map.items()},
            "closed_form": None if self.closed_form is None else str(self.closed_form),
        }

    def defect(self, values: Dict[str, float]) -> float:
        """
        |relation| with every free symbol replaced by its value

        Args:
            values: Symbol name -> number; names the relation lacks are ignored

        Returns:
            Absolute value of the relation, 0 on the spectrum
        """
        missing = sorted(s.name for s in self.relation.free_symbols if s.name not in values)
        if missing:
            raise TermMatchingError(f"{self.family}: no value for {', '.join(missing)}")
        substituted = self.relation.subs({s: values[s.name] for s in self.relation.free_symbols})
        return abs(complex(sp.N(substituted)))


def _effective_potential_symbolic(r, kappa, S, C, eps, alpha, w):
    """Symbolic F with the same seven terms as EffectivePotentialSpec"""
    dw = sp.diff(w, r)
    return (C * kappa * (C * kappa + 1) / r ** 2 + 2 * kappa * S * eps / (alpha * r)
            + C ** 2 * w ** 2 + 2 * S * eps * w / alpha - C * dw
            + 2 * kappa * C ** 2 * w / r - (eps ** 2 - 1) / alpha ** 2)


def _power_coefficients(expr, x) -> Dict[sp.Expr, sp.Expr]:
    coefficients: Dict[sp.Expr, sp.Expr] = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        coeff, exponent = term.as_coeff_exponent(x)
        if coeff.has(x):
            raise TermMatchingError(f"term {term} is not a power of x")
        coefficients[exponent] = coefficients.get(exponent, 0) + coeff
    return {k: sp.simplify(v) for k, v in coefficients.items() if sp.simplify(v) != 0}


def _matched_difference(family: TransformFamily, x, f_new_of_r, r, f_hat):
    q = family.symbolic(x)
    dq = sp.diff(q, x)
    schwarz = sp.Rational(1, 2) * sp.diff(q, x, 3) / dq - sp.Rational(3, 4) * (sp.diff(q, x, 2) / dq) ** 2
    lhs = sp.expand(sp.powsimp(f_new_of_r.subs(r, q) * dq ** 2, force=True))
    return lhs - (f_hat + schwarz)


def _require_exponents(family: str, coefficients, allowed):
    extra = [k for k in coefficients if k not in allowed]
    if extra:
        raise TermMatchingError(f"{family}: unbalanced powers of x {sorted(extra, key=float)}")


def spectrum_from_matching(spec: TransformSpec, result: XpctResult) -> SpectrumRelation:
    """
    Spectrum condition from matching F(q(x))q′² = F̂(x) + ½q‴/q′ − ¾(q″/q′)²

    The reference F̂(x) = κ̂(κ̂+1)/x² + λ⁴x² − 2λ²(2n + |κ̂+1/2| + 1) is
    written with p = |κ̂+1/2|, so κ̂(κ̂+1) = p² − 1/4, and every coefficient
    comparison is exact sympy arithmetic.

    Args:
        spec: TransformSpec
        result: Output of derive(spec)

    Returns:
        SpectrumRelation
    """
    x = sp.Symbol("x", positive=True)
    r = sp.Symbol("r", positive=True)
    eps, alpha, lam_sq = sp.symbols("epsilon alpha lambda_sq", positive=True)
    n = sp.Symbol("n", nonnegative=True, integer=True)
    p = sp.Symbol("p", positive=True)

    def f_hat(p_value, lam_sq_value):
        return ((p_value ** 2 - sp.Rational(1, 4)) / x ** 2 + lam_sq_value ** 2 * x ** 2
                - 2 * lam_sq_value * (2 * n + p_value + 1))

    family = spec.family
    if isinstance(family, Square):
        Z = sp.Symbol("Z", real=True)
        kappa = sp.Symbol("kappa", nonzero=True)
        sigma = p / 2 - sp.Rational(1, 2)
        # σ + 1/2 = ±p/2 and κ̂ = 2σ + 1/2, so only p enters
        S = alpha * Z / kappa
        f_new = (sigma * (sigma + 1) / r ** 2 + 2 * kappa * S * eps / (alpha * r)
                 - (eps ** 2 - 1) / alpha ** 2)
        coefficients = _power_coefficients(_matched_difference(family, x, f_new, r, f_hat(p, lam_sq)), x)
        _require_exponents("square", coefficients, {0, 2})

        lam_solution = sp.solve(coefficients[0], lam_sq)
        if len(lam_solution) != 1:
            raise TermMatchingError(f"square: x^0 balance gives {lam_solution} for λ²")
        principal = n + sp.Rational(1, 2) + p / 2
        if sp.cancel(lam_solution[0] + 2 * Z * eps / principal) != 0:
            raise TermMatchingError("square: λ² does not match −2Zε/N")

        eps_sq = sp.Symbol("eps_sq", positive=True)
        relation = sp.expand(coefficients[2].subs(lam_sq, lam_solution[0]))
        energy_sq = sp.solve(relation.subs(eps ** 2, eps_sq), eps_sq)
        closed = (1 + (alpha * Z / principal) ** 2) ** sp.Rational(-1, 2)
        if len(energy_sq) != 1 or sp.cancel(energy_sq[0] - closed ** 2) != 0:
            raise TermMatchingError(f"square: energy condition {energy_sq} differs from the closed form")
        return SpectrumRelation("square", coefficients, relation,
                                {"lambda_sq": lam_solution[0], "N": principal}, closed)

    if isinstance(family, NegLog):
        tau = sp.nsimplify(family.tau)
        T = sp.Symbol("T", real=True)
        C = sp.Symbol("C", positive=True)
        w = -tau * sp.sqrt(lam_sq) ** 2 / (2 * C) * sp.exp(-tau * r)
        f_new = _effective_potential_symbolic(r, 0, T * C, C, eps, alpha, w)
        coefficients = _power_coefficients(_matched_difference(family, x, f_new, r, f_hat(p, lam_sq)), x)
        _require_exponents("neglog", coefficients, {-2, 0})

        p_solution = sp.solve(coefficients[0], p)
        v = T * eps / (alpha * tau) - n
        if len(p_solution) != 1 or sp.cancel(p_solution[0] - 2 * v) != 0:
            raise TermMatchingError(f"neglog: x^0 balance gives |κ̂+1/2| = {p_solution}, expected 2v_n")
        relation = sp.expand(coefficients[-2].subs(p, p_solution[0]) * alpha ** 2 * tau ** 2 / 4)
        identity = 1 - eps ** 2 - (T * eps - n * alpha * tau) ** 2
        if sp.expand(relation - identity) != 0 and sp.expand(relation + identity) != 0:
            raise TermMatchingError(f"neglog: energy condition {relation} is not the circle identity")
        return SpectrumRelation("neglog", coefficients, identity, {"v_n": v, "kappa_hat_abs": 2 * v})

    # power family: exponents are numeric, S, C and ε stay symbolic
    mu = sp.nsimplify(family.mu)
    m = 2 * mu + 1
    kappa_hat = sp.nsimplify(spec.kappa_hat)
    lam_sq_value = sp.nsimplify(spec.lam ** 2)
    S = sp.Symbol("S", real=True)
    C = sp.Symbol("C", positive=True)
    kappa = (kappa_hat - mu) / (m * C)
    w = lam_sq_value / (m * C) * r ** (2 / m - 1)
    f_new = _effective_potential_symbolic(r, kappa, S, C, eps, alpha, w)
    p_value = sp.Abs(kappa_hat + sp.Rational(1, 2))
    coefficients = _power_coefficients(_matched_difference(family, x, f_new, r, f_hat(p_value, lam_sq_value)), x)

    off_grid = [coefficients[k] for k in coefficients if k not in (-2, 0, 2)]
    solutions = sp.solve(off_grid, [S, eps], dict=True) if off_grid else []
    solutions = [s for s in solutions if s.get(eps) == 1 and s.get(S, 0) == 0]
    if not solutions:
        raise TermMatchingError("power: matching the extra powers does not force S = 0, ε = 1")

    fixed = {S: 0, C: 1, eps: 1}
    for exponent in (-2, 2):
        leftover = sp.simplify(coefficients.get(exponent, sp.Integer(0)).subs(fixed))
        if leftover != 0:
            raise TermMatchingError(f"power: x^{exponent} coefficient {leftover} does not vanish")
    relation = sp.simplify(coefficients.get(0, sp.Integer(0)).subs(fixed))
    n_solution = sp.solve(relation, n) if relation != 0 else [sp.Integer(0)]
    if n_solution != [0]:
        raise InconsistentBranchError(f"power: x^0 balance requires n = {n_solution}, only n = 0 is allowed")
    return SpectrumRelation("power", coefficients, relation,
                            {"S": sp.Integer(0), "epsilon": sp.Integer(1), "n": sp.Integer(0),
                             "kappa": sp.nsimplify(kappa.subs(C, 1))},
                            sp.Integer(1))


# ---------------------------------------------------------------------------
# Wavefunctions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MappedUpper(RadialFunction):
    """φ(r) = √|q′(x)|·φ̂(x) with x = q⁻¹(r)"""
    family: TransformFamily
    reference: RadialFunction

    def __call__(self, r):
        x = self.family.inverse(r)
        return np.sqrt(np.abs(self.family.dq(x))) * self.reference(x)

    def derivative(self, r):
        x = self.family.inverse(r)
        dq = self.family.dq(x)
        g = np.sqrt(np.abs(dq))
        slope = g * (0.5 * self.family.d2q(x) / dq * self.reference(x) + self.reference.derivative(x))
        return slope / dq

    def second_derivative(self, r):
        x = self.family.inverse(r)
        dq = self.family.dq(x)
        u, v = self.family.d2q(x) / dq, self.family.d3q(x) / dq
        bracket = self.reference.second_derivative(x) + (0.5 * v - 0.75 * u ** 2) * self.reference(x)
        return np.sqrt(np.abs(dq)) * bracket / dq ** 2


@dataclass(frozen=True)
class MappedLower(RadialFunction):
    """θ(r) = (ξ/√|q′(x)|)·θ̂(x) + shift·φ(r)"""
    family: TransformFamily
    reference: RadialFunction
    xi: float
    upper: RadialFunction
    shift: float = 0.0

    def __call__(self, r):
        x = self.family.inverse(r)
        values = self.xi / np.sqrt(np.abs(self.family.dq(x))) * self.reference(x)
        if self.shift != 0.0:
            values = values + self.shift * self.upper(r)
        return values

    def derivative(self, r):
        x = self.family.inverse(r)
        dq = self.family.dq(x)
        u = self.family.d2q(x) / dq
        slope = self.reference.derivative(x) - 0.5 * u * self.reference(x)
        values = self.xi * slope / (np.sqrt(np.abs(dq)) * dq)
        if self.shift != 0.0:
            values = values + self.shift * self.upper.derivative(r)
        return values


def reference_solution(result: XpctResult, n: int) -> SpinorSolution:
    """Oscillator state the map of level n starts from"""
    level = result.level(n)
    return oscillator_state(n, level.kappa_hat, level.lam, result.spec.alpha)


def map_wavefunctions(spec: TransformSpec, result: XpctResult,
                      reference: SpinorSolution) -> SpinorSolution:
    """
    Spinor of the new problem from an oscillator reference state

    Args:
        spec: TransformSpec
        result: Output of derive(spec)
        reference: Oscillator state whose λ and κ̂ match result.level(n)

    Returns:
        SpinorSolution of result.target_class; params["bare_lower"] holds
        θ without the constant-term correction
    """
    if reference.class_tag != "oscillator":
        raise DomainError(f"reference must be an oscillator state, got {reference.class_tag}")
    level = result.level(reference.n)
    if (abs(reference.params["lam"] - level.lam) > 1e-12 * level.lam
            or abs(reference.params["kappa"] - level.kappa_hat) > 1e-12 * max(1.0, abs(level.kappa_hat))):
        raise InconsistentBranchError(
            f"reference (λ={reference.params['lam']:g}, κ̂={reference.params['kappa']:g}) does not match "
            f"level {reference.n} (λ={level.lam:g}, κ̂={level.kappa_hat:g})"
        )

    family = spec.family
    upper = MappedUpper(family, reference.upper)
    shift = spec.alpha * level.constant / (result.C + level.energy)
    lower = MappedLower(family, reference.lower, level.xi, upper, shift)
    bare = MappedLower(family, reference.lower, level.xi, upper, 0.0)
    logger.debug(f"mapped level {reference.n} via {family.describe()}: ξ={level.xi:.12g}, c={level.constant:.12g}")
    return SpinorSolution(result.target_class, reference.n, level.energy, upper, lower, result.potential(),
                          {"xi": level.xi, "constant": level.constant, "bare_lower": bare,
                           "kappa_hat": level.kappa_hat, "lam": level.lam})


def proportionality(mapped: RadialFunction, catalog: RadialFunction, r: ArrayLike,
                    floor: float = 1e-8) -> Tuple[float, float]:
    """
    Global constant between two functions and the relative spread of the ratio

    Only points where |catalog| exceeds floor·max|catalog| enter.

    Returns:
        (mean ratio, relative spread of the ratio)
    """
    a, b = np.asarray(mapped(r)), np.asarray(catalog(r))
    mask = np.abs(b) > floor * np.max(np.abs(b))
    ratio = a[mask] / b[mask]
    mean = float(np.mean(ratio))
    return mean, float((np.max(ratio) - np.min(ratio)) / abs(mean))
