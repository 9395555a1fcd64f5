"""
SO(2,1) potential algebra of the nonrelativistic oscillator class

The lower-bounded discrete series D⁺(γ), the second-order realization

    L3 = d² + η/x² − x²/16,   L± = (1/√2)[d² + η/x² + x²/16 ± ½(x d/dx + ½)],

with η = −4γ(γ+1) − 3/4, the tilted oscillator states Φ_n^γ and the point
canonical transformations into the Coulomb, Morse and zero-energy problems.

The realization is fixed at λ⁴ = 1/16. States at other λ are compared
through the unitary dilation Φ_n^γ(x; λ) = √(2λ)·Φ_n^γ(2λx; 1/2).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np
from numpy.typing import NDArray

from config.settings import Settings
from dirac.errors import DomainError, GridResolutionError, ScatteringBranchError
from dirac.numerics import (
    RadialGrid,
    derivative_matrix,
    laplacian_matrix,
    quadrature_inner,
)
from dirac.specialfn import ArrayLike, LaguerreFunction, RadialFunction, norm_const_oscillator
from dirac.xpct import MappedUpper, NegLog, Power, Square, TransformFamily

logger = logging.getLogger(__name__)

REFERENCE_LAMBDA = 0.5
OPERATORS = ("L3", "L+", "L-", "Casimir")


@dataclass(frozen=True)
class TiltingParameters:
    """
    Hamiltonian −2H = (1 − τ3)L1 + τ3L3 tilted onto the compact generator

    Attributes:
        tau3: Coefficient of L3, above 1/2 for bound states
        tau_pm: τ₊ = τ₋ = (1 − τ3)/2
        zeta: Tilting angle with (2τ3 − 1)e^{2ζ} = 1
        lam: Oscillator strength, λ⁴ = (2τ3 − 1)/16
    """
    tau3: float
    tau_pm: float
    zeta: float
    lam: float


@dataclass(frozen=True)
class So21Rep:
    """
    Representation D⁺(γ)

    Attributes:
        gamma: Representation label, γ ≥ −1/2
    """
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma >= -0.5):
            raise DomainError(f"D⁺(γ) needs γ ≥ −1/2, got {self.gamma}")

    @property
    def casimir(self) -> float:
        return self.gamma * (self.gamma + 1.0)

    @property
    def eta(self) -> float:
        """η = −4γ(γ+1) − 3/4 ≤ 1/4"""
        return -4.0 * self.casimir - 0.75

    @property
    def angular_momentum(self) -> float:
        """l = 2γ + 1/2 of the oscillator equation"""
        return 2.0 * self.gamma + 0.5

    def tilt(self, tau3: float) -> TiltingParameters:
        """
        Tilting angle that removes L1

        Raises:
            ScatteringBranchError: 2τ3 − 1 ≤ 0 (continuum)
        """
        excess = 2.0 * tau3 - 1.0
        if not excess > 0.0:
            raise ScatteringBranchError(
                f"τ3 = {tau3:g}: (2τ3 − 1)e^{{2ζ}} = 1 requires τ3 > 1/2, the scattering branch is not supported"
            )
        return TiltingParameters(tau3, 0.5 * (1.0 - tau3), -0.5 * math.log(excess), (excess / 16.0) ** 0.25)

    def tau0(self, n: int, tau3: float) -> float:
        """Eigenvalue τ0 = 2E = √(2τ3 − 1)(γ + n + 1)"""
        self.tilt(tau3)
        return math.sqrt(2.0 * tau3 - 1.0) * (self.gamma + n + 1.0)


def rep_action_coeffs(gamma: float, n: int, which: str) -> float:
    """
    Matrix elements of the abstract representation

    Args:
        gamma: γ ≥ −1/2
        n: Basis index
        which: "L3", "L+", "L-" or "Casimir"

    Returns:
        γ+n+1, √((n+1)(n+2γ+2)/2), √(n(n+2γ+1)/2) or γ(γ+1)
    """
    rep = So21Rep(gamma)
    if n != int(n) or n < 0:
        raise DomainError(f"basis index must be a nonnegative integer, got {n}")
    if which == "L3":
        return gamma + n + 1.0
    if which == "L+":
        return math.sqrt((n + 1.0) * (n + 2.0 * gamma + 2.0) / 2.0)
    if which == "L-":
        return math.sqrt(n * (n + 2.0 * gamma + 1.0) / 2.0)
    if which == "Casimir":
        return rep.casimir
    raise DomainError(f"unknown generator '{which}', expected one of {OPERATORS}")


@dataclass(frozen=True)
class OscillatorState:
    """
    Φ_n^γ(x) = √(2λ n!/Γ(2γ+n+2))·(λx)^{2γ+3/2}e^{−λ²x²/2}L_n^{2γ+1}(λ²x²)

    Attributes:
        gamma: Representation label
        n: Level index
        lam: Oscillator strength
    """
    gamma: float
    n: int
    lam: float
    wavefunction: LaguerreFunction = field(init=False, repr=False)

    def __post_init__(self):
        rep = So21Rep(self.gamma)
        if self.n != int(self.n) or self.n < 0:
            raise DomainError(f"level index must be a nonnegative integer, got {self.n}")
        if not self.lam > 0.0:
            raise DomainError(f"λ must be positive, got {self.lam}")
        a_n = norm_const_oscillator(self.n, rep.angular_momentum, self.lam)
        object.__setattr__(self, "wavefunction", LaguerreFunction(
            coeff=a_n, power=2.0 * self.gamma + 1.5, k=2.0, n=int(self.n),
            order=2.0 * self.gamma + 1.0, scale=self.lam,
        ))

    @property
    def energy(self) -> float:
        """E = 2λ²(γ + n + 1)"""
        return 2.0 * self.lam ** 2 * (self.gamma + self.n + 1.0)

    @property
    def eigenvalue(self) -> float:
        """Constant 4λ²(γ+n+1) of the oscillator equation, i.e. 2E"""
        return 2.0 * self.energy

    def potential(self, x: ArrayLike) -> ArrayLike:
        """(4γ(γ+1) + 3/4)/x² + λ⁴x²"""
        x_arr = np.asarray(x, dtype=np.float64)
        return -So21Rep(self.gamma).eta / x_arr ** 2 + self.lam ** 4 * x_arr ** 2

    def at_reference_scale(self) -> "OscillatorState":
        return OscillatorState(self.gamma, self.n, REFERENCE_LAMBDA)

    def __call__(self, x: ArrayLike) -> ArrayLike:
        if np.any(np.asarray(x) <= 0.0):
            raise DomainError("Φ_n^γ is defined for x > 0")
        return self.wavefunction(x)


def oscillator_wavefunction(gamma: float, n: int, lam: float, x: ArrayLike) -> ArrayLike:
    return OscillatorState(gamma, n, lam)(x)


def dilation_error(state: OscillatorState, x: ArrayLike) -> float:
    """max |Φ(x; λ) − √(2λ)Φ(2λx; 1/2)| relative to max |Φ|"""
    x_arr = np.asarray(x, dtype=np.float64)
    direct = state(x_arr)
    dilated = math.sqrt(2.0 * state.lam) * state.at_reference_scale()(2.0 * state.lam * x_arr)
    return float(np.max(np.abs(direct - dilated)) / np.max(np.abs(direct)))


# ---------------------------------------------------------------------------
# Realized generators
# ---------------------------------------------------------------------------

def apply_generator(which: str, func: RadialFunction, y: ArrayLike, gamma: float) -> NDArray[np.float64]:
    """
    Realized generator applied to an analytic function at λ = 1/2

    Args:
        which: "L1", "L3", "iL2", "L+" or "L-"
        func: Function with analytic first and second derivatives
        y: Points in the reference frame
        gamma: Representation label entering η

    Returns:
        Values of the image at y
    """
    y_arr = np.asarray(y, dtype=np.float64)
    eta = So21Rep(gamma).eta
    f, f1, f2 = func(y_arr), func.derivative(y_arr), func.second_derivative(y_arr)
    radial = f2 + eta * f / y_arr ** 2
    if which == "L3":
        return radial - y_arr ** 2 * f / 16.0
    l1 = radial + y_arr ** 2 * f / 16.0
    dilation = 0.5 * (y_arr * f1 + 0.5 * f)
    if which == "L1":
        return l1
    if which == "iL2":
        return dilation
    if which == "L+":
        return (l1 + dilation) / math.sqrt(2.0)
    if which == "L-":
        return (l1 - dilation) / math.sqrt(2.0)
    raise DomainError(f"unknown realized generator '{which}'")


@dataclass
class LadderReport:
    """
    Realized generators against the representation

    Attributes:
        gamma, n, lam: State labels
        norm: ∫Φ_n² by quadrature
        l3: ⟨Φ_n, L3 Φ_n⟩ (realized, −(γ+n+1))
        raising: ⟨Φ_{n+1}, L₋Φ_n⟩, magnitude of the L₊ coefficient
        lowering: ⟨Φ_{n−1}, L₊Φ_n⟩, magnitude of the L₋ coefficient (0 at n = 0)
        casimir: L3(L3+1) − 2‖L₊Φ_n‖² and L3(L3−1) − 2‖L₋Φ_n‖²
        selection: Largest |⟨Φ_m, L₊Φ_n⟩| over m ≠ n−1
        max_error: Largest deviation from the representation values
        orientation: How the realized operators act on the basis
    """
    gamma: float
    n: int
    lam: float
    norm: float
    l3: float
    raising: float
    lowering: float
    casimir: List[float]
    selection: float
    max_error: float
    orientation: str

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _require_resolved(state: OscillatorState, grid: RadialGrid):
    values = np.abs(state(grid.points))
    if values[-1] > 1e-10 * np.max(values):
        raise GridResolutionError(f"Φ_{state.n} is not negligible at x = {grid.r_max:g}")


def ladder_overlap_check(gamma: float, n: int, lam: float, grid: RadialGrid) -> LadderReport:
    """
    Quadrature overlaps of the realized ladder operators

    The grid is in x for strength λ; overlaps are taken after the dilation
    to λ = 1/2, which preserves them.

    Args:
        gamma: γ ≥ −1/2
        n: Level index
        lam: Oscillator strength
        grid: Uniform grid on (0, x_max)

    Returns:
        LadderReport
    """
    if grid.r_min != 0.0:
        raise DomainError("the ladder check needs a grid starting at x = 0")
    _require_resolved(OscillatorState(gamma, n + 2, lam), grid)

    y = 2.0 * lam * grid.points
    scaled = RadialGrid(grid.mapping, grid.n_points, 2.0 * lam * grid.r_max)
    basis = {m: OscillatorState(gamma, m, REFERENCE_LAMBDA).wavefunction for m in range(0, n + 3)}
    phi_n = basis[n](y)

    def overlap(m, values):
        return quadrature_inner(basis[m](y), values, scaled)

    norm = quadrature_inner(phi_n, phi_n, scaled)
    if abs(norm - 1.0) > Settings.tolerance("ladder"):
        raise GridResolutionError(f"∫Φ_{n}² = {norm:.12g} on {grid}")

    plus = apply_generator("L+", basis[n], y, gamma)
    minus = apply_generator("L-", basis[n], y, gamma)
    l3 = overlap(n, apply_generator("L3", basis[n], y, gamma))
    raising = overlap(n + 1, minus)
    lowering = overlap(n - 1, plus) if n > 0 else 0.0
    selection = max(abs(overlap(m, plus)) for m in basis if m != n - 1)

    plus_sq = quadrature_inner(plus, plus, scaled)
    minus_sq = quadrature_inner(minus, minus, scaled)
    casimir = [l3 * (l3 + 1.0) - 2.0 * plus_sq, l3 * (l3 - 1.0) - 2.0 * minus_sq]

    expected_casimir = rep_action_coeffs(gamma, n, "Casimir")
    errors = [
        abs(abs(l3) - rep_action_coeffs(gamma, n, "L3")),
        abs(abs(raising) - rep_action_coeffs(gamma, n, "L+")),
        abs(abs(lowering) - rep_action_coeffs(gamma, n, "L-")),
        selection,
    ] + [abs(c - expected_casimir) for c in casimir]

    orientation = (f"L3 Φ_n = {'−' if l3 < 0 else '+'}(γ+n+1) Φ_n; "
                   f"L- raises with sign {'−' if raising < 0 else '+'}; L+ lowers")
    report = LadderReport(gamma, n, lam, norm, l3, raising, lowering, casimir, selection, max(errors), orientation)
    logger.debug(f"ladder γ={gamma} n={n}: max error {report.max_error:.3g}")
    return report


# ---------------------------------------------------------------------------
# Matrix realization and tilting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class So21Matrices:
    """Dense images of L1, L3, iL2 and L± on a uniform grid"""
    grid: RadialGrid
    L1: NDArray[np.float64] = field(repr=False)
    L3: NDArray[np.float64] = field(repr=False)
    K: NDArray[np.float64] = field(repr=False)

    @property
    def Lp(self) -> NDArray[np.float64]:
        return (self.L1 + self.K) / math.sqrt(2.0)

    @property
    def Lm(self) -> NDArray[np.float64]:
        return (self.L1 - self.K) / math.sqrt(2.0)


def realize_so21(gamma: float, grid: RadialGrid) -> So21Matrices:
    """
    Symmetric central differences for d² and x d/dx at λ = 1/2

    iL2 = ¼(XD + DX) is antisymmetric, so L± are transposes of each other.
    """
    x = grid.points
    eta = So21Rep(gamma).eta
    D, D2 = derivative_matrix(grid), laplacian_matrix(grid)
    X = np.diag(x)
    radial = D2 + np.diag(eta / x ** 2)
    quadratic = np.diag(x ** 2 / 16.0)
    return So21Matrices(grid, radial + quadratic, radial - quadratic, 0.25 * (X @ D + D @ X))


def _commutator(a, b):
    return a @ b - b @ a


def _relation_residuals(m: So21Matrices, probe: NDArray[np.float64]) -> Dict[str, float]:
    """Relative norms of each relation applied to the probe"""
    plus, minus = m.L3 + m.L1, m.L3 - m.L1
    relations = {
        "tilt_plus": _commutator(m.K, plus) + plus,
        "tilt_minus": _commutator(m.K, minus) - minus,
        "L+_L-": _commutator(m.Lp, m.Lm) + m.L3,
        "L3_L+": _commutator(m.L3, m.Lp) - m.Lp,
        "L3_L-": _commutator(m.L3, m.Lm) + m.Lm,
    }
    w = m.grid.weights
    scale = math.sqrt(float(np.sum(w * probe ** 2)))
    return {name: math.sqrt(float(np.sum(w * (op @ probe) ** 2))) / scale for name, op in relations.items()}


@dataclass
class TiltingReport:
    """
    Commutator residuals on a grid and its refinement

    Attributes:
        coarse: Relation -> residual on the given grid
        fine: Relation -> residual on the refined grid
        ratios: coarse/fine, ≈ 4 for second-order convergence
        hermiticity: ‖L3 − L3ᵀ‖ + ‖L₊ᵀ − L₋‖ on the given grid
    """
    coarse: Dict[str, float]
    fine: Dict[str, float]
    ratios: Dict[str, float]
    hermiticity: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def _default_probe(x):
    return x ** 6 * np.exp(-x ** 2 / 16.0)


def tilting_infinitesimal_check(grid: RadialGrid, gamma: float = 0.0,
                                probe: Callable[[NDArray], NDArray] = None) -> TiltingReport:
    """
    ζ-derivative at 0 of the tilting identity, [iL2, L3 ± L1] = ∓(L3 ± L1)

    Also measures [L₊, L₋] = −L3 and [L3, L±] = ±L±. Every residual is the
    relative norm of the relation applied to a smooth probe vanishing at
    both ends.

    Args:
        grid: Uniform grid on (0, x_max) small enough for dense matrices
        gamma: Representation label entering η
        probe: Test function, x⁶e^{−x²/16} by default

    Returns:
        TiltingReport
    """
    probe = probe or _default_probe
    fine_grid = grid.refined()
    coarse_m, fine_m = realize_so21(gamma, grid), realize_so21(gamma, fine_grid)
    coarse = _relation_residuals(coarse_m, probe(grid.points))
    fine = _relation_residuals(fine_m, probe(fine_grid.points))
    ratios = {k: coarse[k] / fine[k] if fine[k] > 0.0 else math.inf for k in coarse}
    hermiticity = float(np.linalg.norm(coarse_m.L3 - coarse_m.L3.T) + np.linalg.norm(coarse_m.Lp.T - coarse_m.Lm))
    logger.info(f"tilting relations on {grid}: ratios " + ", ".join(f"{k}={v:.3f}" for k, v in ratios.items()))
    return TiltingReport(coarse, fine, ratios, hermiticity)


# ---------------------------------------------------------------------------
# Nonrelativistic point canonical transformations
# ---------------------------------------------------------------------------

PCT_FAMILIES = ("square", "neglog", "power")


@dataclass
class NonrelativisticImage:
    """
    Ψ(r) = √|q′|Φ_n^γ(x) and the transformed f(r) with Ψ″ + fΨ = 0

    Attributes:
        family: Transformation
        state: Oscillator state that was mapped
        psi: Mapped wavefunction
        identification: Parameters of the recognized problem
    """
    family: TransformFamily
    state: OscillatorState
    psi: MappedUpper
    identification: Dict[str, Any]

    def f(self, r: ArrayLike) -> ArrayLike:
        """(q′)^{−2}[−(4γ(γ+1)+3/4)/x² − λ⁴x² + 4λ²(γ+n+1) − ½q‴/q′ + ¾(q″/q′)²]"""
        x = self.family.inverse(r)
        dq = self.family.dq(x)
        u, v = self.family.d2q(x) / dq, self.family.d3q(x) / dq
        bracket = -self.state.potential(x) + self.state.eigenvalue - 0.5 * v + 0.75 * u ** 2
        return bracket / dq ** 2

    def schrodinger_potential(self, r: ArrayLike) -> ArrayLike:
        """−f, so that −Ψ″ + (−f)Ψ = 0"""
        return -self.f(r)


def nonrelativistic_pct(family: str, gamma: float, n: int, lam: float, mu: float = None) -> NonrelativisticImage:
    """
    Map an oscillator state through q(x) = x², −ln x or x^{2μ+1}

    Args:
        family: "square", "neglog" or "power"
        gamma: Representation label
        n: Level index
        lam: Oscillator strength
        mu: Exponent parameter of the power family

    Returns:
        NonrelativisticImage
    """
    state = OscillatorState(gamma, n, lam)
    level = gamma + n + 1.0
    if family == "square":
        transform: TransformFamily = Square()
        identification = {"problem": "coulomb", "l": gamma, "Z": 0.5 * lam ** 2 * level,
                          "two_E": -0.25 * lam ** 4}
    elif family == "neglog":
        transform = NegLog(2.0)
        identification = {"problem": "morse", "l": 0, "two_E": -(2.0 * gamma + 1.0) ** 2,
                          "V": f"{0.5 * lam ** 4:.12g} e^(-4r) - {2.0 * lam ** 2 * level:.12g} e^(-2r)"}
    elif family == "power":
        if mu is None:
            raise DomainError("the power family needs μ")
        transform = Power(mu)
        m = transform.m
        identification = {"problem": "zero-energy", "two_E": 0.0,
                          "l": (2.0 * gamma + 1.0) / abs(m) - 0.5,
                          "exponents": [(4.0 - 2.0 * m) / m, (2.0 - 2.0 * m) / m]}
    else:
        raise DomainError(f"unknown PCT family '{family}', expected one of {PCT_FAMILIES}")

    logger.debug(f"PCT {transform.describe()} of γ={gamma} n={n} λ={lam}: {identification}")
    return NonrelativisticImage(transform, state, MappedUpper(transform, state.wavefunction), identification)
