"""
Graded extension of SO(2,1) realized on a finite grid

L₊ and L₋ are the odd first-order elements built from G ∓ d/dr, L3 the
grading and L0 = {L₊, L₋} the even element whose diagonal blocks are the
superpartner operators −d² + G² ∓ G′.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigvalsh

from config.settings import Settings
from dirac.dirac_core import OddPotential, RelativisticPotential, ZeroW
from dirac.errors import DomainError, EigensolverError, ZeroMassFactorError
from dirac.numerics import (
    RadialGrid,
    derivative_matrix,
    discretize,
    eigenvalues_lowest,
    richardson,
)
from dirac.specialfn import ArrayLike

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Superpotential:
    """
    G(r) = κ/r + W(r)

    Attributes:
        kappa: Coefficient of 1/r
        w: Odd potential component
    """
    kappa: float
    w: OddPotential = field(default_factory=ZeroW)

    @classmethod
    def from_potential(cls, pot: RelativisticPotential) -> "Superpotential":
        return cls(pot.kappa, pot.w)

    def _check(self, r):
        if (self.kappa != 0 or self.w.singular_at_origin) and np.any(np.asarray(r) <= 0.0):
            raise DomainError("radial argument must be positive")

    def value(self, r: ArrayLike) -> ArrayLike:
        self._check(r)
        r_arr = np.asarray(r, dtype=np.float64)
        return (0.0 if self.kappa == 0 else self.kappa / r_arr) + self.w.value(r_arr)

    def derivative(self, r: ArrayLike) -> ArrayLike:
        self._check(r)
        r_arr = np.asarray(r, dtype=np.float64)
        return (0.0 if self.kappa == 0 else -self.kappa / r_arr ** 2) + self.w.derivative(r_arr)

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return self.value(r)


def partner_potentials(G: Superpotential, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    Superpartner potentials

    Args:
        G: Superpotential
        r: Radius (scalar or array)

    Returns:
        (V₊, V₋) = (G² + G′, G² − G′)
    """
    g, dg = G.value(r), G.derivative(r)
    plus, minus = g ** 2 + dg, g ** 2 - dg
    if np.ndim(r) == 0:
        return float(plus), float(minus)
    return plus, minus


@dataclass(frozen=True)
class AlgebraRealization:
    """
    2N×2N matrix images of the graded algebra

    Attributes:
        grid: Uniform grid carrying both components
        G: Superpotential
        D: Antisymmetric central-difference derivative
        Lp: [[0, G − D], [0, 0]]
        Lm: [[0, 0], [G + D, 0]]
        L3: ½ diag(+1, −1)
        L0: {L₊, L₋}
    """
    grid: RadialGrid
    G: Superpotential
    D: NDArray[np.float64] = field(repr=False)
    Lp: NDArray[np.float64] = field(repr=False)
    Lm: NDArray[np.float64] = field(repr=False)
    L3: NDArray[np.float64] = field(repr=False)
    L0: NDArray[np.float64] = field(repr=False)

    @property
    def size(self) -> int:
        return self.grid.n_points

    def minus_block(self) -> NDArray[np.float64]:
        """Upper diagonal block of L0, the discrete −d² + G² − G′"""
        n = self.size
        return self.L0[:n, :n]

    def plus_block(self) -> NDArray[np.float64]:
        """Lower diagonal block of L0, the discrete −d² + G² + G′"""
        n = self.size
        return self.L0[n:, n:]


def realize_algebra(G: Superpotential, grid: RadialGrid) -> AlgebraRealization:
    """
    Matrix realization on a uniform Dirichlet grid

    Args:
        G: Superpotential
        grid: Uniform grid with at least Settings.MIN_GRID_POINTS points

    Returns:
        AlgebraRealization
    """
    n = grid.n_points
    D = derivative_matrix(grid)
    g = np.diag(G.value(grid.points))
    zero = np.zeros((n, n))

    Lp = np.block([[zero, g - D], [zero, zero]])
    Lm = np.block([[zero, zero], [g + D, zero]])
    L3 = 0.5 * np.diag(np.concatenate((np.ones(n), -np.ones(n))))
    L0 = Lp @ Lm + Lm @ Lp
    logger.debug(f"realized graded algebra on {grid}")
    return AlgebraRealization(grid, G, D, Lp, Lm, L3, L0)


def _commutator(a, b):
    return a @ b - b @ a


def relation_residuals(realization: AlgebraRealization) -> Dict[str, float]:
    """
    Frobenius norms of the defining relations

    Returns:
        Mapping with keys L3_Lp, L3_Lm, anticommutator, L0_L3, L0_Lp, L0_Lm,
        hermiticity; all vanish (the last two up to rounding)
    """
    Lp, Lm, L3, L0 = realization.Lp, realization.Lm, realization.L3, realization.L0
    norm = np.linalg.norm
    return {
        "L3_Lp": float(norm(_commutator(L3, Lp) - Lp)),
        "L3_Lm": float(norm(_commutator(L3, Lm) + Lm)),
        "anticommutator": float(norm(Lp @ Lm + Lm @ Lp - L0)),
        "L0_L3": float(norm(_commutator(L0, L3))),
        "L0_Lp": float(norm(_commutator(L0, Lp))),
        "L0_Lm": float(norm(_commutator(L0, Lm))),
        "hermiticity": float(norm(Lp.T - Lm) + norm(L0.T - L0)),
    }


def block_discretization_error(G: Superpotential, grid: RadialGrid, probe, probe_second) -> float:
    """
    Weighted L² distance between L0's blocks and −d² + G² ∓ G′ on a probe

    Args:
        G: Superpotential
        grid: Uniform grid
        probe: Smooth function vanishing at both ends
        probe_second: Its exact second derivative

    Returns:
        Combined error of both blocks, O(h²)
    """
    realization = realize_algebra(G, grid)
    r = grid.points
    f = probe(r)
    plus, minus = partner_potentials(G, r)
    exact_minus = -probe_second(r) + minus * f
    exact_plus = -probe_second(r) + plus * f
    err_minus = realization.minus_block() @ f - exact_minus
    err_plus = realization.plus_block() @ f - exact_plus
    return math.sqrt(float(np.sum(grid.weights * (err_minus ** 2 + err_plus ** 2))))


def assemble_Q(lam_plus: float, lam3: float, realization: AlgebraRealization,
               lam_minus: Optional[float] = None) -> NDArray[np.float64]:
    """
    Dirac operator as the span of the algebra

    Q = (2/λ3)(λ₊L₊ + λ₋L₋ + λ3L3), i.e. ±1 on the diagonal blocks and
    α(G ∓ D) off the diagonal with α = 2λ₊/λ3. The L0 coefficient is zero.

    Args:
        lam_plus: λ₊ (real)
        lam3: λ3, nonzero
        realization: AlgebraRealization
        lam_minus: λ₋, must equal λ₊ when given

    Returns:
        Symmetric 2N×2N matrix
    """
    if lam3 == 0.0:
        raise ZeroMassFactorError("λ3 = 0 leaves Q without a mass term")
    if lam_minus is not None and lam_minus != lam_plus:
        raise DomainError(f"λ₋ must be the conjugate of λ₊, got λ₊={lam_plus}, λ₋={lam_minus}")
    lam_minus = lam_plus
    return (2.0 / lam3) * (lam_plus * realization.Lp + lam_minus * realization.Lm + lam3 * realization.L3)


def q_positive_spectrum(Q: NDArray[np.float64], k: int) -> NDArray[np.float64]:
    """Lowest k positive eigenvalues of the symmetric matrix Q"""
    values = eigvalsh(Q)
    positive = values[values > 0.0]
    if len(positive) < k:
        raise EigensolverError(f"Q has {len(positive)} positive eigenvalues, {k} requested")
    return positive[:k]


@dataclass
class SusyReport:
    """
    Pairing of the V₊ and V₋ spectra

    Attributes:
        plus: Extrapolated lowest levels of V₊
        minus: Extrapolated lowest levels of V₋
        zero_mode: Unpaired V₋ ground level, None when absent
        pairs: (V₋ level, V₊ level) pairs
        max_deviation: Largest relative pair mismatch
    """
    plus: List[float]
    minus: List[float]
    zero_mode: Optional[float]
    pairs: List[Tuple[float, float]]
    max_deviation: float

    def to_dict(self) -> Dict:
        return {
            "plus": self.plus,
            "minus": self.minus,
            "zero_mode": self.zero_mode,
            "pairs": [list(p) for p in self.pairs],
            "max_deviation": self.max_deviation,
        }


def susy_degeneracy_check(G: Superpotential, grid: RadialGrid, k: int) -> SusyReport:
    """
    Pair the spectra of −d² + V₊ and −d² + V₋

    Levels come from grid and grid.refined() combined by Richardson. The
    V₋ ground level counts as a zero mode when it is below ten times the
    discretization error estimate of the first excited V₋ level.

    Args:
        G: Superpotential
        grid: Grid for the tridiagonal discretizations
        k: Number of levels per operator, at least 2

    Returns:
        SusyReport
    """
    if k < 2:
        raise EigensolverError(f"pairing needs at least 2 levels, got {k}")

    def levels(potential):
        coarse = eigenvalues_lowest(discretize(potential, grid), k)
        fine = eigenvalues_lowest(discretize(potential, grid.refined()), k)
        return richardson(coarse, fine), np.abs(fine - coarse)

    plus, _ = levels(lambda r: partner_potentials(G, r)[0])
    minus, minus_error = levels(lambda r: partner_potentials(G, r)[1])

    threshold = max(10.0 * float(minus_error[1]), Settings.tolerance("susy_pairing"))
    zero_mode = float(minus[0]) if abs(minus[0]) < threshold else None
    paired_minus = minus[1:] if zero_mode is not None else minus
    pairs = [(float(m), float(p)) for m, p in zip(paired_minus, plus)]
    max_deviation = max(abs(m - p) / max(abs(m), abs(p), 1e-300) for m, p in pairs)

    logger.info(f"SUSY pairing over {len(pairs)} levels, zero mode {zero_mode}, max deviation {max_deviation:.3g}")
    return SusyReport([float(x) for x in plus], [float(x) for x in minus], zero_mode, pairs, max_deviation)
