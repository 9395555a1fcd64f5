"""
Finite-difference verification machinery

Radial grids, the central-difference discretization of −d²/dr² + F(r),
lowest eigenvalues by Sturm-sequence bisection, trapezoid quadrature and the
residual norms used to validate closed forms.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import eigvalsh_tridiagonal

from config.settings import Settings
from dirac.dirac_core import RelativisticPotential, residual_rows
from dirac.errors import (
    DomainError,
    EigensolverError,
    GridError,
    GridMismatchError,
    GridTooSmallError,
)
from dirac.specialfn import RadialFunction

logger = logging.getLogger(__name__)

MAPPINGS = ("uniform", "log")


@dataclass(frozen=True)
class RadialGrid:
    """
    N interior points of a Dirichlet problem on (r_min, r_max)

    Uniform grids use r_i = r_min + i·h with h = (r_max − r_min)/(N+1).
    Log grids are uniform in s = ln r. A Uniform grid may start at a negative
    r_min for whole-line problems.

    Attributes:
        mapping: "uniform" or "log"
        n_points: Number of interior points N
        r_min: Left end (not a grid point)
        r_max: Right end (not a grid point)
    """
    mapping: str
    n_points: int
    r_max: float
    r_min: float = 0.0

    def __post_init__(self):
        if self.mapping not in MAPPINGS:
            raise GridError(f"unknown grid mapping '{self.mapping}', expected one of {MAPPINGS}")
        if self.n_points < Settings.MIN_GRID_POINTS:
            raise GridTooSmallError(
                f"grid needs at least {Settings.MIN_GRID_POINTS} interior points, got {self.n_points}"
            )
        if not self.r_max > self.r_min:
            raise GridError(f"r_max must exceed r_min, got [{self.r_min}, {self.r_max}]")
        if self.mapping == "log" and not self.r_min > 0.0:
            raise GridError(f"log grids need r_min > 0, got {self.r_min}")

    @classmethod
    def uniform(cls, r_max: float, n_points: int, r_min: float = 0.0) -> "RadialGrid":
        return cls("uniform", n_points, r_max, r_min)

    @classmethod
    def log_mapped(cls, r_min: float, r_max: float, n_points: int) -> "RadialGrid":
        return cls("log", n_points, r_max, r_min)

    @property
    def step(self) -> float:
        """h in r (uniform) or in s = ln r (log)"""
        if self.mapping == "uniform":
            return (self.r_max - self.r_min) / (self.n_points + 1)
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.n_points + 1)

    @cached_property
    def points(self) -> NDArray[np.float64]:
        index = np.arange(1, self.n_points + 1, dtype=np.float64)
        if self.mapping == "uniform":
            return self.r_min + index * self.step
        return np.exp(math.log(self.r_min) + index * self.step)

    @cached_property
    def weights(self) -> NDArray[np.float64]:
        """
        Trapezoid weights of the closed grid restricted to the interior

        The two end-point half weights are folded onto the outermost
        interior points, so constants integrate exactly on Uniform grids.
        """
        if self.mapping == "uniform":
            weights = np.full(self.n_points, self.step)
            weights[0] += 0.5 * self.step
            weights[-1] += 0.5 * self.step
            return weights
        # dr = r ds
        weights = self.step * self.points
        weights[0] += 0.5 * self.step * self.r_min
        weights[-1] += 0.5 * self.step * self.r_max
        return weights

    def refined(self) -> "RadialGrid":
        """Same interval with the step exactly halved (2N+1 interior points)"""
        return RadialGrid(self.mapping, 2 * self.n_points + 1, self.r_max, self.r_min)

    def __str__(self) -> str:
        return f"RadialGrid({self.mapping}, N={self.n_points}, [{self.r_min:g}, {self.r_max:g}])"


@dataclass(frozen=True)
class TridiagonalOperator:
    """
    Symmetric tridiagonal matrix with an optional grid handle

    For log grids the stored matrix is the symmetrized form in which
    φ = scaling · w, with w the eigenvector of this matrix.

    Attributes:
        diag: N diagonal entries
        offdiag: N−1 off-diagonal entries (shared above and below)
        grid: Grid the operator was built on, if any
        scaling: Diagonal conjugation mapping eigenvectors back to φ
    """
    diag: NDArray[np.float64]
    offdiag: NDArray[np.float64]
    grid: Optional[RadialGrid] = None
    scaling: Optional[NDArray[np.float64]] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.offdiag) != len(self.diag) - 1:
            raise EigensolverError(
                f"off-diagonal length {len(self.offdiag)} does not match diagonal length {len(self.diag)}"
            )

    @property
    def size(self) -> int:
        return len(self.diag)

    @property
    def scale(self) -> float:
        """Gershgorin bound on the spectral radius"""
        off = np.abs(self.offdiag)
        padded = np.concatenate(([0.0], off)) + np.concatenate((off, [0.0]))
        return float(np.max(np.abs(self.diag) + padded))

    def to_dense(self) -> NDArray[np.float64]:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def apply(self, vector: NDArray[np.float64]) -> NDArray[np.float64]:
        result = self.diag * vector
        result[:-1] += self.offdiag * vector[1:]
        result[1:] += self.offdiag * vector[:-1]
        return result


def discretize(potential: Callable, grid: RadialGrid) -> TridiagonalOperator:
    """
    Central-difference −d²/dr² + F with Dirichlet ends

    Log grids use r = e^s and φ = r^{−1/2}·w, which leaves the symmetric
    matrix M_ii = (2/h² + 1/4)/r_i² + F_i, M_{i,i+1} = −1/(h² r_i r_{i+1})
    with the same eigenvalues.

    Args:
        potential: F evaluated on an array of radii
        grid: RadialGrid

    Returns:
        TridiagonalOperator
    """
    r = grid.points
    values = np.asarray(potential(r), dtype=np.float64)
    if values.shape != r.shape:
        values = np.broadcast_to(values, r.shape).copy()
    if not np.all(np.isfinite(values)):
        bad = r[~np.isfinite(values)][0]
        raise DomainError(f"potential is not finite at grid point r={bad:g}")

    h = grid.step
    if grid.mapping == "uniform":
        diag = 2.0 / h ** 2 + values
        offdiag = np.full(grid.n_points - 1, -1.0 / h ** 2)
        return TridiagonalOperator(diag, offdiag, grid)

    diag = (2.0 / h ** 2 + 0.25) / r ** 2 + values
    offdiag = -1.0 / (h ** 2 * r[:-1] * r[1:])
    return TridiagonalOperator(diag, offdiag, grid, scaling=r ** -0.5)


def eigenvalues_lowest(op: TridiagonalOperator, k: int) -> NDArray[np.float64]:
    """
    Lowest k eigenvalues by LAPACK bisection (stebz)

    Args:
        op: Symmetric tridiagonal operator
        k: Number of eigenvalues

    Returns:
        k eigenvalues in ascending order
    """
    if k < 1 or k > op.size:
        raise EigensolverError(f"requested {k} eigenvalues of a {op.size}×{op.size} operator")

    # absolute tolerance; log-mapped matrices have entries far above the
    # eigenvalues of interest, so a norm-relative default would be useless
    values = eigvalsh_tridiagonal(
        op.diag, op.offdiag,
        select="i", select_range=(0, k - 1),
        lapack_driver="stebz", tol=Settings.EIGEN_TOLERANCE,
    )
    logger.debug(f"lowest {k} eigenvalues of N={op.size}: {values[:min(k, 5)]}")
    return np.asarray(values, dtype=np.float64)


def sturm_count(op: TridiagonalOperator, shift: float) -> int:
    """
    Number of eigenvalues strictly below shift

    Counts negative pivots of the LDLᵀ factorization of op − shift·I.
    """
    tiny = np.finfo(np.float64).tiny
    count = 0
    pivot = 1.0
    for i in range(op.size):
        coupling = op.offdiag[i - 1] ** 2 / pivot if i > 0 else 0.0
        pivot = op.diag[i] - shift - coupling
        if pivot == 0.0:
            pivot = -tiny
        if pivot < 0.0:
            count += 1
    return count


def richardson(coarse: NDArray, fine: NDArray, order: int = 2) -> NDArray:
    """Cancel the leading h^order error of results at h and h/2"""
    factor = 2.0 ** order
    return (factor * np.asarray(fine) - np.asarray(coarse)) / (factor - 1.0)


def extrapolated_eigenvalues(potential: Callable, grid: RadialGrid, k: int) -> NDArray[np.float64]:
    """Lowest k eigenvalues on grid and grid.refined(), Richardson combined"""
    coarse = eigenvalues_lowest(discretize(potential, grid), k)
    fine = eigenvalues_lowest(discretize(potential, grid.refined()), k)
    return richardson(coarse, fine)


def sample(func, grid: RadialGrid) -> NDArray[np.float64]:
    """Evaluate a radial function on the grid points"""
    return np.asarray(func(grid.points), dtype=np.float64)


def quadrature_inner(f: Sequence[float], g: Sequence[float], grid: RadialGrid) -> float:
    """
    Trapezoid inner product ∑ w_i f_i g_i

    Args:
        f: Values on the grid points
        g: Values on the grid points
        grid: RadialGrid both were sampled on

    Returns:
        Approximation of ∫ f g dr
    """
    f_arr, g_arr = np.asarray(f, dtype=np.float64), np.asarray(g, dtype=np.float64)
    if f_arr.shape != (grid.n_points,) or g_arr.shape != (grid.n_points,):
        raise GridMismatchError(
            f"grid functions of shape {f_arr.shape} and {g_arr.shape} on a grid of {grid.n_points} points"
        )
    return float(np.sum(grid.weights * f_arr * g_arr))


@dataclass(frozen=True)
class ResidualResult:
    """
    Relative L² residual

    Attributes:
        value: ‖residual‖ / ‖state‖, NaN when degenerate
        norm: ‖state‖
        degenerate: True when the state vanishes on the grid
    """
    value: float
    norm: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


def _relative(residual_sq: float, norm_sq: float) -> ResidualResult:
    norm = math.sqrt(norm_sq)
    if norm == 0.0:
        logger.warning("residual requested for a state that vanishes on the grid")
        return ResidualResult(math.nan, 0.0, degenerate=True)
    return ResidualResult(math.sqrt(residual_sq) / norm, norm)


def dirac_residual(solution, pot: RelativisticPotential, grid: RadialGrid,
                   energy: float = None) -> ResidualResult:
    """
    Relative residual of both rows of the first-order system

    Args:
        solution: SpinorSolution (anything with upper, lower and energy)
        pot: Problem definition matching the solution
        grid: Evaluation grid
        energy: Override of solution.energy, for sensitivity checks

    Returns:
        ResidualResult
    """
    eps = solution.energy if energy is None else energy
    r = grid.points
    row1, row2 = residual_rows(pot, eps, solution.upper, solution.lower, r)
    upper, lower = solution.upper(r), solution.lower(r)
    w = grid.weights
    return _relative(float(np.sum(w * (row1 ** 2 + row2 ** 2))),
                     float(np.sum(w * (upper ** 2 + lower ** 2))))


def schrodinger_residual(phi: RadialFunction, potential: Callable, grid: RadialGrid,
                         eigenvalue: float = 0.0) -> ResidualResult:
    """
    Relative residual of −φ″ + Fφ = eigenvalue·φ

    Args:
        phi: Radial function, second_derivative() analytic or central differences
        potential: F evaluated on arrays
        grid: Evaluation grid
        eigenvalue: Right-hand side constant

    Returns:
        ResidualResult
    """
    r = grid.points
    values = phi(r)
    residual = -phi.second_derivative(r) + (np.asarray(potential(r)) - eigenvalue) * values
    w = grid.weights
    return _relative(float(np.sum(w * residual ** 2)), float(np.sum(w * values ** 2)))


def derivative_matrix(grid: RadialGrid) -> NDArray[np.float64]:
    """Antisymmetric central-difference d/dr with Dirichlet truncation (dense)"""
    _check_dense(grid)
    off = np.full(grid.n_points - 1, 0.5 / grid.step)
    return np.diag(off, 1) - np.diag(off, -1)


def laplacian_matrix(grid: RadialGrid) -> NDArray[np.float64]:
    """Central-difference d²/dr² with Dirichlet ends (dense)"""
    _check_dense(grid)
    h2 = grid.step ** 2
    off = np.full(grid.n_points - 1, 1.0 / h2)
    return np.diag(np.full(grid.n_points, -2.0 / h2)) + np.diag(off, 1) + np.diag(off, -1)


def _check_dense(grid: RadialGrid):
    if grid.mapping != "uniform":
        raise GridError("dense operator realizations need a uniform grid")
    if grid.n_points > Settings.MAX_DENSE_POINTS:
        raise GridError(
            f"dense realization limited to {Settings.MAX_DENSE_POINTS} points, got {grid.n_points}"
        )
