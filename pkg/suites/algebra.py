"""
Algebra suite: graded relations, superpartner pairing and the Q operator
"""
import logging
from typing import Any, Dict, List

import numpy as np

from dirac.dirac_core import LinearW
from dirac.numerics import RadialGrid
from dirac.superalgebra import (
    Superpotential,
    assemble_Q,
    block_discretization_error,
    q_positive_spectrum,
    realize_algebra,
    relation_residuals,
    susy_degeneracy_check,
)
from suites.base_suite import BaseSuite

logger = logging.getLogger(__name__)

RELATION_SIZES = (256, 512)
RELATION_R_MAX = 10.0

# Relations hold up to the rounding of matrix products, relative to ‖L0‖‖L₊‖
RELATIONS = ("L3_Lp", "L3_Lm", "anticommutator", "L0_L3", "L0_Lp", "L0_Lm", "hermiticity")
ROUNDING_TOLERANCE = 1e-12

SUSY_KAPPAS = (-1, 1)
SUSY_LEVELS = 4
SUSY_GRID = (10.0, 2000)

Q_GRID = (8.0, 500)
Q_LEVELS = 6
Q_TOLERANCE = 0.05


def oscillator_superpotential(kappa: float, lam: float = 1.0) -> Superpotential:
    """G = κ/r + λ²r"""
    return Superpotential(kappa, LinearW(lam ** 2))


def _probe(r):
    return r ** 6 * np.exp(-r ** 2 / 2.0)


def _probe_second(r):
    return (30.0 * r ** 4 - 13.0 * r ** 6 + r ** 8) * np.exp(-r ** 2 / 2.0)


class AlgebraSuite(BaseSuite):
    """Finite-grid realization of the graded algebra"""

    CITATIONS = (
        ("relation*", "anticommutation relations of the superalgebra"),
        ("blocks*", "superpartner potentials"),
        ("susy*", "zero energy eigenvalue belongs only to V₋"),
        ("Q*", "Dirac operator as a linear combination of the generators"),
    )
    DEFAULT_CITATION = "graded superalgebra"

    def __init__(self, tolerances: Dict[str, float] = None):
        super().__init__("algebra", tolerances)

    def _relations(self) -> List[Dict[str, Any]]:
        G = oscillator_superpotential(-1.0)
        worst = {key: 0.0 for key in RELATIONS}
        for size in RELATION_SIZES:
            realization = realize_algebra(G, RadialGrid.uniform(RELATION_R_MAX, size))
            residuals = relation_residuals(realization)
            scale = float(np.linalg.norm(realization.L0)) * float(np.linalg.norm(realization.Lp))
            for key in RELATIONS:
                worst[key] = max(worst[key], residuals[key] / scale)
        return [self.check(f"relation.{key}", "graded commutation relation", worst[key], ROUNDING_TOLERANCE)
                for key in RELATIONS]

    def _block_convergence(self) -> Dict[str, Any]:
        G = oscillator_superpotential(-1.0)
        coarse_grid = RadialGrid.uniform(RELATION_R_MAX, RELATION_SIZES[0])
        coarse = block_discretization_error(G, coarse_grid, _probe, _probe_second)
        fine = block_discretization_error(G, coarse_grid.refined(), _probe, _probe_second)
        ratio = coarse / fine
        logger.debug(f"block errors {coarse:.3e} -> {fine:.3e}, ratio {ratio:.3f}")
        return self.check("blocks.convergence", "L0 blocks → −d² + G² ∓ G′ at second order",
                          abs(ratio - 4.0), self.tolerance("convergence_ratio"))

    def _susy(self) -> List[Dict[str, Any]]:
        checks = []
        r_max, size = SUSY_GRID
        for kappa in SUSY_KAPPAS:
            report = susy_degeneracy_check(oscillator_superpotential(kappa), RadialGrid.uniform(r_max, size),
                                           SUSY_LEVELS)
            checks.append(self.check(f"susy.kappa={kappa}.pairing", "spec(V₊) = spec(V₋) \\ {0}",
                                     report.max_deviation, self.tolerance("susy_pairing")))
            # V₋ has a zero mode exactly when e^{−∫G} is normalizable
            has_zero_mode = kappa < 0
            checks.append(self.check(f"susy.kappa={kappa}.zero-mode", "zero mode iff e^{−∫G} normalizable",
                                     abs(report.zero_mode or 0.0), self.tolerance("susy_pairing"),
                                     passed=(report.zero_mode is not None) == has_zero_mode))
        return checks

    def _q_spectrum(self) -> Dict[str, Any]:
        """Q at λ₊ = 1, λ3 = 2 is the α = 1 oscillator with κ = 1: (ε² − 1)/2 ∈ {3, 5, 7, ...}"""
        r_max, size = Q_GRID
        realization = realize_algebra(oscillator_superpotential(1.0), RadialGrid.uniform(r_max, size))
        positive = q_positive_spectrum(assemble_Q(1.0, 2.0, realization), Q_LEVELS)
        values = 0.5 * (positive ** 2 - 1.0)
        nearest = np.maximum(3.0, 2.0 * np.round((values - 1.0) / 2.0) + 1.0)
        deviation = float(np.max(np.abs(values - nearest)))
        covered = all(np.any(np.abs(values - target) <= Q_TOLERANCE) for target in (3.0, 5.0, 7.0))
        return self.check("Q.spectrum", "(ε² − 1)/(2α²λ²) = 2n + l + κ + 1", deviation, Q_TOLERANCE,
                          passed=deviation <= Q_TOLERANCE and covered)

    def run(self) -> List[Dict[str, Any]]:
        checks: List[Dict[str, Any]] = []
        checks.extend(self.guarded("relations", "graded commutation relation", ROUNDING_TOLERANCE, self._relations))
        checks.extend(self.guarded("blocks.convergence", "L0 blocks → −d² + G² ∓ G′ at second order",
                                   self.tolerance("convergence_ratio"), self._block_convergence))
        checks.extend(self.guarded("susy", "spec(V₊) = spec(V₋) \\ {0}",
                                   self.tolerance("susy_pairing"), self._susy))
        checks.extend(self.guarded("Q.spectrum", "(ε² − 1)/(2α²λ²) = 2n + l + κ + 1",
                                   Q_TOLERANCE, self._q_spectrum))
        logger.info(f"[{self.suite_name}] {len(checks)} checks")
        return checks
