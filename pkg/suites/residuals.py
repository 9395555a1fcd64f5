"""
Residual suite: every catalog state solves its first-order system
"""
import logging
import math
from typing import Any, Dict, List

import numpy as np

from dirac.dirac_core import lower_from_upper
from dirac.numerics import RadialGrid, dirac_residual, quadrature_inner, sample
from dirac.solutions import (
    SpinorSolution,
    coulomb_solution,
    morse_solution,
    oscillator_solution,
    zero_energy_solution,
)
from suites.base_suite import BaseSuite, default_grid
from utils.retry import safe_execute

logger = logging.getLogger(__name__)

# Levels checked per class
MAX_LEVEL = 3

OSCILLATOR_KAPPAS = (-2, -1, 1, 2)
COULOMB_CASES = ((-1, -0.5), (1, -0.5), (-2, -0.8))  # (κ, Z) at α = 1
MORSE_PARAMS = {"tau": 1.0, "rho": math.pi / 4.0, "lam": 4.0, "alpha": 0.1}
ZERO_ENERGY_CASES = ((0, 3.0), (1, 3.0), (1, -2.0))  # (l, β)

# Energy shift used to show the residual is sensitive to ε
ENERGY_PERTURBATION = 1e-3


def coulomb_residual_grid() -> RadialGrid:
    """Log grid starting at 1e-6; pointwise rounding dominates closer to the origin"""
    return RadialGrid.log_mapped(1e-6, 400.0, 4000)


class ResidualSuite(BaseSuite):
    """Pointwise residuals of both rows and the lower-from-upper map"""

    CITATIONS = (
        ("*.lower", "lower spinor component in terms of the upper one"),
    )

    def __init__(self, tolerances: Dict[str, float] = None):
        super().__init__("residuals", tolerances)

    def _cases(self):
        """(label, state builder, grid) for every checked state"""
        grid = default_grid("oscillator")
        for kappa in OSCILLATOR_KAPPAS:
            for n in range(MAX_LEVEL + 1):
                yield (f"oscillator.kappa={kappa}.n={n}",
                       lambda n=n, kappa=kappa: oscillator_solution(n, kappa, 1.0, 1.0), grid)

        grid = coulomb_residual_grid()
        for kappa, Z in COULOMB_CASES:
            for n in range(MAX_LEVEL + 1):
                yield (f"coulomb.kappa={kappa}.Z={Z:g}.n={n}",
                       lambda n=n, kappa=kappa, Z=Z: coulomb_solution(n, kappa, Z, 1.0), grid)

        grid = default_grid("morse")
        for n in range(MAX_LEVEL + 1):
            yield (f"morse.n={n}", lambda n=n: morse_solution(n, **MORSE_PARAMS), grid)

        grid = default_grid("zero-energy")
        for l, beta in ZERO_ENERGY_CASES:
            yield (f"zero-energy.l={l}.beta={beta:g}",
                   lambda l=l, beta=beta: zero_energy_solution(l, beta, 1.0), grid)

    def _state_checks(self, label: str, state: SpinorSolution, grid: RadialGrid) -> List[Dict[str, Any]]:
        checks = []
        residual = dirac_residual(state, state.potential, grid)
        checks.append(self.check(f"{label}.residual", "first-order system rows vanish",
                                 residual.value, self.tolerance("residual")))

        # Closed-form θ against the map from φ
        mapped = lower_from_upper(state.potential, state.energy, state.upper)
        difference = sample(mapped, grid) - sample(state.lower, grid)
        scale = residual.norm
        measured = math.sqrt(float(np.sum(grid.weights * difference ** 2))) / scale
        checks.append(self.check(f"{label}.lower", "θ = α/(C+ε)(A + d/dr)φ",
                                 measured, self.tolerance("lower_component")))
        return checks

    def _sensitivity_check(self) -> Dict[str, Any]:
        """A shifted ε must leave a residual of the size of the shift"""
        state = oscillator_solution(1, 1, 1.0, 1.0)
        grid = default_grid("oscillator")
        shifted = dirac_residual(state, state.potential, grid, energy=state.energy + ENERGY_PERTURBATION)
        deviation = abs(shifted.value / ENERGY_PERTURBATION - 1.0)
        return self.check("oscillator.energy-sensitivity", "residual of ε + δ equals δ",
                          deviation, 1e-6)

    def _report_coulomb_overlaps(self) -> None:
        """Cross-level overlaps of the upper components; μ_n differs per level so they need not vanish"""
        grid = coulomb_residual_grid()
        for kappa, Z in COULOMB_CASES:
            uppers = [sample(coulomb_solution(n, kappa, Z, 1.0).upper, grid) for n in range(MAX_LEVEL + 1)]
            for n in range(MAX_LEVEL):
                overlap = quadrature_inner(uppers[n], uppers[n + 1], grid)
                logger.warning(f"[{self.suite_name}] coulomb κ={kappa} Z={Z:g} ⟨φ_{n}, φ_{n + 1}⟩ = {overlap:.3e}")

    def run(self) -> List[Dict[str, Any]]:
        checks: List[Dict[str, Any]] = []
        for label, build, grid in self._cases():
            checks.extend(self.guarded(f"{label}.residual", "first-order system rows vanish",
                                       self.tolerance("residual"),
                                       lambda build=build, label=label, grid=grid:
                                       self._state_checks(label, build(), grid)))
        checks.extend(self.guarded("oscillator.energy-sensitivity", "residual of ε + δ equals δ",
                                   1e-6, self._sensitivity_check))
        safe_execute(self._report_coulomb_overlaps)
        logger.info(f"[{self.suite_name}] {len(checks)} checks")
        return checks
