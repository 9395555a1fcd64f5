"""
XPCT suite: transformed oscillator states against the catalog
"""
import logging
import math
from typing import Any, Dict, List

import numpy as np

from dirac.numerics import RadialGrid, dirac_residual
from dirac.solutions import (
    CoulombParams,
    MorseParams,
    coulomb_solution,
    morse_solution,
    zero_energy_solution,
)
from dirac.xpct import (
    TransformSpec,
    derive,
    map_wavefunctions,
    proportionality,
    reference_solution,
    spectrum_from_matching,
    verify_coupling_identity,
)
from suites.base_suite import BaseSuite, default_grid

logger = logging.getLogger(__name__)

IDENTITY_SAMPLES = 50
MAPPED_LEVELS = 3
ENERGY_TOLERANCE = 1e-12
PROPORTIONALITY_TOLERANCE = 1e-8
MATCHING_TOLERANCE = 1e-10

COULOMB_CASE = {"kappa": -1, "Z": -0.5, "alpha": 1.0}
MORSE_CASE = {"tau": 1.0, "rho": math.pi / 4.0, "lam": 4.0, "alpha": 0.1}
ZERO_ENERGY_CASES = ((0, 3.0), (1, -2.0))  # (l, β)


class XpctSuite(BaseSuite):
    """Coupling identity, term matching and mapped wavefunctions per family"""

    CITATIONS = (
        ("*.identity", "equality relation modulo a constant"),
        ("*.matching", "energy spectrum for the new problem"),
        ("*.n=*", "transformed spinor components"),
        ("*.kappa", "parameters of the transformed problem"),
        ("*.circle", "Dirac-Morse energy spectrum"),
    )
    DEFAULT_CITATION = "extended point canonical transformation"

    def __init__(self, tolerances: Dict[str, float] = None):
        super().__init__("xpct", tolerances)

    def _identity(self, label: str, spec: TransformSpec, result, xs) -> Dict[str, Any]:
        tolerance = self.tolerance("coupling_identity")
        report = verify_coupling_identity(spec, result, xs, tolerance=tolerance)
        # The constant must also be the one the matching predicts
        offset = abs(report.constant - report.expected) / max(abs(report.expected), 1.0)
        return self.check(f"{label}.identity", "A(q) − (Ĝ − q″/2q′)/q′ = const",
                          max(report.spread, offset), tolerance)

    def _matching(self, label: str, spec: TransformSpec, result, levels: List[int]) -> Dict[str, Any]:
        """Energy condition from the matching, evaluated on the derived levels"""
        relation = spectrum_from_matching(spec, result)
        logger.debug(f"{label} relation: {relation.relation} = 0")
        defect = 0.0
        for n in levels:
            level = result.level(n)
            values = {
                "epsilon": level.energy, "n": n, "p": abs(level.kappa_hat + 0.5),
                "alpha": spec.alpha, "Z": spec.Z, "kappa": result.kappa,
                "S": result.S, "C": result.C, "T": math.tan(result.rho),
            }
            defect = max(defect, relation.defect(values))
        return self.check(f"{label}.matching", "matched energy condition vanishes on ε_n", defect, MATCHING_TOLERANCE)

    def _mapped(self, label: str, spec: TransformSpec, result, n: int, catalog, grid: RadialGrid):
        mapped = map_wavefunctions(spec, result, reference_solution(result, n))
        residual = dirac_residual(mapped, result.potential(), grid)
        _, spread = proportionality(mapped.upper, catalog.upper, grid.points)
        return [
            self.check(f"{label}.n={n}.energy", "mapped ε equals the catalog ε",
                       abs(mapped.energy - catalog.energy), ENERGY_TOLERANCE),
            self.check(f"{label}.n={n}.residual", "mapped spinor solves the new system",
                       residual.value, self.tolerance("residual")),
            self.check(f"{label}.n={n}.proportional", "mapped φ ∝ catalog φ",
                       spread, PROPORTIONALITY_TOLERANCE),
        ]

    def _square(self) -> List[Dict[str, Any]]:
        spec = TransformSpec.for_coulomb(**COULOMB_CASE)
        result = derive(spec)
        target = CoulombParams(COULOMB_CASE["Z"], COULOMB_CASE["kappa"], COULOMB_CASE["alpha"])
        grid = RadialGrid.log_mapped(1e-6, 400.0, 4000)
        checks = [
            self.check("square.kappa", "κ² = σ² + (αZ)²", abs(result.kappa - target.kappa), ENERGY_TOLERANCE),
            self._identity("square", spec, result, np.linspace(0.2, 5.0, IDENTITY_SAMPLES)),
            self._matching("square", spec, result, list(range(MAPPED_LEVELS + 1))),
        ]
        for n in range(MAPPED_LEVELS + 1):
            catalog = coulomb_solution(n, COULOMB_CASE["kappa"], COULOMB_CASE["Z"], COULOMB_CASE["alpha"])
            checks += self._mapped("square", spec, result, n, catalog, grid)
        return checks

    def _neglog(self) -> List[Dict[str, Any]]:
        spec = TransformSpec.for_morse(**MORSE_CASE)
        result = derive(spec)
        params = MorseParams(**MORSE_CASE)
        grid = default_grid("morse")
        circle = max(abs(result.energy(n) ** 2 + (params.T * result.energy(n) - n * params.alpha * params.tau) ** 2 - 1.0)
                     for n in range(MAPPED_LEVELS + 1))
        checks = [
            self.check("neglog.circle", "ε² + (Tε − nατ)² = 1", circle, self.tolerance("morse_identity")),
            self._identity("neglog", spec, result, np.linspace(0.2, 3.0, IDENTITY_SAMPLES)),
            self._matching("neglog", spec, result, list(range(MAPPED_LEVELS + 1))),
        ]
        for n in range(MAPPED_LEVELS + 1):
            checks += self._mapped("neglog", spec, result, n, morse_solution(n, **MORSE_CASE), grid)
        return checks

    def _power(self) -> List[Dict[str, Any]]:
        grid = default_grid("zero-energy")
        checks = []
        for l, beta in ZERO_ENERGY_CASES:
            label = f"power.l={l}.beta={beta:g}"
            spec = TransformSpec.for_zero_energy(l, beta, 1.0)
            result = derive(spec)
            checks += [
                self.check(f"{label}.kappa", "κ = (κ̂ − μ)/(2μ + 1)", abs(result.kappa - (l if beta < 0 else -l - 1)),
                           ENERGY_TOLERANCE),
                self._identity(label, spec, result, np.linspace(0.2, 3.0, IDENTITY_SAMPLES)),
                self._matching(label, spec, result, [0]),
            ]
            checks += self._mapped(label, spec, result, 0, zero_energy_solution(l, beta, 1.0), grid)
        return checks

    def run(self) -> List[Dict[str, Any]]:
        checks: List[Dict[str, Any]] = []
        for name, body in (("square", self._square), ("neglog", self._neglog), ("power", self._power)):
            checks.extend(self.guarded(name, "point canonical transformation", 0.0, body))
        logger.info(f"[{self.suite_name}] {len(checks)} checks")
        return checks
