"""
Spectra suite: closed-form levels against finite-difference eigenvalues
"""
import logging
import math
from typing import Any, Dict, List

import numpy as np

from dirac.dirac_core import effective_potential, radial_potential
from dirac.errors import NonNormalizableError
from dirac.numerics import RadialGrid, extrapolated_eigenvalues, schrodinger_residual
from dirac.solutions import (
    CoulombParams,
    MorseParams,
    coulomb_nonrelativistic_limit,
    oscillator_solution,
    zero_energy_solution,
)
from suites.base_suite import BaseSuite, default_grid

logger = logging.getLogger(__name__)

OSCILLATOR_KAPPAS = (1, 2)
OSCILLATOR_LEVELS = 5

COULOMB_KAPPA = -1
COULOMB_ALPHA_Z = -0.5
COULOMB_LEVELS = 4

MORSE_TAU = 1.0
MORSE_RHO = math.pi / 4.0
MORSE_LAMBDA = 4.0
MORSE_ALPHA = 0.1

ZERO_ENERGY_CASES = ((0, 3.0), (1, 3.0), (0, -2.0), (1, -2.0))
ZERO_ENERGY_SHIFT = 1.01

NONRELATIVISTIC_ALPHA = 1e-4
NONRELATIVISTIC_Z = -1.0
NONRELATIVISTIC_LEVELS = 3


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


class SpectraSuite(BaseSuite):
    """Radial equation eigenvalues index by index"""

    CITATIONS = (
        ("oscillator*", "Dirac oscillator energy spectrum"),
        ("coulomb*", "Dirac-Coulomb energy spectrum"),
        ("morse*", "Dirac-Morse energy spectrum"),
        ("zero-energy*", "zero-energy solutions of power-law potentials"),
        ("nonrelativistic*", "nonrelativistic limit of the Coulomb spectrum"),
    )
    DEFAULT_CITATION = "radial Schrödinger-like equation"

    def __init__(self, tolerances: Dict[str, float] = None):
        super().__init__("spectra", tolerances)

    def _level_check(self, name: str, reference: str, pot, energy: float, n: int,
                     grid: RadialGrid, tolerance_key: str) -> Dict[str, Any]:
        """Eigenvalue n of −d² + F with ε frozen at ε_n against (ε_n² − 1)/α²"""
        expected = (energy ** 2 - 1.0) / pot.alpha ** 2
        levels = extrapolated_eigenvalues(lambda r: radial_potential(pot, energy, r), grid, n + 1)
        return self.check(name, reference, _relative(float(levels[n]), expected),
                          self.tolerance(tolerance_key))

    def _oscillator(self) -> List[Dict[str, Any]]:
        grid = default_grid("oscillator")
        checks = []
        for kappa in OSCILLATOR_KAPPAS:
            for n in range(OSCILLATOR_LEVELS):
                state = oscillator_solution(n, kappa, 1.0, 1.0)
                checks.append(self._level_check(
                    f"oscillator.kappa={kappa}.n={n}", "ε² = 1 + 2α²λ²(2n + l + κ + 1)",
                    state.potential, state.energy, n, grid, "oscillator_spectrum"))
        return checks

    def _coulomb(self) -> List[Dict[str, Any]]:
        grid = default_grid("coulomb")
        params = CoulombParams(COULOMB_ALPHA_Z, COULOMB_KAPPA, 1.0)
        pot = params.potential()
        checks = [self.check("coulomb.ground", "ε₀ = √(1 − (αZ)²) for κ = −1",
                             abs(params.energy(0) - math.sqrt(1.0 - COULOMB_ALPHA_Z ** 2)), 1e-10)]
        for n in range(COULOMB_LEVELS):
            checks.append(self._level_check(
                f"coulomb.n={n}", "ε = (1 + (αZ/N)²)^(−1/2)", pot, params.energy(n), n, grid,
                "coulomb_spectrum"))
        return checks

    def _morse(self) -> List[Dict[str, Any]]:
        params = MorseParams(MORSE_TAU, MORSE_RHO, MORSE_LAMBDA, MORSE_ALPHA)
        pot = params.potential()
        grid = default_grid("morse")
        admitted = params.admitted_levels()

        circle = max(abs(params.energy(n) ** 2 + (params.T * params.energy(n) - n * MORSE_ALPHA * MORSE_TAU) ** 2 - 1.0)
                     for n in admitted)
        expected_count = math.ceil(params.T / (MORSE_ALPHA * MORSE_TAU))
        checks = [
            self.check("morse.circle", "ε² + (Tε − nατ)² = 1", circle, self.tolerance("morse_identity")),
            self.check("morse.level-count", "levels with Tε_n > nατ", abs(len(admitted) - expected_count), 0.0),
        ]
        for n in admitted:
            checks.append(self._level_check(
                f"morse.n={n}", "ε² + (Tε − nατ)² = 1", pot, params.energy(n), n, grid, "morse_spectrum"))
        return checks

    def _zero_energy(self) -> List[Dict[str, Any]]:
        grid = default_grid("zero-energy")
        checks = []
        for l, beta in ZERO_ENERGY_CASES:
            label = f"zero-energy.l={l}.beta={beta:g}"
            try:
                state = zero_energy_solution(l, beta, 1.0)
            except NonNormalizableError as e:
                # r^{-κ} tail with κ = 0 is rejected before any numerics
                logger.debug(f"{label} rejected: {e}")
                checks.append(self.check(f"{label}.rejected", "non-normalizable tail rejected", 0.0, 0.0))
                continue
            pot = state.potential
            exact = schrodinger_residual(state.upper, lambda r: effective_potential(pot, 1.0, r), grid)
            shifted = schrodinger_residual(state.upper, lambda r: effective_potential(pot, ZERO_ENERGY_SHIFT, r), grid)
            checks.append(self.check(f"{label}.residual", "−φ″ + Fφ = 0 at ε = 1",
                                     exact.value, self.tolerance("residual")))
            checks.append(self.check(f"{label}.shifted", "ε = 1.01 leaves a residual ≥ 1e-3",
                                     shifted.value, 1e-3, passed=shifted.value >= 1e-3))
        return checks

    def _nonrelativistic(self) -> List[Dict[str, Any]]:
        checks = []
        for n in range(NONRELATIVISTIC_LEVELS):
            params = CoulombParams(NONRELATIVISTIC_Z, COULOMB_KAPPA, NONRELATIVISTIC_ALPHA)
            limit = coulomb_nonrelativistic_limit(n, COULOMB_KAPPA, NONRELATIVISTIC_Z, NONRELATIVISTIC_ALPHA)
            checks.append(self.check(f"nonrelativistic.n={n}", "(ε − 1)/α² → −Z²/(2N²)",
                                     _relative(params.binding(n), limit),
                                     self.tolerance("nonrelativistic_limit")))
        return checks

    def run(self) -> List[Dict[str, Any]]:
        checks: List[Dict[str, Any]] = []
        for name, reference, key, body in (
            ("oscillator", "ε² = 1 + 2α²λ²(2n + l + κ + 1)", "oscillator_spectrum", self._oscillator),
            ("coulomb", "ε = (1 + (αZ/N)²)^(−1/2)", "coulomb_spectrum", self._coulomb),
            ("morse", "ε² + (Tε − nατ)² = 1", "morse_spectrum", self._morse),
            ("zero-energy", "−φ″ + Fφ = 0 at ε = 1", "residual", self._zero_energy),
            ("nonrelativistic", "(ε − 1)/α² → −Z²/(2N²)", "nonrelativistic_limit", self._nonrelativistic),
        ):
            checks.extend(self.guarded(name, reference, self.tolerance(key), body))
        logger.info(f"[{self.suite_name}] {len(checks)} checks")
        return checks
