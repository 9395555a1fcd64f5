# tests/conftest.py
import math

import pytest

from dirac.numerics import RadialGrid


@pytest.fixture
def oscillator_grid():
    """Uniform grid on (0, 12) used for oscillator states."""
    return RadialGrid.uniform(12.0, 4000)


@pytest.fixture
def coulomb_grid():
    """Log-mapped grid reaching deep into the Coulomb tail."""
    return RadialGrid.log_mapped(1e-6, 400.0, 4000)


@pytest.fixture
def morse_grid():
    """Uniform grid covering the whole-line Morse states, including r < 0."""
    return RadialGrid.uniform(12.0, 4000, r_min=-3.0)


@pytest.fixture
def small_grid():
    """Grid small enough for dense matrix realizations."""
    return RadialGrid.uniform(10.0, 128)


@pytest.fixture
def morse_params():
    """τ = 1, ρ = π/4, λ = 4, α = 0.1: ten normalizable levels out of fifteen."""
    return {"tau": 1.0, "rho": math.pi / 4, "lam": 4.0, "alpha": 0.1}
