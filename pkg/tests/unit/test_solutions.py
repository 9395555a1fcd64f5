# tests/unit/test_solutions.py
import math

import numpy as np
import pytest

from dirac.errors import (
    DomainError,
    ExcludedParameterError,
    InvalidBranchError,
    LevelCountError,
    NoBoundStateError,
    NonNormalizableError,
    SupercriticalError,
)
from dirac.numerics import RadialGrid, dirac_residual
from dirac.solutions import (
    CoulombParams,
    MorseParams,
    ZeroEnergyParams,
    coulomb_nonrelativistic_limit,
    coulomb_solution,
    morse_solution,
    oscillator_branch,
    oscillator_energy,
    oscillator_solution,
    solution_builder,
    spectrum_table,
    zero_energy_solution,
)
from dirac.specialfn import ZeroFunction


# ---------------------------------------------------------------------------
# Dirac-Oscillator
# ---------------------------------------------------------------------------

def test_oscillator_branch():
    assert oscillator_branch(2) == 2
    assert oscillator_branch(0) == 0
    assert oscillator_branch(-1) == 0
    assert oscillator_branch(-3) == 2
    with pytest.raises(InvalidBranchError):
        oscillator_branch(0.5)


def test_oscillator_energies():
    """(ε² − 1)/α² = 2λ²(2n + l + κ + 1): 6, 10, 14 for κ = 1"""
    levels = [(oscillator_energy(n, 1, 1.0, 1.0) ** 2 - 1.0) for n in range(3)]

    np.testing.assert_allclose(levels, [6.0, 10.0, 14.0], rtol=1e-14)
    # the κ = −l−1 ground level sits at ε = 1
    assert oscillator_energy(0, -1, 1.0, 1.0) == 1.0
    assert oscillator_energy(2, -3, 0.5, 0.3) == pytest.approx(math.sqrt(1.0 + 2 * 0.09 * 0.25 * 4), rel=1e-14)

    with pytest.raises(DomainError):
        oscillator_energy(-1, 1, 1.0, 1.0)


@pytest.mark.parametrize("kappa", [-2, -1, 1, 2])
@pytest.mark.parametrize("n", [0, 1, 3])
def test_oscillator_states_solve_the_dirac_system(kappa, n, oscillator_grid):
    solution = oscillator_solution(n, kappa, 1.0, 1.0)

    residual = dirac_residual(solution, solution.potential, oscillator_grid)

    assert residual.value < 1e-8
    assert solution.class_tag == "oscillator"
    assert solution.params["l"] == oscillator_branch(kappa)


def test_oscillator_upper_component_is_normalized():
    grid = RadialGrid.uniform(12.0, 16000)
    for kappa in (-2, 1):
        for n in range(3):
            assert oscillator_solution(n, kappa, 1.0, 1.0).norm(grid) == pytest.approx(1.0, abs=1e-8)


def test_oscillator_lower_vanishes_for_ground_level_of_negative_branch():
    solution = oscillator_solution(0, -2, 1.0, 1.0)

    assert isinstance(solution.lower, ZeroFunction)
    assert solution.energy == 1.0


# ---------------------------------------------------------------------------
# Dirac-Coulomb
# ---------------------------------------------------------------------------

def test_coulomb_parameters():
    params = CoulombParams(-0.5, -1, 1.0)

    assert params.S == pytest.approx(0.5)
    assert params.C == pytest.approx(math.sqrt(0.75))
    assert params.sigma == pytest.approx(-math.sqrt(0.75))
    assert params.s == pytest.approx(math.sqrt(0.75) - 1.0)
    assert params.energy(0) == pytest.approx(math.sqrt(1.0 - 0.25), rel=1e-14)
    assert CoulombParams(-0.5, -1, 1.0, branch=-1).C == pytest.approx(-math.sqrt(0.75))


def test_coulomb_admissibility():
    with pytest.raises(InvalidBranchError):
        CoulombParams(-0.5, 0, 1.0)
    with pytest.raises(SupercriticalError):
        CoulombParams(-2.0, -1, 1.0)
    with pytest.raises(SupercriticalError):
        CoulombParams(1.0, 1, 1.0)
    with pytest.raises(DomainError):
        CoulombParams(-0.5, -1, 1.0, branch=0)
    # repulsive charge, positive energy: no bound state
    with pytest.raises(NoBoundStateError):
        coulomb_solution(0, -1, 0.5, 1.0)


def test_coulomb_without_charge_reports_unsigned_zero_scale():
    params = CoulombParams(0.0, -1, 1.0)

    rows = spectrum_table("coulomb", {"kappa": -1, "Z": 0.0, "alpha": 1.0}, 0, 1)

    assert math.copysign(1.0, params.mu(0)) == 1.0
    assert [row.status for row in rows] == ["no-bound-state", "no-bound-state"]
    assert rows[0].reason.startswith("μ_0 = 0 ")
    assert "-0" not in rows[1].reason


@pytest.mark.parametrize("kappa,Z", [(-1, -0.5), (1, -0.5), (-2, -0.8)])
@pytest.mark.parametrize("n", [0, 2])
def test_coulomb_states_solve_the_dirac_system(kappa, Z, n, coulomb_grid):
    solution = coulomb_solution(n, kappa, Z, 1.0)

    residual = dirac_residual(solution, solution.potential, coulomb_grid)

    assert residual.value < 1e-8
    assert solution.energy == pytest.approx(CoulombParams(Z, kappa, 1.0).energy(n), rel=1e-15)


def test_coulomb_upper_component_is_normalized(coulomb_grid):
    for n in range(3):
        assert coulomb_solution(n, -1, -0.5, 1.0).norm(coulomb_grid) == pytest.approx(1.0, abs=1e-6)


def test_coulomb_nonrelativistic_limit():
    """(ε_n − 1)/α² → −Z²/(2N²) as α → 0"""
    alpha = 1e-4
    params = CoulombParams(-1.0, -1, alpha)

    for n in range(3):
        limit = coulomb_nonrelativistic_limit(n, -1, -1.0, alpha)
        assert limit == pytest.approx(-0.5 / (n + 1) ** 2, rel=1e-6)
        assert params.binding(n) == pytest.approx(limit, rel=1e-6)


# ---------------------------------------------------------------------------
# Dirac-Morse
# ---------------------------------------------------------------------------

def test_morse_level_structure(morse_params):
    params = MorseParams(**morse_params)

    assert params.n_max == 14
    assert params.admitted_levels() == list(range(10))
    for n in params.admitted_levels():
        eps = params.energy(n)
        alpha_tau = morse_params["alpha"] * morse_params["tau"]
        assert eps ** 2 + (params.T * eps - n * alpha_tau) ** 2 == pytest.approx(1.0, abs=1e-12)

    with pytest.raises(LevelCountError):
        params.angle(15)
    with pytest.raises(NonNormalizableError):
        morse_solution(10, **morse_params)
    with pytest.raises(DomainError):
        MorseParams(1.0, math.pi / 2, 4.0, 0.1)


@pytest.mark.parametrize("n", [0, 1, 3, 9])
def test_morse_states_solve_the_dirac_system(n, morse_params, morse_grid):
    solution = morse_solution(n, **morse_params)

    residual = dirac_residual(solution, solution.potential, morse_grid)

    assert residual.value < 1e-8
    assert solution.params["v"] > 0.0


def test_morse_upper_component_is_normalized(morse_params, morse_grid):
    for n in (0, 2, 5):
        assert morse_solution(n, **morse_params).norm(morse_grid) == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# Zero-energy family
# ---------------------------------------------------------------------------

def test_zero_energy_parameters():
    assert ZeroEnergyParams(3.0, 1.0, 0).kappa == -1
    assert ZeroEnergyParams(-2.0, 1.0, 1).kappa == 1
    assert ZeroEnergyParams(3.0, 1.0, 0).mu == pytest.approx(-0.5 + 1.0 / 3.0)

    for beta in (0.0, 1.0, 2.0, math.nan):
        with pytest.raises(ExcludedParameterError):
            ZeroEnergyParams(beta, 1.0, 0)
    with pytest.raises(DomainError):
        ZeroEnergyParams(3.0, 1.0, -1)


@pytest.mark.parametrize("l,beta", [(0, 3.0), (1, 3.0), (2, 4.0)])
def test_zero_energy_states(l, beta):
    # --- 1. Setup ---
    grid = RadialGrid.uniform(20.0, 16000)

    # --- 2. Execution ---
    solution = zero_energy_solution(l, beta, 1.0)
    residual = dirac_residual(solution, solution.potential, grid)

    # --- 3. Assertion ---
    assert solution.energy == 1.0
    assert isinstance(solution.lower, ZeroFunction)
    assert residual.value < 1e-8
    assert solution.norm(grid) == pytest.approx(1.0, abs=1e-6)
    closed = ZeroEnergyParams(beta, 1.0, l).norm_squared_closed_form()
    assert solution.params["a_kappa"] == pytest.approx(1.0 / math.sqrt(closed), rel=1e-8)


def test_zero_energy_state_with_negative_exponent(oscillator_grid):
    """β < 0: φ ∝ r^{−l}e^{−r^β/2} has a power tail, so only the residual is local"""
    solution = zero_energy_solution(1, -2.0, 1.0)

    residual = dirac_residual(solution, solution.potential, oscillator_grid)

    assert solution.potential.kappa == 1
    assert residual.value < 1e-8
    closed = ZeroEnergyParams(-2.0, 1.0, 1).norm_squared_closed_form()
    assert closed == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-12)
    assert solution.params["a_kappa"] == pytest.approx(1.0 / math.sqrt(closed), rel=1e-8)


def test_zero_energy_rejects_non_normalizable_tail():
    """β = −2, l = 0 leaves φ → const at infinity"""
    with pytest.raises(NonNormalizableError):
        zero_energy_solution(0, -2.0, 1.0)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def test_spectrum_table_oscillator():
    rows = spectrum_table("oscillator", {"kappa": 1, "lam": 1.0, "alpha": 1.0}, 0, 2)

    assert [row.n for row in rows] == [0, 1, 2]
    assert all(row.admitted for row in rows)
    np.testing.assert_allclose([row.energy for row in rows], np.sqrt([7.0, 11.0, 15.0]), rtol=1e-14)


def test_spectrum_table_morse_tags_rejected_levels(morse_params):
    rows = spectrum_table("morse", morse_params, 0, 20)
    statuses = [row.status for row in rows]

    assert statuses.count("admitted") == 10
    assert statuses.count("non-normalizable") == 5
    assert statuses.count("level-count") == 6
    assert rows[12].energy is not None
    assert rows[18].energy is None
    assert rows[18].to_dict()["reason"]


@pytest.mark.parametrize("rho", [0.7853981634, 0.785398163397, math.pi / 4])
def test_morse_threshold_level_with_rounded_angle(rho):
    """ρ typed to ten or twelve decimals must not admit the ε = 1 level."""
    params = MorseParams(tau=0.1, rho=rho, lam=4.0, alpha=1.0)

    rows = spectrum_table("morse", {"tau": 0.1, "rho": rho, "lam": 4.0, "alpha": 1.0}, 0, 20)

    assert params.exponent(10) == 0.0
    assert params.admitted_levels() == list(range(10))
    assert rows[10].status == "non-normalizable"
    assert rows[10].energy == pytest.approx(1.0, abs=1e-9)
    assert [row.status for row in rows].count("admitted") == 10
    with pytest.raises(NonNormalizableError):
        morse_solution(10, tau=0.1, rho=rho, lam=4.0, alpha=1.0)


def test_spectrum_table_zero_energy_has_one_row():
    rows = spectrum_table("zero-energy", {"l": 0, "beta": 3.0, "lam": 1.0}, 0, 5)

    assert len(rows) == 1
    assert rows[0].n == 0
    assert rows[0].energy == 1.0


def test_spectrum_table_coulomb_supercritical():
    rows = spectrum_table("coulomb", {"kappa": -1, "Z": -2.0, "alpha": 1.0}, 0, 1)

    assert [row.status for row in rows] == ["supercritical", "supercritical"]
    assert rows[0].energy is None


def test_solution_builder():
    build = solution_builder("coulomb", {"kappa": -1, "Z": -0.5, "alpha": 1.0})

    assert build(1).n == 1
    with pytest.raises(DomainError):
        solution_builder("yukawa", {})
