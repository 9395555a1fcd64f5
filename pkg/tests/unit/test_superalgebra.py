# tests/unit/test_superalgebra.py
import math

import numpy as np
import pytest
from scipy.linalg import eigvalsh

from dirac.dirac_core import LinearW, RelativisticPotential
from dirac.errors import DomainError, EigensolverError, ZeroMassFactorError
from dirac.numerics import RadialGrid
from dirac.superalgebra import (
    Superpotential,
    assemble_Q,
    block_discretization_error,
    partner_potentials,
    q_positive_spectrum,
    realize_algebra,
    relation_residuals,
    susy_degeneracy_check,
)


@pytest.fixture
def oscillator_superpotential():
    """G = −1/r + r, whose V₋ = r² − 3 carries the zero mode r·e^{−r²/2}"""
    return Superpotential(-1, LinearW(1.0))


def test_partner_potentials(oscillator_superpotential):
    plus, minus = partner_potentials(oscillator_superpotential, 2.0)

    assert plus == pytest.approx(3.5, rel=1e-14)
    assert minus == pytest.approx(1.0, rel=1e-14)
    assert isinstance(plus, float)

    r = np.linspace(0.5, 3.0, 6)
    _, minus_arr = partner_potentials(oscillator_superpotential, r)
    np.testing.assert_allclose(minus_arr, r ** 2 - 3.0, rtol=1e-12, atol=1e-12)


def test_superpotential_domain():
    singular = Superpotential(2)
    smooth = Superpotential(0, LinearW(1.0))

    with pytest.raises(DomainError):
        singular(0.0)
    assert smooth(-1.0) == pytest.approx(-1.0)
    pot = RelativisticPotential(alpha=1.0, kappa=-1, w=LinearW(1.0))
    assert Superpotential.from_potential(pot).value(2.0) == pytest.approx(1.5)


def test_relation_residuals_vanish_to_rounding(oscillator_superpotential, small_grid):
    realization = realize_algebra(oscillator_superpotential, small_grid)

    residuals = relation_residuals(realization)

    scale = np.linalg.norm(realization.L0) * np.linalg.norm(realization.Lp)
    assert set(residuals) == {"L3_Lp", "L3_Lm", "anticommutator", "L0_L3", "L0_Lp", "L0_Lm", "hermiticity"}
    for name, value in residuals.items():
        assert value <= 1e-13 * scale, name
    assert realization.minus_block().shape == (small_grid.n_points, small_grid.n_points)


def test_blocks_converge_at_second_order():
    """The L0 blocks approach −d² + G² ∓ G′ like h² on a probe even about both ends"""
    # --- 1. Setup ---
    G = Superpotential(0, LinearW(1.0))
    k = math.pi / 10.0

    def probe(r):
        return np.sin(k * r) ** 2

    def probe_second(r):
        return 2.0 * k ** 2 * np.cos(2.0 * k * r)

    grid = RadialGrid.uniform(10.0, 128)

    # --- 2. Execution ---
    coarse = block_discretization_error(G, grid, probe, probe_second)
    fine = block_discretization_error(G, grid.refined(), probe, probe_second)

    # --- 3. Assertion ---
    assert coarse / fine == pytest.approx(4.0, abs=0.2)


def test_assemble_q(oscillator_superpotential, small_grid):
    realization = realize_algebra(oscillator_superpotential, small_grid)
    n = small_grid.n_points

    Q = assemble_Q(0.5, 1.0, realization)

    np.testing.assert_array_equal(Q, Q.T)
    np.testing.assert_array_equal(np.diag(Q), np.concatenate((np.ones(n), -np.ones(n))))
    np.testing.assert_array_equal(Q, assemble_Q(0.5, 1.0, realization, lam_minus=0.5))

    with pytest.raises(ZeroMassFactorError):
        assemble_Q(0.5, 0.0, realization)
    with pytest.raises(DomainError):
        assemble_Q(0.5, 1.0, realization, lam_minus=0.4)


def test_q_positive_spectrum_matches_block_spectrum(oscillator_superpotential, small_grid):
    """Q² = 1 + α²L0 with α = 2λ₊/λ3, so the positive levels are √(1 + α²μ)"""
    realization = realize_algebra(oscillator_superpotential, small_grid)
    Q = assemble_Q(0.5, 1.0, realization)

    positive = q_positive_spectrum(Q, 4)

    assert np.all(positive >= 1.0 - 1e-10)
    np.testing.assert_allclose(positive ** 2 - 1.0, eigvalsh(realization.plus_block())[:4], rtol=1e-8, atol=1e-8)

    with pytest.raises(EigensolverError):
        q_positive_spectrum(Q, small_grid.n_points + 1)


def test_susy_pairing_with_zero_mode(oscillator_superpotential):
    # --- 1. Setup ---
    grid = RadialGrid.uniform(10.0, 2000)

    # --- 2. Execution ---
    report = susy_degeneracy_check(oscillator_superpotential, grid, 4)

    # --- 3. Assertion ---
    assert report.zero_mode is not None
    assert abs(report.zero_mode) < 1e-6
    assert len(report.pairs) == 3
    assert report.max_deviation <= 1e-6
    np.testing.assert_allclose(report.plus[:3], [4.0, 8.0, 12.0], atol=1e-5)
    print(f"\n[TEST] SUSY pairing: {report.to_dict()['pairs']}")


def test_susy_pairing_without_zero_mode():
    """κ = 1: V₋ = r² + 1 + 2/r² and V₊ = r² + 3 are isospectral"""
    report = susy_degeneracy_check(Superpotential(1, LinearW(1.0)), RadialGrid.uniform(10.0, 2000), 4)

    assert report.zero_mode is None
    assert len(report.pairs) == 4
    assert report.max_deviation <= 1e-6
    np.testing.assert_allclose(report.minus, [6.0, 10.0, 14.0, 18.0], atol=1e-5)


def test_susy_check_needs_two_levels(oscillator_superpotential):
    with pytest.raises(EigensolverError):
        susy_degeneracy_check(oscillator_superpotential, RadialGrid.uniform(10.0, 100), 1)
