# tests/unit/test_xpct.py
import dataclasses
import math

import numpy as np
import pytest

from dirac.errors import (
    DomainError,
    ExcludedParameterError,
    InconsistentBranchError,
    NoBoundStateError,
    NonConstantDifferenceError,
    SingularConfigurationError,
    TermMatchingError,
)
from dirac.numerics import RadialGrid, dirac_residual
from dirac.solutions import (
    CoulombParams,
    MorseParams,
    coulomb_solution,
    morse_solution,
    oscillator_state,
    zero_energy_solution,
)
from dirac.specialfn import central_derivative
from dirac.xpct import (
    NegLog,
    Power,
    Square,
    TransformSpec,
    derive,
    make_family,
    map_wavefunctions,
    proportionality,
    reference_solution,
    spectrum_from_matching,
    verify_coupling_identity,
)


@pytest.fixture
def coulomb_spec():
    """Square map onto κ = −1, Z = −1/2, α = 1"""
    return TransformSpec.for_coulomb(-1, -0.5, 1.0)


@pytest.mark.parametrize("family", [Square(), NegLog(2.0), Power(0.25), Power(-1.0)])
def test_family_inverse_and_derivatives(family):
    x = np.linspace(0.3, 2.5, 12)

    np.testing.assert_allclose(family.inverse(family.q(x)), x, rtol=1e-12)
    np.testing.assert_allclose(family.dq(x), central_derivative(family.q, x), rtol=1e-8)
    np.testing.assert_allclose(family.d2q(x), central_derivative(family.dq, x), rtol=1e-8, atol=1e-10)
    np.testing.assert_allclose(family.d3q(x), central_derivative(family.d2q, x), rtol=1e-7, atol=1e-9)
    assert np.all(np.sign(family.dq(x)) == family.sign)


def test_family_validation():
    for mu in (0.0, 0.5, -0.5):
        with pytest.raises(ExcludedParameterError):
            Power(mu)
    with pytest.raises(DomainError):
        NegLog(0.0)
    with pytest.raises(DomainError):
        Square().q(np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        make_family("power")
    with pytest.raises(DomainError):
        make_family("cubic")

    assert make_family("neglog").tau == 1.0
    assert Power(0.25).m == pytest.approx(1.5)
    assert Power(0.25).beta == pytest.approx(4.0 / 3.0)


def test_transform_spec_validation():
    with pytest.raises(DomainError):
        TransformSpec(Square())
    with pytest.raises(DomainError):
        TransformSpec(NegLog(1.0), alpha=0.0)
    with pytest.raises(SingularConfigurationError):
        TransformSpec.for_coulomb(-1, -2.0, 1.0)
    with pytest.raises(ExcludedParameterError):
        TransformSpec.for_zero_energy(0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# Square family onto Coulomb
# ---------------------------------------------------------------------------

def test_derive_square_reaches_coulomb(coulomb_spec):
    result = derive(coulomb_spec)
    target = CoulombParams(-0.5, -1, 1.0)

    assert result.target_class == "coulomb"
    assert result.kappa == pytest.approx(-1.0, rel=1e-14)
    assert result.S == pytest.approx(target.S, rel=1e-14)
    assert result.C == pytest.approx(target.C, rel=1e-14)
    for n in range(4):
        assert result.energy(n) == pytest.approx(target.energy(n), rel=1e-13)
    assert result.to_dict()["W"] == "0"


def test_derive_square_without_charge():
    """κ̂ = 2 and Z = 0: σ = κ = 3/4 and no level binds"""
    result = derive(TransformSpec(Square(), kappa_hat=2.0))

    assert result.kappa == pytest.approx(0.75, rel=1e-15)
    assert result.rho == 0.0
    with pytest.raises(NoBoundStateError):
        result.level(0)
    with pytest.raises(SingularConfigurationError):
        derive(TransformSpec(Square(), kappa_hat=0.5))


def test_repulsive_charge_has_no_reference():
    result = derive(TransformSpec.for_coulomb(-1, 0.5, 1.0))

    with pytest.raises(NoBoundStateError):
        result.energy(0)


def test_coupling_identity_square(coulomb_spec):
    result = derive(coulomb_spec)

    report = verify_coupling_identity(coulomb_spec, result, np.linspace(0.2, 5.0, 50))

    assert report.spread <= 1e-10
    assert report.constant == pytest.approx(report.expected, abs=1e-10)
    assert report.samples == 50


def test_coupling_identity_detects_wrong_parameters(coulomb_spec):
    result = dataclasses.replace(derive(coulomb_spec), kappa=-1.1)

    with pytest.raises(NonConstantDifferenceError):
        verify_coupling_identity(coulomb_spec, result, np.linspace(0.2, 5.0, 50))
    with pytest.raises(DomainError):
        verify_coupling_identity(coulomb_spec, result, [])


@pytest.mark.parametrize("n", [0, 1, 3])
def test_mapped_coulomb_states(n, coulomb_spec, coulomb_grid):
    # --- 1. Setup ---
    result = derive(coulomb_spec)
    catalog = coulomb_solution(n, -1, -0.5, 1.0)

    # --- 2. Execution ---
    mapped = map_wavefunctions(coulomb_spec, result, reference_solution(result, n))

    # --- 3. Assertion ---
    _, spread = proportionality(mapped.upper, catalog.upper, coulomb_grid.points)
    assert spread < 1e-8
    assert mapped.energy == pytest.approx(catalog.energy, rel=1e-13)
    assert dirac_residual(mapped, result.potential(), coulomb_grid).value < 1e-8
    assert mapped.params["bare_lower"].shift == 0.0


def test_map_wavefunctions_rejects_foreign_reference(coulomb_spec):
    result = derive(coulomb_spec)

    with pytest.raises(DomainError):
        map_wavefunctions(coulomb_spec, result, coulomb_solution(0, -1, -0.5, 1.0))
    with pytest.raises(InconsistentBranchError):
        map_wavefunctions(coulomb_spec, result, oscillator_state(0, 0.3, 1.0, 1.0))


def test_matching_square(coulomb_spec):
    relation = spectrum_from_matching(coulomb_spec, derive(coulomb_spec))

    assert relation.family == "square"
    assert relation.closed_form is not None
    assert set(relation.parameter_map) == {"lambda_sq", "N"}
    assert relation.to_dict()["relation"].endswith("= 0")


def test_matched_square_condition_vanishes_on_the_spectrum(coulomb_spec):
    # --- 1. Setup ---
    relation = spectrum_from_matching(coulomb_spec, derive(coulomb_spec))
    params = CoulombParams(-0.5, -1, 1.0)
    p = abs(coulomb_spec.kappa_hat + 0.5)

    def values(n, eps):
        return {"epsilon": eps, "n": n, "p": p, "alpha": 1.0, "Z": -0.5, "kappa": -1.0}

    # --- 2. Execution ---
    on_spectrum = [relation.defect(values(n, params.energy(n))) for n in range(4)]
    shifted = relation.defect(values(1, 0.999 * params.energy(1)))

    # --- 3. Assertion ---
    assert max(on_spectrum) < 1e-12
    assert shifted > 1e-4
    with pytest.raises(TermMatchingError):
        relation.defect({"n": 0, "p": p})


# ---------------------------------------------------------------------------
# Negative-log family onto Morse
# ---------------------------------------------------------------------------

def test_neglog_reaches_morse(morse_params):
    spec = TransformSpec.for_morse(**morse_params)
    result = derive(spec)
    params = MorseParams(**morse_params)

    assert result.target_class == "morse"
    assert result.kappa == 0.0
    assert result.w.coefficient == pytest.approx(-4.0 ** 2 / (2.0 * params.C), rel=1e-14)
    for n in range(4):
        assert result.energy(n) == params.energy(n)
    # κ̂ of level n is 2v_n − 1/2
    assert result.level(2).kappa_hat == pytest.approx(2.0 * params.exponent(2) - 0.5, rel=1e-14)
    with pytest.raises(NoBoundStateError):
        result.level(10)

    report = verify_coupling_identity(spec, result, np.linspace(0.2, 3.0, 50))
    assert report.spread <= 1e-10


@pytest.mark.parametrize("n", [0, 2])
def test_mapped_morse_states(n, morse_params, morse_grid):
    spec = TransformSpec.for_morse(**morse_params)
    result = derive(spec)

    mapped = map_wavefunctions(spec, result, reference_solution(result, n))

    _, spread = proportionality(mapped.upper, morse_solution(n, **morse_params).upper, morse_grid.points)
    assert spread < 1e-8
    assert dirac_residual(mapped, result.potential(), morse_grid).value < 1e-8


def test_matching_neglog(morse_params):
    spec = TransformSpec.for_morse(**morse_params)

    relation = spectrum_from_matching(spec, derive(spec))

    assert relation.family == "neglog"
    assert "v_n" in relation.parameter_map
    assert relation.closed_form is None
    params = MorseParams(**morse_params)
    for n in range(4):
        values = {"epsilon": params.energy(n), "n": n, "alpha": params.alpha, "T": params.T}
        assert relation.defect(values) < 1e-12
    assert relation.defect({"epsilon": 0.99, "n": 0, "alpha": params.alpha, "T": params.T}) > 1e-4


# ---------------------------------------------------------------------------
# Power family onto the zero-energy states
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("l,beta,kappa", [(0, 3.0, -1), (1, -2.0, 1)])
def test_power_reaches_zero_energy(l, beta, kappa):
    spec = TransformSpec.for_zero_energy(l, beta, 1.0)

    result = derive(spec)

    assert result.target_class == "zero-energy"
    assert result.kappa == pytest.approx(kappa, abs=1e-12)
    assert result.energy(0) == 1.0
    assert result.S == 0.0
    np.testing.assert_allclose(result.w.value(np.array([0.5, 2.0])),
                               0.5 * beta * np.array([0.5, 2.0]) ** (beta - 1.0), rtol=1e-12)
    with pytest.raises(InconsistentBranchError):
        result.level(1)


def test_power_rejects_reference_above_branch_point():
    with pytest.raises(InconsistentBranchError):
        derive(TransformSpec(Power(0.25), kappa_hat=0.0))


def test_mapped_zero_energy_state():
    spec = TransformSpec.for_zero_energy(0, 3.0, 1.0)
    result = derive(spec)
    grid = RadialGrid.uniform(20.0, 4000)

    mapped = map_wavefunctions(spec, result, reference_solution(result, 0))

    _, spread = proportionality(mapped.upper, zero_energy_solution(0, 3.0, 1.0).upper, grid.points)
    assert spread < 1e-8
    assert dirac_residual(mapped, result.potential(), grid).value < 1e-8


def test_matching_power():
    spec = TransformSpec.for_zero_energy(0, 3.0, 1.0)

    relation = spectrum_from_matching(spec, derive(spec))

    assert relation.family == "power"
    assert relation.closed_form == 1
    assert float(relation.parameter_map["kappa"]) == pytest.approx(-1.0)
    assert math.isclose(float(relation.parameter_map["epsilon"]), 1.0)
