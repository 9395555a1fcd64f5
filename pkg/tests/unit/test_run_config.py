# tests/unit/test_run_config.py
import pytest
from pydantic import ValidationError

from dirac.numerics import RadialGrid
from models.run_config import GridSpec, RunConfig


def test_grid_spec_parse():
    spec = GridSpec.parse("log:4000:1e-6:400")

    assert spec.mapping == "log"
    assert spec.n_points == 4000
    assert spec.r_min == 1e-6
    assert str(GridSpec.parse("uniform:4000:0:12")) == "uniform:4000:0:12"
    assert spec.to_grid() == RadialGrid.log_mapped(1e-6, 400.0, 4000)


@pytest.mark.parametrize("text", ["uniform:4000:0", "cubic:100:0:1", "uniform:8:0:1", "log:100:0:10",
                                  "uniform:100:5:1"])
def test_grid_spec_rejects_bad_text(text):
    # pydantic's ValidationError is a ValueError as well
    with pytest.raises(ValueError):
        GridSpec.parse(text)


def test_grid_spec_requires_text():
    with pytest.raises(ValueError, match="grid required"):
        GridSpec.parse("  ")


def test_default_grid():
    spec = GridSpec.default_for("morse")

    assert (spec.mapping, spec.n_points, spec.r_min, spec.r_max) == ("uniform", 4000, -3.0, 12.0)


def test_wavefunction_needs_grid():
    with pytest.raises(ValidationError, match="grid required"):
        RunConfig(command="wavefunction", class_name="oscillator", kappa=1)

    config = RunConfig(command="wavefunction", class_name="oscillator", kappa=1, grid="uniform:4000:0:12")
    assert config.grid.n_points == 4000


@pytest.mark.parametrize("fields", [
    {"class_name": "yukawa"},
    {"class_name": "oscillator"},
    {"class_name": "oscillator", "kappa": 0.5},
    {"class_name": "coulomb", "kappa": -1, "Z": -2.0},
    {"class_name": "coulomb", "kappa": 0, "Z": -0.5},
    {"class_name": "morse", "rho": 2.0},
    {"class_name": "zero-energy"},
    {"class_name": "zero-energy", "beta": 2.0},
    {"class_name": "oscillator", "kappa": 1, "alpha": 0.0},
    {"class_name": "oscillator", "kappa": 1, "nmin": 3, "nmax": 1},
    {"class_name": "oscillator", "kappa": 1, "colour": "blue"},
])
def test_spectrum_rejects_invalid_parameters(fields):
    with pytest.raises(ValidationError):
        RunConfig(command="spectrum", **fields)


def test_spectrum_requires_class():
    with pytest.raises(ValidationError, match="needs --class"):
        RunConfig(command="spectrum")


def test_tolerances_from_text():
    config = RunConfig(command="verify", tolerances="residual:1e-9, ladder:1e-7")

    assert config.tolerances == {"residual": 1e-9, "ladder": 1e-7}
    with pytest.raises(ValidationError, match="unknown tolerance"):
        RunConfig(command="verify", tolerances={"speed": 1.0})
    with pytest.raises(ValidationError):
        RunConfig(command="verify", suite="bogus")


def test_xpct_needs_family():
    with pytest.raises(ValidationError, match="needs --family"):
        RunConfig(command="xpct")
    with pytest.raises(ValidationError):
        RunConfig(command="xpct", family="cubic")

    assert RunConfig(command="xpct", family="square", kappa_hat=2.0).family == "square"


def test_class_params():
    coulomb = RunConfig(command="spectrum", class_name="coulomb", kappa=-1.0, Z=-0.5)
    zero = RunConfig(command="spectrum", class_name="zero-energy", beta=3.0, l=1)

    assert coulomb.class_params() == {"kappa": -1, "Z": -0.5, "alpha": 1.0, "branch": 1}
    assert isinstance(coulomb.class_params()["kappa"], int)
    assert zero.class_params() == {"l": 1, "beta": 3.0, "lam": 1.0, "alpha": 1.0}
    assert coulomb.summary()["class_name"] == "coulomb"
