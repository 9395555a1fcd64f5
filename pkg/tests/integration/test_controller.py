# tests/integration/test_controller.py
import math

import pytest

from controller import VerificationController
from dirac.errors import DomainError


def _check(name, passed=True):
    return {"name": name, "paper_ref": "radial Dirac equation", "relation": "Hφ = εφ",
            "measured": 0.0, "threshold": 1e-8, "pass": passed}


@pytest.fixture
def controller():
    """Controller with every registered suite and default tolerances."""
    return VerificationController()


def test_run_sorts_checks_by_name(mocker, controller):
    # --- 1. Setup ---
    mocker.patch.object(controller.available_suites["spectra"], "run",
                        return_value=[_check("spectra.oscillator.n=1"), _check("spectra.coulomb.n=0")])

    # --- 2. Execution ---
    report = controller.run("spectra")

    # --- 3. Assertion ---
    assert report["schema"] == 1
    assert report["suite"] == "spectra"
    assert [c["name"] for c in report["checks"]] == ["spectra.coulomb.n=0", "spectra.oscillator.n=1"]
    assert report["pass"] is True


def test_run_all_dispatches_every_suite(mocker, controller):
    mocks = {name: mocker.patch.object(suite, "run", return_value=[_check(f"{name}.only", name != "xpct")])
             for name, suite in controller.available_suites.items()}

    report = controller.run()

    assert all(mock.call_count == 1 for mock in mocks.values())
    assert len(report["checks"]) == len(controller.get_available_suites()) == 5
    assert report["pass"] is False


def test_suite_exception_becomes_failing_check(mocker, controller):
    mocker.patch.object(controller.available_suites["algebra"], "run", side_effect=RuntimeError("boom"))

    report = controller.run("algebra")

    assert len(report["checks"]) == 1
    error = report["checks"][0]
    assert error["name"] == "algebra.error"
    assert math.isnan(error["measured"])
    assert error["error"] == "RuntimeError: boom"
    assert error["paper_ref"] == "graded superalgebra"
    assert report["pass"] is False


def test_check_records_carry_citations(controller):
    spectra = controller.available_suites["spectra"]
    xpct = controller.available_suites["xpct"]

    record = spectra.check("morse.n=3", "ε² + (Tε − nατ)² = 1", 2e-5, 1e-4)

    assert {"name", "paper_ref", "measured", "threshold", "pass"} <= set(record)
    assert record["name"] == "spectra.morse.n=3"
    assert record["paper_ref"] == "Dirac-Morse energy spectrum"
    assert record["relation"] == "ε² + (Tε − nατ)² = 1"
    assert record["pass"] is True
    assert xpct.citation("square.n=2.residual") == "transformed spinor components"
    assert xpct.citation("power.l=0.beta=3.identity") == "equality relation modulo a constant"
    assert xpct.citation("other") == "extended point canonical transformation"


def test_guarded_error_keeps_citation(controller):
    residuals = controller.available_suites["residuals"]

    def body():
        raise DomainError("r must be positive")

    [record] = residuals.guarded("coulomb.n=0.lower", "θ from φ", 1e-6, body)

    assert record["paper_ref"] == "lower spinor component in terms of the upper one"
    assert record["pass"] is False
    assert record["error"] == "DomainError: r must be positive"


def test_unknown_suite(controller):
    with pytest.raises(DomainError):
        controller.run("bogus")


def test_tolerance_overrides_reach_suites():
    controller = VerificationController({"residual": 1e-9})

    assert controller.available_suites["residuals"].tolerance("residual") == 1e-9
    assert "so21" in repr(controller)


@pytest.mark.slow
@pytest.mark.parametrize("suite_name", ["residuals", "spectra", "algebra", "xpct", "so21"])
def test_suite_passes(suite_name, controller):
    report = controller.run(suite_name)

    failed = [c for c in report["checks"] if not c["pass"]]
    print(f"\n[TEST] {suite_name}: {len(report['checks'])} checks, {len(failed)} failed")
    assert report["checks"]
    assert not failed, failed
