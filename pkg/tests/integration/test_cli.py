# tests/integration/test_cli.py
import json
import math

import pytest

from dirac.errors import TermMatchingError
from main import EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


@pytest.fixture
def failing_report():
    """Verification report with one failed check."""
    return {
        "schema": 1,
        "suite": "all",
        "checks": [{"name": "spectra.morse.n=3", "paper_ref": "Dirac-Morse energy spectrum",
                    "relation": "ε² + (Tε − nατ)² = 1", "measured": 1e-3,
                    "threshold": 1e-4, "pass": False}],
        "pass": False,
    }


def test_spectrum_csv(capsys):
    code = main(["spectrum", "--class", "oscillator", "--kappa", "1", "--nmax", "2"])

    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "n,energy,status,reason"
    assert len(lines) == 4
    n, energy, status, reason = lines[1].split(",")
    assert (n, status, reason) == ("0", "admitted", "")
    assert float(energy) == math.sqrt(7.0)


def test_spectrum_json_tags_rejected_levels(capsys):
    code = main(["spectrum", "--class", "coulomb", "--kappa", "-1", "--Z", "0.5", "--nmax", "1",
                 "--format", "json"])

    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert payload["class"] == "coulomb"
    assert [row["status"] for row in payload["rows"]] == ["no-bound-state", "no-bound-state"]


def test_wavefunction_requires_grid(capsys):
    code = main(["wavefunction", "--class", "oscillator", "--kappa", "1"])

    assert code == EXIT_USAGE
    assert "grid required" in capsys.readouterr().err


def test_wavefunction_to_file(tmp_path, capsys):
    out = tmp_path / "phi.csv"

    code = main(["wavefunction", "--class", "morse", "--tau", "1", "--rho", "0.7853981633974483",
                 "--lambda", "4", "--alpha", "0.1", "--n", "2", "--grid", "uniform:500:-3:12", "--out", str(out)])

    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "r,phi,theta"
    assert len(lines) == 501


def test_non_normalizable_level_is_a_usage_error(capsys):
    code = main(["wavefunction", "--class", "morse", "--tau", "1", "--rho", "0.7853981633974483",
                 "--lambda", "4", "--alpha", "0.1", "--n", "10", "--grid", "uniform:500:-3:12"])

    assert code == EXIT_USAGE
    assert "NonNormalizableError" in capsys.readouterr().err


def test_xpct_rejects_excluded_power(capsys):
    code = main(["xpct", "--family", "power", "--mu", "0.5"])

    assert code == EXIT_USAGE
    assert "ExcludedParameterError" in capsys.readouterr().err


def test_xpct_square_without_charge(capsys):
    code = main(["xpct", "--family", "square", "--kappa-hat", "2"])

    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert payload["derived"]["kappa"] == pytest.approx(0.75)
    assert payload["derived"]["target_class"] == "coulomb"
    assert payload["identity"]["status"] == "not-applicable"


def test_xpct_coulomb_identity(capsys):
    code = main(["xpct", "--family", "square", "--kappa", "-1", "--Z", "-0.5"])

    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert payload["derived"]["kappa"] == pytest.approx(-1.0)
    assert payload["identity"]["pass"] is True
    assert payload["identity"]["spread"] <= 1e-10


def test_xpct_matching_failure_is_a_verification_failure(mocker, capsys):
    # --- 1. Setup ---
    mocker.patch("main.spectrum_from_matching", side_effect=TermMatchingError("square: unbalanced x^4 term"))

    # --- 2. Execution ---
    code = main(["xpct", "--family", "square", "--kappa", "-1", "--Z", "-0.5"])

    # --- 3. Assertion ---
    payload = json.loads(capsys.readouterr().out)
    assert code == EXIT_VERIFY
    assert payload["spectrum_relation"] == {"status": "failed", "reason": "square: unbalanced x^4 term", "pass": False}
    assert payload["identity"]["pass"] is True


def test_morse_spectrum_with_rounded_angle(capsys):
    code = main(["spectrum", "--class", "morse", "--alpha", "1", "--tau", "0.1", "--rho", "0.7853981634",
                 "--lambda", "4", "--nmax", "12"])

    rows = [line.split(",") for line in capsys.readouterr().out.splitlines()[1:]]
    assert code == EXIT_OK
    assert [row[2] for row in rows[:10]] == ["admitted"] * 10
    assert rows[10][:3] == ["10", "1", "non-normalizable"]
    assert rows[12][2] == "non-normalizable"


def test_verify_failure_exit_code(mocker, capsys, failing_report):
    # --- 1. Setup ---
    controller_cls = mocker.patch("main.VerificationController")
    controller_cls.return_value.run.return_value = failing_report

    # --- 2. Execution ---
    code = main(["verify", "--suite", "spectra", "--tol", "residual=1e-9"])

    # --- 3. Assertion ---
    assert code == EXIT_VERIFY
    controller_cls.assert_called_once_with({"residual": 1e-9})
    controller_cls.return_value.run.assert_called_once_with("spectra")
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] is False
    assert report["checks"][0]["name"] == "spectra.morse.n=3"


def test_verify_rejects_unknown_suite(capsys):
    code = main(["verify", "--suite", "bogus"])

    assert code == EXIT_USAGE
    assert "unknown suite" in capsys.readouterr().err


def test_verify_rejects_malformed_tolerance(capsys):
    code = main(["verify", "--tol", "residual"])

    assert code == EXIT_USAGE
    assert "NAME=VALUE" in capsys.readouterr().err


def test_run_file_with_command_line_precedence(tmp_path, capsys):
    run_file = tmp_path / "run.cfg"
    run_file.write_text("# oscillator run\nclass = oscillator\nkappa = -2\nlambda = 1.0\nnmax = 3\n")

    code = main(["--config", str(run_file), "spectrum", "--nmax", "1"])

    lines = capsys.readouterr().out.splitlines()
    assert code == EXIT_OK
    assert lines[1] == "0,1,admitted,"
    assert len(lines) == 3
