# tests/integration/test_report.py
import csv
import json
import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from dirac.numerics import RadialGrid
from dirac.solutions import SpectrumRow, oscillator_solution, spectrum_table
from report import ReportWriter, format_number


def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(None) == ""
    assert float(format_number(math.sqrt(7.0))) == math.sqrt(7.0)


def test_render_json_replaces_non_finite_values():
    text = ReportWriter.render_json({"measured": math.nan, "checks": [{"value": math.inf}], "pass": False})

    assert json.loads(text) == {"measured": None, "checks": [{"value": None}], "pass": False}
    assert text.endswith("\n")


def test_spectrum_csv(morse_params):
    rows = spectrum_table("morse", morse_params, 8, 16)

    text = ReportWriter.render_spectrum_csv(rows)

    lines = text.split("\n")
    assert lines[0] == "n,energy,status,reason"
    assert "\r" not in text
    parsed = list(csv.DictReader(text.splitlines()))
    assert [row["status"] for row in parsed] == ["admitted"] * 2 + ["non-normalizable"] * 5 + ["level-count"] * 2
    assert parsed[-1]["energy"] == ""


def test_spectrum_json():
    rows = [SpectrumRow(0, 1.0), SpectrumRow(1, None, "level-count", "n = 1 exceeds n_max = 0")]

    payload = json.loads(ReportWriter.render_spectrum_json("morse", {"tau": 1.0}, rows))

    assert payload["schema"] == 1
    assert payload["rows"][1] == {"n": 1, "energy": None, "status": "level-count",
                                  "reason": "n = 1 exceeds n_max = 0"}


def test_wavefunction_file_is_normalized(tmp_path):
    # --- 1. Setup ---
    out = tmp_path / "reports" / "oscillator_n0.csv"
    grid = RadialGrid.uniform(12.0, 4000)

    # --- 2. Execution ---
    ReportWriter(out).write_wavefunction(oscillator_solution(0, 1, 1.0, 1.0), grid)

    # --- 3. Assertion ---
    text = out.read_bytes().decode("utf-8")
    assert text.startswith("r,phi,theta\n")
    assert "\r" not in text
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (4000, 3)
    r = np.concatenate(([0.0], data[:, 0]))
    phi = np.concatenate(([0.0], data[:, 1]))
    assert trapezoid(phi ** 2, r) == pytest.approx(1.0, abs=1e-6)


def test_writer_defaults_to_stdout(capsys):
    writer = ReportWriter()

    writer.write("n,energy,status,reason\n")

    assert capsys.readouterr().out == "n,energy,status,reason\n"
    assert repr(writer) == "ReportWriter(out=stdout)"
