"""
Report Writer - JSON and CSV output of the command-line surface

This module renders:
1. Verification reports (JSON)
2. Spectrum tables (CSV or JSON)
3. Sampled wavefunctions (CSV)
"""
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import Settings
from dirac.numerics import RadialGrid, sample
from dirac.solutions import SpectrumRow, SpinorSolution


def format_number(value: Optional[float]) -> str:
    """17 significant digits, empty for a missing value"""
    if value is None:
        return ""
    return f"{value:.{Settings.CSV_DIGITS}g}"


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats, which JSON cannot carry, by None"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


class ReportWriter:
    """
    Render results and write them to a file or stdout
    """

    def __init__(self, out: Optional[Path] = None):
        """
        Args:
            out: Destination file, stdout when omitted
        """
        self.out = Path(out) if out is not None else None

    def write(self, text: str):
        if self.out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        self.out.parent.mkdir(parents=True, exist_ok=True)
        with open(self.out, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)

    @staticmethod
    def render_json(payload: Dict[str, Any]) -> str:
        return json.dumps(_json_safe(payload), indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def render_spectrum_csv(rows: List[SpectrumRow]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n", "energy", "status", "reason"])
        for row in rows:
            writer.writerow([row.n, format_number(row.energy), row.status, row.reason])
        return buffer.getvalue()

    @staticmethod
    def render_spectrum_json(class_name: str, params: Dict[str, Any], rows: List[SpectrumRow]) -> str:
        return ReportWriter.render_json({
            "schema": Settings.REPORT_SCHEMA,
            "class": class_name,
            "params": params,
            "rows": [row.to_dict() for row in rows],
        })

    @staticmethod
    def render_wavefunction_csv(solution: SpinorSolution, grid: RadialGrid) -> str:
        """Header r,phi,theta; one row per grid point"""
        r = grid.points
        phi, theta = sample(solution.upper, grid), sample(solution.lower, grid)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["r", "phi", "theta"])
        for values in zip(r, phi, theta):
            writer.writerow([format_number(float(v)) for v in values])
        return buffer.getvalue()

    def write_verify_report(self, report: Dict[str, Any]):
        self.write(self.render_json(report))

    def write_spectrum(self, class_name: str, params: Dict[str, Any], rows: List[SpectrumRow], fmt: str = "csv"):
        if fmt == "json":
            self.write(self.render_spectrum_json(class_name, params, rows))
        else:
            self.write(self.render_spectrum_csv(rows))

    def write_wavefunction(self, solution: SpinorSolution, grid: RadialGrid):
        self.write(self.render_wavefunction_csv(solution, grid))

    def __repr__(self) -> str:
        return f"ReportWriter(out={self.out or 'stdout'})"
