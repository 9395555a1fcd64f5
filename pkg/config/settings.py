"""
Configuration settings for the Dirac-Oscillator toolkit
"""
from pathlib import Path
from typing import Dict


class Settings:
    """Library and CLI settings"""

    # Project paths
    BASE_DIR = Path(__file__).resolve().parent.parent
    DATA_DIR = BASE_DIR / "data"

    # Optional key=value run file picked up when --config is not given
    DEFAULT_RUN_FILE = DATA_DIR / "run.cfg"

    # Output formats
    REPORT_SCHEMA = 1
    CSV_DIGITS = 17

    # Numerics
    LAGUERRE_MAX_DEGREE = 200
    MIN_GRID_POINTS = 16
    MAX_DENSE_POINTS = 1024
    EIGEN_TOLERANCE = 1e-12  # absolute bisection tolerance
    SINGULAR_THRESHOLD = 1e-12
    LEVEL_THRESHOLD_RTOL = 1e-9  # v_n within this fraction of n counts as the continuum threshold
    FD_STEP = 1e-3  # relative step of the 4th-order derivative fallback

    # Verification thresholds
    TOLERANCES: Dict[str, float] = {
        "residual": 1e-8,
        "lower_component": 1e-6,
        "norm": 1e-8,
        "oscillator_spectrum": 1e-6,
        "coulomb_spectrum": 1e-5,
        "morse_spectrum": 1e-4,
        "morse_identity": 1e-12,
        "susy_pairing": 1e-6,
        "coupling_identity": 1e-10,
        "ladder": 1e-6,
        "nonrelativistic_limit": 1e-6,
        "convergence_ratio": 0.5,
    }

    # Default grids per class: (mapping, N, r_min, r_max)
    DEFAULT_GRIDS: Dict[str, tuple] = {
        "oscillator": ("uniform", 4000, 0.0, 12.0),
        "coulomb": ("log", 4000, 1e-16, 400.0),
        "morse": ("uniform", 4000, -3.0, 12.0),
        "zero-energy": ("uniform", 4000, 0.0, 20.0),
    }

    @classmethod
    def load_run_file(cls, path: Path = None) -> Dict[str, str]:
        """
        Load key=value pairs from a run file

        Args:
            path: Run file location, DEFAULT_RUN_FILE when omitted

        Returns:
            Mapping of keys to raw string values
        """
        path = Path(path) if path is not None else cls.DEFAULT_RUN_FILE
        values: Dict[str, str] = {}

        if not path.exists():
            return values

        with open(path, 'r') as f:
            for number, line in enumerate(f, 1):
                line = line.strip()
                # Skip empty lines and comments
                if not line or line.startswith('#'):
                    continue
                if '=' not in line:
                    raise ValueError(f"{path}:{number}: expected key=value, got '{line}'")
                key, value = line.split('=', 1)
                values[key.strip().replace('-', '_')] = value.strip()

        return values

    @classmethod
    def tolerance(cls, name: str, overrides: Dict[str, float] = None) -> float:
        """Threshold for a named check, honoring per-run overrides"""
        if overrides and name in overrides:
            return overrides[name]
        return cls.TOLERANCES[name]

    @classmethod
    def get_config_summary(cls) -> str:
        """Get a summary of current configuration"""
        tolerances = "\n".join(f"  {k}: {v:g}" for k, v in sorted(cls.TOLERANCES.items()))
        return f"""
Dirac-Oscillator Configuration
------------------------------
Base Directory: {cls.BASE_DIR}
Data Directory: {cls.DATA_DIR}
Default Run File: {cls.DEFAULT_RUN_FILE}
Report Schema: {cls.REPORT_SCHEMA}
CSV Digits: {cls.CSV_DIGITS}
Max Laguerre Degree: {cls.LAGUERRE_MAX_DEGREE}
Tolerances:
{tolerances}
        """.strip()
