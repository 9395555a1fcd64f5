"""
Base suite class for verification suites
"""
import logging
import math
from abc import ABC, abstractmethod
from fnmatch import fnmatchcase
from typing import Any, Callable, Dict, List, Optional, Tuple

from config.settings import Settings
from dirac.errors import DiracError
from dirac.numerics import RadialGrid

logger = logging.getLogger(__name__)


def default_grid(class_name: str, n_points: int = None) -> RadialGrid:
    """Grid from Settings.DEFAULT_GRIDS, optionally with a different size"""
    mapping, size, r_min, r_max = Settings.DEFAULT_GRIDS[class_name]
    return RadialGrid(mapping, n_points or size, r_max, r_min)


class BaseSuite(ABC):
    """
    Abstract base class for verification suites

    A suite runs a fixed set of checks and returns one dictionary per check
    with the keys name, paper_ref, relation, measured, threshold and pass.
    """

    # (pattern on the check name without the suite prefix, citation); first match wins
    CITATIONS: Tuple[Tuple[str, str], ...] = ()
    DEFAULT_CITATION = "radial Dirac equation"

    def __init__(self, suite_name: str, tolerances: Optional[Dict[str, float]] = None):
        """
        Initialize base suite

        Args:
            suite_name: Name of the suite (e.g., 'spectra', 'so21')
            tolerances: Per-run overrides of Settings.TOLERANCES
        """
        self.suite_name = suite_name
        self.tolerances = dict(tolerances or {})

    @abstractmethod
    def run(self) -> List[Dict[str, Any]]:
        """
        Run every check of the suite

        Returns:
            List of check dictionaries, in any order
        """
        pass

    def tolerance(self, key: str) -> float:
        return Settings.tolerance(key, self.tolerances)

    def citation(self, name: str) -> str:
        """Source relation a check name refers to"""
        for pattern, cited in self.CITATIONS:
            if fnmatchcase(name, pattern):
                return cited
        return self.DEFAULT_CITATION

    def check(self, name: str, relation: str, measured: float, threshold: float,
              passed: Optional[bool] = None) -> Dict[str, Any]:
        """
        Build one check record

        Args:
            name: Check name, prefixed with the suite name
            relation: Formula the check verifies
            measured: Measured deviation
            threshold: Acceptance threshold
            passed: Explicit verdict; measured ≤ threshold when omitted

        Returns:
            Check dictionary
        """
        measured = float(measured)
        if passed is None:
            passed = math.isfinite(measured) and measured <= threshold
        return {
            "name": f"{self.suite_name}.{name}",
            "paper_ref": self.citation(name),
            "relation": relation,
            "measured": measured,
            "threshold": float(threshold),
            "pass": bool(passed),
        }

    def guarded(self, name: str, relation: str, threshold: float,
                func: Callable[[], Any]) -> List[Dict[str, Any]]:
        """
        Run a check body that may raise a library error

        The body returns a check dictionary or a list of them. A DiracError
        turns into one failing check carrying the error message.
        """
        try:
            outcome = func()
        except DiracError as e:
            logger.error(f"[{self.suite_name}] {name} failed: {e}")
            failed = self.check(name, relation, math.nan, threshold, passed=False)
            failed["error"] = f"{type(e).__name__}: {e}"
            return [failed]
        return outcome if isinstance(outcome, list) else [outcome]

    def get_suite_name(self) -> str:
        return self.suite_name

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(suite='{self.suite_name}')"
