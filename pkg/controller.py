"""
Verification Controller - orchestrator for the verification suites

This controller receives a suite name and runs the matching suites,
collecting their checks into one report.
"""
import sys
from typing import Any, Dict, List

from config.settings import Settings
from dirac.errors import DomainError
from suites import AlgebraSuite, BaseSuite, ResidualSuite, So21Suite, SpectraSuite, XpctSuite


def _say(message: str):
    # stdout carries reports
    print(message, file=sys.stderr)


class VerificationController:
    """
    Controller that orchestrates verification suites

    This controller:
    1. Resolves the requested suite ("all" runs every registered suite)
    2. Runs each suite, turning unexpected failures into failing checks
    3. Returns the checks sorted by name with the overall verdict
    """

    def __init__(self, tolerances: Dict[str, float] = None):
        """
        Initialize controller with the registered suites

        Args:
            tolerances: Per-run overrides of Settings.TOLERANCES
        """
        self.tolerances = dict(tolerances or {})
        self.available_suites: Dict[str, BaseSuite] = {
            'residuals': ResidualSuite(self.tolerances),
            'spectra': SpectraSuite(self.tolerances),
            'algebra': AlgebraSuite(self.tolerances),
            'xpct': XpctSuite(self.tolerances),
            'so21': So21Suite(self.tolerances),
        }

    def run(self, suite_name: str = "all") -> Dict[str, Any]:
        """
        Execute the requested suites

        Args:
            suite_name: Registered suite name or "all"

        Returns:
            Report with schema, suite, checks (sorted by name) and pass
        """
        if suite_name == "all":
            suites = list(self.available_suites.values())
        else:
            suite = self._get_suite(suite_name)
            if suite is None:
                raise DomainError(
                    f"unknown suite '{suite_name}', available: {', '.join(self.get_available_suites())}"
                )
            suites = [suite]

        _say("=" * 50)
        _say(f"[CONTROLLER] Running suite '{suite_name}'")
        _say("=" * 50)

        checks: List[Dict[str, Any]] = []
        for suite in suites:
            _say(f"[CONTROLLER] Dispatching to {suite.get_suite_name()} suite...")
            try:
                results = suite.run()
                checks.extend(results)
                failed = sum(1 for c in results if not c["pass"])
                _say(f"[CONTROLLER] Received {len(results)} checks from {suite.get_suite_name()} ({failed} failed)")
            except Exception as e:
                _say(f"[CONTROLLER] Error executing {suite.get_suite_name()} suite: {e}")
                checks.append({
                    "name": f"{suite.get_suite_name()}.error",
                    "paper_ref": suite.citation("error"),
                    "relation": "suite completes",
                    "measured": float("nan"),
                    "threshold": 0.0,
                    "pass": False,
                    "error": f"{type(e).__name__}: {e}",
                })

        checks.sort(key=lambda c: c["name"])
        passed = all(c["pass"] for c in checks)

        _say("=" * 50)
        _say(f"[CONTROLLER] {len(checks)} checks, {'all passed' if passed else 'FAILED'}")
        _say("=" * 50)

        return {
            "schema": Settings.REPORT_SCHEMA,
            "suite": suite_name,
            "checks": checks,
            "pass": passed,
        }

    def _get_suite(self, suite_name: str) -> BaseSuite:
        return self.available_suites.get(suite_name.lower())

    def get_available_suites(self) -> List[str]:
        """Get list of available suite names"""
        return list(self.available_suites.keys())

    def add_suite(self, suite: BaseSuite):
        """
        Register a suite under its own name

        Args:
            suite: Suite instance
        """
        self.available_suites[suite.get_suite_name()] = suite
        _say(f"[CONTROLLER] Added suite: {suite.get_suite_name()}")

    def __repr__(self) -> str:
        suites = ', '.join(self.available_suites.keys())
        return f"VerificationController(suites=[{suites}])"
