"""
Verification suites
"""
from .base_suite import BaseSuite
from .residuals import ResidualSuite
from .spectra import SpectraSuite
from .algebra import AlgebraSuite
from .xpct import XpctSuite
from .so21 import So21Suite

__all__ = [
    'BaseSuite',
    'ResidualSuite',
    'SpectraSuite',
    'AlgebraSuite',
    'XpctSuite',
    'So21Suite',
]
