"""
Dirac-Oscillator class of exactly solvable relativistic potentials

Closed-form spectra and spinors, the extended point canonical transformation,
the graded SO(2,1) superalgebra and a finite-difference verification harness.
"""
from .errors import DiracError

__all__ = ['DiracError']
