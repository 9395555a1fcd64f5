"""
Exception hierarchy for the Dirac-Oscillator class library

Every error raised by the library derives from DiracError, which itself is a
ValueError so callers validating user input can catch either.
"""


class DiracError(ValueError):
    """Base class for all library errors"""


class DomainError(DiracError):
    """Argument outside the mathematical domain of an operation"""


class SingularConfigurationError(DiracError):
    """Configuration where the equations degenerate (C = 0, C + ε = 0)"""


class InvalidBranchError(DiracError):
    """κ does not correspond to either branch κ = l or κ = −l−1"""


class SupercriticalError(DiracError):
    """|αZ| ≥ |κ| makes σ imaginary"""


class NoBoundStateError(DiracError):
    """Requested level has no normalizable bound state"""


class LevelCountError(DiracError):
    """Level index beyond the admitted range of a finite spectrum"""


class NonNormalizableError(DiracError):
    """Closed-form state is not square integrable"""


class ExcludedParameterError(DiracError):
    """Parameter value explicitly excluded from a family"""


class InconsistentBranchError(DiracError):
    """Compatibility conditions between derived parameters fail"""


class TermMatchingError(DiracError):
    """Power-by-power matching left an unbalanced term"""


class NonConstantDifferenceError(DiracError):
    """Two sides of an identity differ by more than a constant"""


class GridError(DiracError):
    """Base class for grid related failures"""


class GridTooSmallError(GridError):
    """Grid has fewer interior points than required"""


class GridMismatchError(GridError):
    """Grid functions sampled on different grids"""


class GridResolutionError(GridError):
    """Grid does not resolve the functions involved"""


class EigensolverError(DiracError):
    """Eigenvalue request that cannot be served"""


class ZeroMassFactorError(DiracError):
    """λ3 = 0 leaves Q without a mass term"""


class ScatteringBranchError(DiracError):
    """Tilting parameter on the continuum side (2τ3 − 1 ≤ 0)"""
