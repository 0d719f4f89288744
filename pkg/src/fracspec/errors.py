"""Exception taxonomy shared across the library.

The split mirrors how callers need to react: bad arguments and violated
mathematical hypotheses are ValueErrors (caller mistake, fix the input),
while NumericError flags a computation that was attempted and failed.
"""


class FracspecError(Exception):
    """Base class for all library errors."""


class ParameterError(FracspecError, ValueError):
    """A numeric parameter is outside its admissible range."""


class DomainError(ParameterError):
    """Evaluation requested outside the supported argument domain."""


class CompatibilityError(FracspecError, ValueError):
    """A signal violates the zero-at-start compatibility condition."""


class GridError(FracspecError, ValueError):
    """Grids are mismatched or too coarse for the requested computation."""


class DegeneratePotentialError(FracspecError, ValueError):
    """The potential is identically zero (lowest eigenvalue 0 breaks 1/lambda sums)."""


class PoleProximityError(ParameterError):
    """Evaluation point is too close to a pole of the resolvent."""


class HypothesisViolation(FracspecError, ValueError):
    """An experiment's mathematical hypothesis is violated (e.g. g identically 0)."""


class NumericError(FracspecError, RuntimeError):
    """A numeric procedure failed to converge or produced non-finite values."""


class TruncationWarning(UserWarning):
    """The spectral mode count leaves a truncation tail above tolerance."""
