"""
Exception hierarchy for holder_regularity.

Every error carries an ``exit_code`` used by the command line:
1 for bad input, 2 when the method does not apply, 3 when the spectral
radius could not be enclosed tightly enough.
"""

from typing import Any


class RegularityError(Exception):
    """Base class for all library errors."""

    exit_code = 1


# ---------------------------------------------------------------------------
# Input errors (exit code 1)
# ---------------------------------------------------------------------------

class InputError(RegularityError):
    """The input violates a stated precondition."""

    exit_code = 1


class DomainError(InputError):
    """Evaluation outside the domain of a Laurent polynomial."""


class ParameterRangeError(InputError):
    """A family parameter or theorem index is out of range."""


class ConvergenceConditionError(InputError):
    """The symbol does not satisfy a(1) = 2 and a(-1) = 0."""


class NotDivisibleError(InputError):
    """A polynomial is not divisible by the requested power of (1+z)."""


class SequenceTooShortError(InputError):
    """Too few samples for the requested divided difference order."""


class DegenerateSequenceError(InputError):
    """A zero central coefficient blocks a ratio estimate."""


class MaskParseError(InputError):
    """A mask string or mask file could not be parsed."""


# ---------------------------------------------------------------------------
# Method inapplicable (exit code 2)
# ---------------------------------------------------------------------------

class MethodInapplicableError(RegularityError):
    """The spectral-radius method cannot certify a regularity value."""

    exit_code = 2

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class NotSymmetricError(MethodInapplicableError):
    """The difference mask has no palindromic center."""


class OddCenterError(MethodInapplicableError):
    """The difference mask is symmetric about a half-integer."""


class ZeroPolynomialError(MethodInapplicableError):
    """An operation that needs a nonzero polynomial received zero."""


class DegenerateBSplineError(MethodInapplicableError):
    """A transition matrix was requested for p = 0."""


class IndefiniteSymbolError(MethodInapplicableError):
    """B changes sign on [0, 1], so the max-at-center bound fails."""


class OutOfTheoremRangeError(MethodInapplicableError):
    """The spectral radius lies below 1/2."""


class ReductionWindowExceededError(MethodInapplicableError):
    """The spectral radius is at least 2^r."""


class NotStrictlyPositiveError(MethodInapplicableError):
    """A ratio bound needs a denominator that is positive on all of [0, 1]."""


# ---------------------------------------------------------------------------
# Enclosure failure (exit code 3)
# ---------------------------------------------------------------------------

class EnclosureTooWideError(RegularityError):
    """The certified enclosure of the spectral radius is too wide."""

    exit_code = 3

    def __init__(self, message: str, enclosure: Any = None):
        super().__init__(message)
        self.enclosure = enclosure
