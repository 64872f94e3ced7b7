"""Exception types raised by the zero finders, rule builders and oracle."""


class HalleyQuadError(Exception):
    """Base class for all package errors."""


class DomainViolation(HalleyQuadError):
    """A point left the open working interval (or r <= 0 was met there)."""


class PoleEncountered(HalleyQuadError):
    """The ratio f/f' was requested where f' vanishes."""


class SweepCapExceeded(HalleyQuadError):
    """The arctan pre-iteration did not reach the convergence side within its cap."""


class HopTooLarge(HalleyQuadError):
    """A Taylor re-centering was asked to jump beyond the reliable radius."""


class NormalizationFailure(HalleyQuadError):
    """Weight normalisation sum underflowed to zero."""


class EnumerationIncomplete(HalleyQuadError):
    """A march ended with fewer nodes than the degree requires."""


class BracketingIncomplete(HalleyQuadError):
    """The oracle grid did not isolate the expected number of zeros."""


class LengthMismatch(HalleyQuadError, ValueError):
    """Computed and reference sequences differ in length."""
