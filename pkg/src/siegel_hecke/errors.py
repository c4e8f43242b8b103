"""Exception hierarchy shared across the package.

Everything derives from SiegelHeckeError so the command-line layer can map
library failures onto exit codes in one place.  Errors that represent an
honest negative answer (no witness exists in the searched range) are kept
distinct from data and usage errors.
"""

from __future__ import annotations


class SiegelHeckeError(Exception):
    """Base class for all package errors."""


class NotTempered(SiegelHeckeError):
    """Spinor roots leave the unit circle by more than the tolerance."""

    def __init__(self, message: str, deviation: float = float("nan")):
        super().__init__(message)
        self.deviation = deviation


class NumericalFailure(SiegelHeckeError):
    """A numeric routine could not reproduce its inputs to tolerance."""


class ParseError(SiegelHeckeError):
    """Malformed table input; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int = 0):
        super().__init__(f"line {line_no}: {message}" if line_no else message)
        self.line_no = line_no


class WeightMissing(ParseError):
    """Raw integer-eigenvalue table without a weight header."""


class DuplicatePrime(ParseError):
    """The same prime appears in more than one table row."""


class MissingPrime(SiegelHeckeError):
    """A required prime has no table entry."""


class MissingB(SiegelHeckeError):
    """A degree-5 coefficient is needed but cannot be derived."""


class RangeExceeded(SiegelHeckeError):
    """A scan was requested beyond the table's declared coverage."""


class NoWitnessPrimes(SiegelHeckeError):
    """No prime in range carries an eigenvalue beyond the threshold."""


class NoNegativeSeed(SiegelHeckeError):
    """A sign -1 witness was requested but no negative seed is reachable."""


class SeedNotFound(SiegelHeckeError):
    """Exhaustive seed search hit its cap without a sign change."""
