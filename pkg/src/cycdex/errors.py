"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""

from __future__ import annotations


class CycdexError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(CycdexError, ValueError):
    """Malformed or out-of-domain input (exit code 2)."""


class CheckFailedError(CycdexError):
    """An asserted identity or inequality failed; carries a witness (exit code 3)."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class SizeLimitError(CycdexError):
    """A size or search budget was exceeded (exit code 4)."""


class PrecisionError(CycdexError):
    """A sign decision was inconclusive at the configured precision (exit code 5)."""
