"""Exception types shared across the package."""


class SuenrichError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SuenrichError, ValueError):
    """A textual description (automaton, monoid, word, ...) is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AlphabetMismatch(SuenrichError, ValueError):
    """Two automata that must share an alphabet do not."""


class CapacityError(SuenrichError, RuntimeError):
    """A configured size cap (monoid size, stratum, search budget) was exceeded."""


class InvariantViolation(SuenrichError, AssertionError):
    """A runtime-checked mathematical invariant failed.

    This always signals an implementation bug (or a deliberately injected
    mutation), never a property of the input.
    """
