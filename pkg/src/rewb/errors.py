"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: SourceError, CompatibilityError and
ValidationError are reported as domain errors (exit 1), BudgetError as a
resource error (exit 3).
"""


class RewbError(Exception):
    """Base class for all errors raised by this package."""


class SourceError(RewbError):
    """Malformed textual input. Positions are 1-based."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class CompatibilityError(RewbError):
    """A valuation does not cover all free variables of an expression."""


class ValidationError(RewbError):
    """A domain precondition was violated (bad parameter, letter clash, ...)."""


class UndefinedVariableError(RewbError):
    """A condition was evaluated against a variable with no value.

    For well-formed inputs this never happens: guards only mention free
    variables (covered by the compatibility check) or registers that have
    been stored before the guard can fire.
    """


class BudgetError(RewbError):
    """A configurable resource budget was exceeded; no partial result."""
