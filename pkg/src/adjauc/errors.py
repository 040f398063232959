"""Exception hierarchy.

The CLI maps ``ValidationError`` subclasses to exit code 2 and
``NumericalError`` subclasses to exit code 3.
"""


class AdjAUCError(Exception):
    """Base class for all package errors."""


class ValidationError(AdjAUCError, ValueError):
    """Input or configuration rejected before any computation."""


class SchemaError(ValidationError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"missing required column {column!r}")


class ParseError(ValidationError):
    def __init__(self, row, column, message):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {message}")


class EmptyInputError(ValidationError):
    pass


class UnusableDataError(ValidationError):
    pass


class DegenerateMarkerError(ValidationError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"marker {column!r} has zero sample variance")


class ConfigurationError(ValidationError):
    pass


class SingularDesignError(ValidationError):
    pass


class NumericalError(AdjAUCError, ArithmeticError):
    """Non-finite values or failed numerical procedures."""

    def __init__(self, message, theta=None):
        self.theta = theta
        super().__init__(message)


class BootstrapFailure(NumericalError):
    pass
