class HallError(Exception):
    """Base class for all package errors."""


class CapacityError(HallError):
    """An enumeration or search would exceed its configured cap.

    Raised instead of truncating or guessing; carries the offending size.
    """

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class UnsupportedCategoryError(HallError):
    """Loewy/Euler machinery asked for a non-nilpotent module on a cyclic quiver."""


class ValidationError(HallError):
    """Malformed or mismatched input data (wrong field, wrong quiver, bad shape)."""


class QuiverSyntaxError(ValidationError):
    """Quiver DSL parse failure with source position."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column
