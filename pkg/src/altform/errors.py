"""Exception types shared across the package."""


class AltformError(Exception):
    """Base class for all library errors."""


class FieldMismatch(AltformError, TypeError):
    """Operands live in different fields."""


class DivisionByZero(AltformError, ZeroDivisionError):
    pass


class DimensionMismatch(AltformError, ValueError):
    pass


class InvalidField(AltformError, ValueError):
    pass


class InvalidForm(AltformError, ValueError):
    pass


class InvalidInvolution(AltformError, ValueError):
    pass


class NotOrthogonal(AltformError, ValueError):
    """The involution is symplectic (1 lies in Alt)."""


class NotAUnit(AltformError, ValueError):
    pass


class UnsupportedProvenance(AltformError, ValueError):
    """The operation needs a construction history the algebra does not have."""


class PhiConstructionFailed(AltformError, RuntimeError):
    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)


class ParseError(AltformError, ValueError):
    """Malformed element string or instance file.

    ``line``/``column`` are 1-based positions when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)
