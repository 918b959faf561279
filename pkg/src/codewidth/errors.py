"""Exception types raised across the package."""

from __future__ import annotations


class InvalidParamsError(ValueError):
    """Parameters outside the domain an operation is defined on."""


class NotPrimeError(InvalidParamsError):
    def __init__(self, p: int):
        super().__init__(f"{p} is not prime")
        self.p = p


class OutOfRangeError(InvalidParamsError):
    pass


class EmptyMatrixError(ValueError):
    pass


class MalformedProfileError(ValueError):
    pass


class SizeMismatchError(ValueError):
    pass


class NotInternalError(ValueError):
    pass


class TooLargeError(ValueError):
    """An exhaustive computation was asked to run beyond its size gate."""

    def __init__(self, what: str, size: int, gate: int):
        super().__init__(
            f"{what}: size {size} exceeds the gate of {gate} (pass force=True / --force to run anyway)"
        )
        self.size = size
        self.gate = gate


class CodeFileError(ValueError):
    """Malformed code file; carries 1-based line/column of the offending token."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
