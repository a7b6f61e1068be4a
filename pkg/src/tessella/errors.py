"""Exception hierarchy shared by all tessella modules."""


class TessellaError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(TessellaError, ValueError):
    """Operands live in different groups or have the wrong shape."""


class RankError(TessellaError, ValueError):
    """A lattice basis is singular or has the wrong rank."""


class BudgetError(TessellaError, RuntimeError):
    """A search would exceed its configured size or time cap."""


class DegenerateError(TessellaError, ValueError):
    pass


class CollisionError(TessellaError, ValueError):
    """Dilation mapped two distinct points to the same point."""


class UnsupportedError(TessellaError, ValueError):
    pass


class PreconditionError(TessellaError, ValueError):
    pass


class ShapeError(TessellaError, ValueError):
    pass


class TieError(TessellaError, ArithmeticError):
    """A strict inequality evaluated to exactly zero."""


class DecodeError(TessellaError, ValueError):
    pass


class RangeError(TessellaError, IndexError):
    """A query fell outside the finite table or window it was given."""


class BoundExceededError(TessellaError, RuntimeError):
    """A search guaranteed to succeed within a bound did not."""


class FormatError(TessellaError, ValueError):
    """Malformed interchange document."""

    def __init__(self, message, line=None, column=None, source=None):
        super().__init__(message)
        self.msg = message
        self.line = line
        self.column = column
        self.source = source

    def __str__(self):
        if self.line is not None:
            return f"line {self.line}, column {self.column}: {self.msg}"
        return self.msg
