"""Exception hierarchy shared by every module."""


class LocusmithError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(LocusmithError, ValueError):
    pass


class NonMongeLinearPart(LocusmithError, ValueError):
    pass


class NonFiniteEntry(LocusmithError, ValueError):
    pass


class WrongManifoldClass(LocusmithError, ValueError):
    """Operation is not defined for this (source_dim, ambient_dim, corank)."""


class EmptyGrid(LocusmithError, ValueError):
    pass


class KernelDirection(LocusmithError, ValueError):
    """A section direction lies in the kernel of the differential."""


class ZeroDirection(LocusmithError, ValueError):
    pass


class NonTangentDirection(LocusmithError, ValueError):
    pass


class PoleOnlyGrid(LocusmithError, ValueError):
    pass


class NonConvergentLimit(LocusmithError, ArithmeticError):
    pass


class UndefinedForType(LocusmithError, ValueError):
    pass


class ParseError(LocusmithError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
