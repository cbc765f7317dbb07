"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line tool.
"""


class FramelabError(Exception):
    """Base class for all errors raised by framelab."""

    exit_code = 10


class InvalidShape(FramelabError, ValueError):
    """(M, N, k) combination outside the domain of an operation."""

    exit_code = 4


class IndexOutOfRange(FramelabError, IndexError):
    exit_code = 4


class CapExceeded(FramelabError):
    """A combinatorial sum would enumerate more subsets than allowed."""

    exit_code = 5

    def __init__(self, count, cap):
        super().__init__(f"{count} subsets exceed the configured cap of {cap}")
        self.count = count
        self.cap = cap


class NumericalFailure(FramelabError, ArithmeticError):
    exit_code = 7


class SingularMatrix(NumericalFailure):
    pass


class ZeroVector(FramelabError, ValueError):
    exit_code = 4


class NotParseval(FramelabError, ValueError):
    exit_code = 6


class RankMismatch(NumericalFailure):
    pass


class PreconditionFailed(FramelabError, ValueError):
    exit_code = 4


class UnknownCheck(FramelabError, KeyError):
    exit_code = 8


class ParseError(FramelabError, ValueError):
    exit_code = 3
