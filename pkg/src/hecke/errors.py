"""Exception hierarchy shared by every module.

Each concrete class carries the process exit code the CLI uses for it.
"""


class HeckeError(Exception):
    exit_code = 1


class ParseError(HeckeError, ValueError):
    exit_code = 3


class BudgetExceeded(HeckeError):
    exit_code = 4


class PrecisionError(HeckeError, ArithmeticError):
    """Raised when an answer would depend on digits below working precision."""

    exit_code = 5


class DepthError(HeckeError):
    exit_code = 6


class StructuralError(HeckeError):
    """A computed object violates a structural expectation (basis, cell, stabilizer)."""

    exit_code = 7


class CellMismatch(StructuralError):
    pass


class ContextMismatch(HeckeError, ValueError):
    exit_code = 8
