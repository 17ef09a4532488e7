"""Exception types raised across the package."""

from __future__ import annotations


class PCRankError(Exception):
    """Base class for all errors raised by pcrank."""


class DomainError(PCRankError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ShapeError(PCRankError, ValueError):
    """Operands have incompatible sizes or a wrong number of entries."""


class MatrixSyntaxError(PCRankError, ValueError):
    """Malformed matrix text. ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ReciprocityError(PCRankError, ValueError):
    """A full matrix violates c_ij * c_ji = 1. ``i`` and ``j`` are 1-based."""

    def __init__(self, message: str, i: int, j: int) -> None:
        super().__init__(f"entry ({i},{j}): {message}")
        self.i = i
        self.j = j


class ConvergenceError(PCRankError, ArithmeticError):
    """Power iteration did not reach the residual threshold."""

    def __init__(self, residual: float, iterations: int) -> None:
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations


class RILookupError(PCRankError, KeyError):
    """No random consistency index is known for the requested order."""

    def __init__(self, n: int) -> None:
        super().__init__(n)
        self.n = n

    def __str__(self) -> str:
        return f"no random index RI({self.n}) in table"
