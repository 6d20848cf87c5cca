"""Exceptions raised by the numerical routines."""
from __future__ import annotations


class InstabilityError(ValueError):
    """A polynomial has a zero inside the open unit ball.

    ``witness`` is a point (or root) exhibiting the zero.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class BranchError(ValueError):
    """An iterated logarithm left the domain of the principal branch."""

    def __init__(self, level: int, constant: complex):
        super().__init__(
            f"level {level}: constant term {constant!r} lies on the branch cut (-inf, 0]"
        )
        self.level = level
        self.constant = constant
