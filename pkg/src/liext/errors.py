"""Exception hierarchy shared by every liext module."""

from __future__ import annotations


class LiextError(Exception):
    """Base class for all user-facing errors raised by liext."""


class DomainMismatch(LiextError):
    """Two polynomials disagree on variable list or coefficient domain."""


class NonlinearTerm(LiextError):
    """A product would multiply two non-constant affine forms."""


class IllDefinedBracket(LiextError):
    """A truncated bracket was requested for fields with a constant d/dt part."""


class NotTangent(LiextError):
    """Restriction to the central fiber of a field not tangent to it."""


class SolverMisuse(LiextError):
    """A solved-only query was made on an inconsistent solution set."""


class ParseError(LiextError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class SemanticError(LiextError):
    """Well-formed input that refers to undeclared or duplicated names.

    ``span`` is ``(line, start_column, end_column)`` of the offending token,
    1-based and end-exclusive.
    """

    def __init__(self, span: tuple[int, int, int], message: str):
        line, col, _ = span
        super().__init__(f"{line}:{col}: {message}")
        self.span = span
        self.message = message


class InvalidProblem(LiextError):
    """An extension problem whose base data violates its invariants."""
