"""The ``.liext`` problem language: parser, canonical printer, JSON emitter."""

from .document import ProblemDocument, to_problem
from .emit import emit_json
from .parser import parse, parse_field, parse_polynomial
from .printer import print_document

__all__ = [
    "ProblemDocument",
    "emit_json",
    "parse",
    "parse_field",
    "parse_polynomial",
    "print_document",
    "to_problem",
]
