"""Exact Lie bracket verification and order-by-order extension of
polynomial vector fields onto a one-parameter formal deformation."""

from .affine import AffineForm, Unknown
from .errors import (
    DomainMismatch,
    IllDefinedBracket,
    InvalidProblem,
    LiextError,
    NonlinearTerm,
    NotTangent,
    ParseError,
    SemanticError,
    SolverMisuse,
)
from .extend import (
    AnsatzTemplate,
    CoefRef,
    ExtensionProblem,
    ExtensionResult,
    LieAlgebraSpec,
    ObstructionReport,
    SideConstraint,
    extend,
    verify_structure,
)
from .linsolve import FreePolicy, LinearSystem, collect, pinned_value, solve, substitute_solution
from .poly import Domain, Polynomial
from .vfield import VectorField, lie_bracket, restrict_central

__version__ = "0.1.0"
