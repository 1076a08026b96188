"""In-memory form of a ``.liext`` problem description."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import InvalidProblem
from ..extend import AnsatzTemplate, CoefRef, ExtensionProblem, LieAlgebraSpec, SideConstraint
from ..linsolve import FreePolicy
from ..poly import Exponents
from ..vfield import VectorField

DEFAULT_MAX_ORDER = 2


@dataclass(frozen=True)
class FieldDef:
    name: str
    field: VectorField


@dataclass(frozen=True)
class RelationDef:
    left: str
    right: str
    rhs: tuple[tuple[Fraction, str], ...]


@dataclass(frozen=True)
class AnsatzDef:
    field: str
    component: str
    bounds: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class CoefRefExpr:
    field: str
    component: str
    exps: Exponents


@dataclass(frozen=True)
class NameDef:
    name: str
    ref: CoefRefExpr


@dataclass(frozen=True)
class ConstraintDef:
    """``sum(c * ref) = rhs``; a ref is a CoefRefExpr or a declared name."""

    terms: tuple[tuple[Fraction, Union[CoefRefExpr, str]], ...]
    rhs: Fraction


@dataclass(frozen=True)
class ProblemDocument:
    variables: tuple[str, ...] = ()
    deform: str | None = None
    fields: tuple[FieldDef, ...] = ()
    relations: tuple[RelationDef, ...] = ()
    ansatz: tuple[AnsatzDef, ...] = ()
    names: tuple[NameDef, ...] = ()
    constraints: tuple[ConstraintDef, ...] = ()
    max_order: int | None = None
    free_policy: FreePolicy | None = None
    extend_fields: tuple[str, ...] | None = None

    def field(self, name: str) -> VectorField:
        for f in self.fields:
            if f.name == name:
                return f.field
        raise KeyError(name)

    @property
    def field_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.fields)

    def spec(self) -> LieAlgebraSpec:
        rels = {(r.left, r.right): r.rhs for r in self.relations}
        return LieAlgebraSpec.from_named(self.field_names, rels)


def to_problem(doc: ProblemDocument, max_order: int | None = None, free_policy: FreePolicy | None = None) -> ExtensionProblem:
    """Assemble the extension problem; command-line values override options."""
    if doc.deform is None:
        raise InvalidProblem("an extension problem needs a 'deform' declaration")
    names = doc.extend_fields if doc.extend_fields is not None else doc.field_names
    if not names:
        raise InvalidProblem("no fields to extend")
    index = {nm: k for k, nm in enumerate(names)}
    spec = doc.spec().restricted(names)

    def ref(r: CoefRefExpr) -> CoefRef:
        if r.field not in index:
            raise InvalidProblem(f"coef({r.field}, ...) refers to a field outside the extended set")
        return CoefRef(index[r.field], r.component, r.exps)

    supports = {}
    for a in doc.ansatz:
        if a.field in index:
            supports[(index[a.field], a.component)] = dict(a.bounds)
    named = {n.name: n.ref for n in doc.names}
    sides = []
    for k, c in enumerate(doc.constraints):
        terms = []
        for coef, target in c.terms:
            target = named[target] if isinstance(target, str) else target
            terms.append((coef, ref(target)))
        sides.append(SideConstraint(tuple(terms), -c.rhs, "constraint"))
    ansatz = AnsatzTemplate(
        supports,
        tuple(sides),
        {ref(n.ref): n.name for n in doc.names if n.ref.field in index},
    )
    return ExtensionProblem(
        coordinates=doc.variables,
        deform=doc.deform,
        base_fields=tuple(doc.field(nm) for nm in names),
        spec=spec,
        ansatz=ansatz,
        max_order=max_order if max_order is not None else (doc.max_order if doc.max_order is not None else DEFAULT_MAX_ORDER),
        free_policy=free_policy or doc.free_policy or FreePolicy.ZERO_FILL,
    )
