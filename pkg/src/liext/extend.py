"""Order-by-order extension of Lie algebra actions onto a formal deformation.

Starting from base fields ``E_i`` and structure constants, order ``n``
adds ``t^n`` times a fresh-unknown ansatz to every field, imposes every
declared relation ``[E_i, E_j] = sum c_k E_k`` modulo ``t^(n+1)`` plus the
template's side constraints, and solves the resulting system exactly.

At order 1 a ``k*t d/dt`` ansatz part differentiates another order-1
unknown back down to degree 1, so some bracket coefficients are bilinear
in the unknowns.  Such constraints are deferred: each round solves the
constraints that are affine, substitutes, and recollects until nothing is
deferred.  A round with deferred constraints and no progress raises
:class:`NonlinearTerm`.  From order 2 on every product of two unknown
blocks lands in degree >= n+1 and is dropped by the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .affine import AffineForm, Unknown
from .errors import InvalidProblem, NonlinearTerm
from .linsolve import (
    Constraint,
    FreePolicy,
    Inconsistent,
    LinearSystem,
    Provenance,
    Solved,
    collect,
    pinned,
    solve,
    substitute_solution,
)
from .poly import Domain, Exponents, Polynomial, format_monomial
from .vfield import VectorField, lie_bracket, linear_combination


# structure


@dataclass(frozen=True)
class LieAlgebraSpec:
    """``relations[(i, j)]`` (``i < j``, 0-based) lists ``(c, k)`` with
    ``[E_i, E_j] = sum c * E_k``.  Pairs not listed are not imposed."""

    field_names: tuple[str, ...]
    relations: Mapping[tuple[int, int], tuple[tuple[Fraction, int], ...]]

    def __post_init__(self):
        n = len(self.field_names)
        for (i, j), rhs in self.relations.items():
            if not (0 <= i < j < n):
                raise InvalidProblem(f"relation index pair {(i, j)} invalid for {n} fields")
            for _, k in rhs:
                if not 0 <= k < n:
                    raise InvalidProblem(f"relation [{i},{j}] refers to field {k}")

    @classmethod
    def from_named(cls, names: Sequence[str], relations: Mapping[tuple[str, str], Sequence[tuple]]) -> "LieAlgebraSpec":
        names = tuple(names)
        index = {nm: k for k, nm in enumerate(names)}
        rels = {}
        for (a, b), rhs in relations.items():
            i, j = index[a], index[b]
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if i == j:
                raise InvalidProblem(f"[{a},{b}] is zero by antisymmetry")
            rels[(i, j)] = tuple((Fraction(c) * sign, index[k]) for c, k in rhs)
        return cls(names, dict(sorted(rels.items())))

    def pair_label(self, pair: tuple[int, int]) -> str:
        return f"[{self.field_names[pair[0]]},{self.field_names[pair[1]]}]"

    def restricted(self, keep: Sequence[str]) -> "LieAlgebraSpec":
        """The relations among a subset of fields, reindexed."""
        keep = tuple(keep)
        new = {nm: k for k, nm in enumerate(keep)}
        rels = {}
        for (i, j), rhs in self.relations.items():
            a, b = self.field_names[i], self.field_names[j]
            if a in new and b in new and all(self.field_names[k] in new for _, k in rhs):
                rels[(new[a], new[b])] = tuple((c, new[self.field_names[k]]) for c, k in rhs)
        return LieAlgebraSpec(keep, dict(sorted(rels.items())))


@dataclass(frozen=True)
class RelationCheck:
    pair: tuple[int, int]
    label: str
    bracket: VectorField
    difference: VectorField

    @property
    def ok(self) -> bool:
        return self.difference.is_zero()


@dataclass(frozen=True)
class VerificationReport:
    field_names: tuple[str, ...]
    checks: tuple[RelationCheck, ...]
    cutoff: tuple[str, int] | None = None

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.checks)

    @property
    def all_ok(self) -> bool:
        return self.passed == len(self.checks)


def relation_difference(fields: Sequence[VectorField], spec: LieAlgebraSpec, pair, cutoff=None, quadratic=None):
    i, j = pair
    br = lie_bracket(fields[i], fields[j], cutoff, quadratic)
    rhs = spec.relations[pair]
    if rhs:
        target = linear_combination([c for c, _ in rhs], [fields[k] for _, k in rhs])
        if cutoff is not None:
            target = target.truncate(*cutoff)
    else:
        target = VectorField.zero(br.coordinates, br.deform, br.domain)
    return br, br - target


def verify_structure(fields: Sequence[VectorField], spec: LieAlgebraSpec, cutoff=None) -> VerificationReport:
    if len(fields) != len(spec.field_names):
        raise InvalidProblem(f"{len(fields)} fields for {len(spec.field_names)} names")
    checks = []
    for pair in sorted(spec.relations):
        br, diff = relation_difference(fields, spec, pair, cutoff)
        checks.append(RelationCheck(pair, spec.pair_label(pair), br, diff))
    return VerificationReport(spec.field_names, tuple(checks), cutoff)


# ansatz


@dataclass(frozen=True, order=True)
class CoefRef:
    """The coefficient of one monomial in one component of one field."""

    field: int
    component: str
    exps: Exponents


@dataclass(frozen=True)
class SideConstraint:
    """``sum(c * ref) + constant = 0``, imposed at the highest t-degree it mentions."""

    terms: tuple[tuple[Fraction, CoefRef], ...]
    constant: Fraction = Fraction(0)
    label: str = "side"

    def order(self, t_index: int) -> int:
        return max([1] + [ref.exps[t_index] for _, ref in self.terms])


@dataclass(frozen=True)
class AnsatzTemplate:
    """Degree bounds per (field index, component).

    At order ``n`` the support of a block is ``t^n`` times every monomial
    in the other coordinates within the bounds; coordinates without a bound
    have degree 0.
    """

    supports: Mapping[tuple[int, str], Mapping[str, int]] = field(default_factory=dict)
    side_constraints: tuple[SideConstraint, ...] = ()
    names: Mapping[CoefRef, str] = field(default_factory=dict)

    def support(self, fidx: int, comp: str, coordinates: Sequence[str], t: str, n: int) -> list[Exponents]:
        bounds = self.supports.get((fidx, comp))
        if bounds is None:
            return []
        ranges = []
        for x in coordinates:
            if x == t:
                ranges.append((n,))
            else:
                ranges.append(range(bounds.get(x, 0) + 1))
        return sorted(product(*ranges), key=lambda e: (sum(e), e))


@dataclass(frozen=True)
class ExtensionProblem:
    coordinates: tuple[str, ...]
    deform: str
    base_fields: tuple[VectorField, ...]
    spec: LieAlgebraSpec
    ansatz: AnsatzTemplate
    max_order: int = 2
    free_policy: FreePolicy = FreePolicy.ZERO_FILL

    def validate(self) -> None:
        if self.deform not in self.coordinates:
            raise InvalidProblem(f"deformation variable {self.deform!r} is not a coordinate")
        if self.max_order < 0:
            raise InvalidProblem("max_order must be >= 0")
        for name, F in zip(self.spec.field_names, self.base_fields):
            if F.coordinates != self.coordinates:
                raise InvalidProblem(f"field {name} is over {F.coordinates}")
            if not F.component(self.deform).is_zero():
                raise InvalidProblem(f"base field {name} has a d/d{self.deform} component")
            if F.domain is not Domain.RATIONAL:
                raise InvalidProblem(f"base field {name} has symbolic coefficients")
        report = verify_structure(self.base_fields, self.spec)
        if not report.all_ok:
            bad = ", ".join(c.label for c in report.checks if not c.ok)
            raise InvalidProblem(f"base fields violate relations {bad}")


# results


@dataclass(frozen=True)
class Round:
    system: LinearSystem
    solution: Solved | Inconsistent
    deferred: tuple[Provenance, ...]


@dataclass(frozen=True)
class ObstructionReport:
    order: int
    relation: tuple[int, int] | None
    relation_label: str
    component: str | None
    residual: Polynomial | None
    certificate: Inconsistent
    system: LinearSystem
    inconsistent_relations: tuple[str, ...]

    def certificate_provenances(self) -> list[Provenance]:
        return [self.system.constraints[k].provenance for k, _ in self.certificate.certificate]


@dataclass(frozen=True)
class Stage:
    order: int
    fields: tuple[VectorField, ...]
    solution: Solved
    unknowns: tuple[Unknown, ...]
    rounds: tuple[Round, ...]

    def pinned(self) -> dict[str, Fraction]:
        return {u.name: v for u, v in pinned(self.solution).items()}

    def unknown(self, name: str) -> Unknown:
        for u in self.unknowns:
            if u.name == name:
                return u
        raise KeyError(name)


@dataclass(frozen=True)
class ExtensionResult:
    problem: ExtensionProblem
    achieved_order: int
    stages: tuple[Stage, ...]
    obstruction: ObstructionReport | None = None
    obstruction_rounds: tuple[Round, ...] = ()

    @property
    def fields(self) -> tuple[VectorField, ...]:
        return self.stages[-1].fields if self.stages else self.problem.base_fields


# driver


@dataclass
class _State:
    order: int
    fields: tuple[VectorField, ...]
    carried: tuple[Unknown, ...] = ()
    seq: int = 0


def _unknown_name(problem: ExtensionProblem, ref: CoefRef) -> str:
    name = problem.ansatz.names.get(ref)
    if name:
        return name
    tag = "".join(f"{x}{e}" for x, e in zip(problem.coordinates, ref.exps) if e) or "1"
    return f"{problem.spec.field_names[ref.field]}_{ref.component}_{tag}"


def build_parametric_fields(problem: ExtensionProblem, fields: Sequence[VectorField], n: int, seq: int = 0):
    """``E_i + t^n * ansatz_i`` with fresh unknowns.

    Returns the affine fields, the new unknowns in creation order and the
    map from coefficient slots to unknowns.
    """
    coords = problem.coordinates
    out = []
    unknowns = []
    slots: dict[CoefRef, Unknown] = {}
    for i, F in enumerate(fields):
        F = F.to_affine()
        comps = []
        for x, c in zip(coords, F.components):
            terms = {}
            for exps in problem.ansatz.support(i, x, coords, problem.deform, n):
                ref = CoefRef(i, x, exps)
                u = Unknown(n, seq, _unknown_name(problem, ref))
                seq += 1
                unknowns.append(u)
                slots[ref] = u
                terms[exps] = AffineForm.unknown(u)
            comps.append(c + Polynomial(coords, terms, Domain.AFFINE))
        out.append(VectorField(coords, tuple(comps), problem.deform))
    return tuple(out), tuple(unknowns), slots


def _side_system(problem: ExtensionProblem, fields: Sequence[VectorField], n: int) -> list[Constraint]:
    ti = problem.coordinates.index(problem.deform)
    out = []
    for k, sc in enumerate(problem.ansatz.side_constraints):
        if sc.order(ti) != n:
            continue
        form = AffineForm(sc.constant)
        for c, ref in sc.terms:
            coeff = fields[ref.field].component(ref.component).coefficient(ref.exps)
            form = form + (coeff * c if isinstance(coeff, AffineForm) else AffineForm(coeff * c))
        out.append(Constraint(form, Provenance(f"{sc.label}#{k + 1}")))
    return out


def _collect_round(problem: ExtensionProblem, fields: Sequence[VectorField], n: int):
    spec = problem.spec
    cutoff = (problem.deform, n)
    coords = problem.coordinates
    constraints: list[Constraint] = []
    deferred: list[Provenance] = []
    diffs = {}
    for pair in sorted(spec.relations):
        quad: dict = {}
        _, diff = relation_difference(fields, spec, pair, cutoff, quad)
        diffs[pair] = diff
        label = spec.pair_label(pair)
        for x, comp in zip(coords, diff.components):
            base = Provenance(label, pair, x)
            sys = collect(comp, base)
            for c in sys.constraints:
                if (x, c.provenance.monomial) in quad:
                    deferred.append(c.provenance)
                else:
                    constraints.append(c)
            for (qx, exps) in quad:
                if qx == x and comp.coefficient(exps) == 0:
                    deferred.append(base._replace(monomial=exps, monomial_text=format_monomial(coords, exps)))
    constraints.extend(_side_system(problem, fields, n))
    constraints.sort(key=lambda c: c.provenance.sort_key(coords))
    return LinearSystem(tuple(constraints)), tuple(deferred), diffs


def _obstruction(problem: ExtensionProblem, n: int, system: LinearSystem, result: Inconsistent, diffs) -> ObstructionReport:
    spec = problem.spec
    by_rel: dict[tuple[int, int], list[int]] = {}
    side = []
    for k, c in enumerate(system.constraints):
        if c.provenance.relation is None:
            side.append(k)
        else:
            by_rel.setdefault(c.provenance.relation, []).append(k)
    failing = []
    for pair in sorted(by_rel):
        idx = by_rel[pair] + side
        sub = solve(system.subsystem(idx))
        if isinstance(sub, Inconsistent):
            mapped = tuple((idx[k], m) for k, m in sub.certificate)
            failing.append((pair, Inconsistent(tuple(sorted(mapped)), sub.residual_constant)))
    if failing:
        pair, cert = failing[0]
    else:
        cert = result
        rels = [system.constraints[k].provenance.relation for k, _ in cert.certificate]
        rels = [r for r in rels if r is not None]
        pair = min(rels) if rels else None
    component = None
    for k, _ in cert.certificate:
        prov = system.constraints[k].provenance
        if prov.relation == pair and prov.component is not None:
            component = prov.component
            break
    residual = diffs[pair].component(component) if pair is not None and component is not None else None
    return ObstructionReport(
        order=n,
        relation=pair,
        relation_label=spec.pair_label(pair) if pair is not None else "side constraints",
        component=component,
        residual=residual,
        certificate=cert,
        system=system,
        inconsistent_relations=tuple(spec.pair_label(p) for p, _ in failing),
    )


def extend_one_order(problem: ExtensionProblem, state: _State):
    """Advance one order; returns ``(Stage, new_state)`` or ``(ObstructionReport, rounds)``."""
    n = state.order + 1
    param, fresh, _ = build_parametric_fields(problem, state.fields, n, state.seq)
    live = tuple(sorted(set(fresh) | set(state.carried)))
    assign: dict[Unknown, AffineForm] = {}
    rounds: list[Round] = []
    while True:
        current = tuple(F.map(lambda p: p.substitute_unknowns(assign)) for F in param)
        system, deferred, diffs = _collect_round(problem, current, n)
        free_now = [u for u in live if u not in assign]
        result = solve(system, free_now)
        rounds.append(Round(system, result, deferred))
        if isinstance(result, Inconsistent):
            return _obstruction(problem, n, system, result, diffs), tuple(rounds)
        new = result.assignments
        if deferred and not new:
            first = deferred[0]
            raise NonlinearTerm(
                f"order {n}: {len(deferred)} constraints stay bilinear in free unknowns, "
                f"first at {first.describe()}"
            )
        assign = {u: a.substitute(new) for u, a in assign.items()}
        assign.update(new)
        if not deferred:
            break
    free = tuple(u for u in live if u not in assign)
    solution = Solved(dict(sorted(assign.items())), free)
    fields = tuple(substitute_solution(F, solution, problem.free_policy) for F in param)
    carried = free if problem.free_policy is FreePolicy.KEEP_SYMBOLIC else ()
    stage = Stage(n, fields, solution, tuple(fresh), tuple(rounds))
    return stage, _State(n, fields, carried, state.seq + len(fresh))


def extend(problem: ExtensionProblem) -> ExtensionResult:
    problem.validate()
    state = _State(0, tuple(problem.base_fields))
    stages: list[Stage] = []
    while state.order < problem.max_order:
        out, nxt = extend_one_order(problem, state)
        if isinstance(out, ObstructionReport):
            return ExtensionResult(problem, state.order, tuple(stages), out, nxt)
        stages.append(out)
        state = nxt
    return ExtensionResult(problem, state.order, tuple(stages))

