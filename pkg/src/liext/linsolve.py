"""Constraint collection and exact rational Gauss-Jordan solving.

A :class:`LinearSystem` is a list of affine forms each read as ``form = 0``.
:func:`solve` returns either :class:`Solved` (pivot unknowns expressed over
the free ones) or :class:`Inconsistent` carrying a certificate: rational
multipliers whose combination of the constraint forms is a nonzero
constant.  Certificates are checked with :func:`verify_certificate`
without re-running elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .affine import AffineForm, Unknown, combine
from .errors import SolverMisuse
from .poly import Domain, Exponents, Polynomial, format_monomial, monomial_key
from .vfield import VectorField


class Provenance(NamedTuple):
    """Where a constraint came from.

    ``relation`` holds 0-based field indices for bracket constraints and is
    None for side constraints.
    """

    label: str
    relation: tuple[int, int] | None = None
    component: str | None = None
    monomial: Exponents | None = None
    monomial_text: str | None = None

    def sort_key(self, coordinates: Sequence[str] = ()) -> tuple:
        comp = coordinates.index(self.component) if self.component in coordinates else -1
        mono = monomial_key(self.monomial) if self.monomial is not None else ()
        rel = self.relation if self.relation is not None else (1 << 30, 0)
        return (rel, comp, mono, self.label)

    def describe(self) -> str:
        parts = [self.label]
        if self.component is not None:
            parts.append(f"d/d{self.component}")
        if self.monomial_text is not None:
            parts.append(f"[{self.monomial_text}]")
        return " ".join(parts)


@dataclass(frozen=True)
class Constraint:
    form: AffineForm
    provenance: Provenance


@dataclass(frozen=True)
class LinearSystem:
    constraints: tuple[Constraint, ...] = ()

    def __len__(self) -> int:
        return len(self.constraints)

    def __add__(self, other: "LinearSystem") -> "LinearSystem":
        return LinearSystem(self.constraints + other.constraints)

    def forms(self) -> list[AffineForm]:
        return [c.form for c in self.constraints]

    def unknowns(self) -> tuple[Unknown, ...]:
        seen: set[Unknown] = set()
        for c in self.constraints:
            seen.update(c.form.unknowns())
        return tuple(sorted(seen))

    def subsystem(self, indices: Iterable[int]) -> "LinearSystem":
        return LinearSystem(tuple(self.constraints[i] for i in indices))


@dataclass(frozen=True)
class Solved:
    assignments: Mapping[Unknown, AffineForm]
    free: tuple[Unknown, ...]
    status: str = field(default="solved", init=False)

    def value(self, u: Unknown) -> AffineForm:
        if u in self.assignments:
            return self.assignments[u]
        return AffineForm.unknown(u)


@dataclass(frozen=True)
class Inconsistent:
    certificate: tuple[tuple[int, Fraction], ...]
    residual_constant: Fraction
    status: str = field(default="inconsistent", init=False)


SolutionSet = Union[Solved, Inconsistent]


class FreePolicy(Enum):
    ZERO_FILL = "zero_fill"
    KEEP_SYMBOLIC = "keep_symbolic"


def collect(p: Polynomial, provenance: Provenance | str = "") -> LinearSystem:
    """One constraint ``coefficient = 0`` per monomial of ``p``."""
    if isinstance(provenance, str):
        provenance = Provenance(provenance)
    out = []
    for exps, c in p.sorted_terms():
        form = c if isinstance(c, AffineForm) else AffineForm(c)
        prov = provenance._replace(monomial=exps, monomial_text=format_monomial(p.variables, exps))
        out.append(Constraint(form, prov))
    return LinearSystem(tuple(out))


def solve(system: LinearSystem, unknowns: Iterable[Unknown] | None = None) -> SolutionSet:
    """Exact reduced row echelon form with certificate tracking.

    Pivot columns are taken in global unknown order; for each column the
    first remaining row in listed order is used.  ``unknowns`` may add
    unknowns that appear in no constraint; they come back free.
    """
    cols = set(system.unknowns())
    if unknowns is not None:
        cols.update(unknowns)
    order = sorted(cols)
    # row: [coefficients, constant, combination of original constraints]
    rows = []
    for k, c in enumerate(system.constraints):
        rows.append([dict(c.form.linear), c.form.constant, {k: Fraction(1)}])
    remaining = list(range(len(rows)))
    pivots: list[tuple[Unknown, int]] = []
    for u in order:
        pr = next((r for r in remaining if rows[r][0].get(u)), None)
        if pr is None:
            continue
        remaining.remove(pr)
        lin, const, combo = rows[pr]
        inv = 1 / lin[u]
        lin = {w: c * inv for w, c in lin.items()}
        rows[pr] = [lin, const * inv, {k: m * inv for k, m in combo.items()}]
        for r in range(len(rows)):
            if r == pr:
                continue
            f = rows[r][0].get(u)
            if not f:
                continue
            _axpy(rows[r], rows[pr], -f)
        pivots.append((u, pr))

    bad = [r for r in remaining if rows[r][1] != 0]
    if bad:
        return _certificate(system, rows, bad)

    pivot_set = {u for u, _ in pivots}
    free = tuple(u for u in order if u not in pivot_set)
    assignments = {}
    for u, r in pivots:
        lin, const, _ = rows[r]
        assignments[u] = AffineForm(-const, {w: -c for w, c in lin.items() if w != u})
    return Solved(dict(sorted(assignments.items())), free)


def _axpy(row, pivot_row, factor: Fraction) -> None:
    lin, const, combo = row
    plin, pconst, pcombo = pivot_row
    for w, c in plin.items():
        val = lin.get(w, 0) + factor * c
        if val:
            lin[w] = val
        else:
            lin.pop(w, None)
    row[1] = const + factor * pconst
    for k, m in pcombo.items():
        val = combo.get(k, 0) + factor * m
        if val:
            combo[k] = val
        else:
            combo.pop(k, None)


def _certificate(system: LinearSystem, rows, bad: list[int]) -> Inconsistent:
    # a constraint that is itself a nonzero constant is reported verbatim;
    # otherwise the eliminated row is scaled so the residual is 1
    direct = [k for k, c in enumerate(system.constraints) if c.form.is_constant() and c.form.constant != 0]
    if direct:
        k = direct[0]
        return Inconsistent(((k, Fraction(1)),), system.constraints[k].form.constant)
    best = min(bad, key=lambda r: (len(rows[r][2]), sorted(rows[r][2])))
    const = rows[best][1]
    cert = tuple(sorted((k, m / const) for k, m in rows[best][2].items()))
    return Inconsistent(cert, Fraction(1))


def verify_certificate(system: LinearSystem, result: Inconsistent) -> bool:
    total = combine((m, system.constraints[k].form) for k, m in result.certificate)
    return total.is_constant() and total.constant == result.residual_constant and total.constant != 0


def check_solution(system: LinearSystem, result: Solved, free_values: Mapping[Unknown, Fraction] | None = None) -> bool:
    """Back-substitute; with ``free_values`` the free unknowns are specialized too."""
    for c in system.constraints:
        val = c.form.substitute(result.assignments)
        if free_values is not None:
            val = val.substitute(free_values)
        if val:
            return False
    return True


def pinned_value(s: SolutionSet, u: Unknown) -> Fraction | None:
    if not isinstance(s, Solved):
        raise SolverMisuse("pinned_value needs a solved system")
    a = s.assignments.get(u)
    if a is None or not a.is_constant():
        return None
    return a.constant


def pinned(s: Solved) -> dict[Unknown, Fraction]:
    return {u: a.constant for u, a in s.assignments.items() if a.is_constant()}


def substitute_solution(target, s: SolutionSet, free_policy: FreePolicy = FreePolicy.KEEP_SYMBOLIC):
    """Replace unknowns in a Polynomial or VectorField by their assignments.

    Under ZERO_FILL the free unknowns become 0, and a target whose
    coefficients are then all constant is returned in the rational domain.
    """
    if not isinstance(s, Solved):
        raise SolverMisuse("cannot substitute an inconsistent solution")
    assign: dict[Unknown, AffineForm] = dict(s.assignments)
    if free_policy is FreePolicy.ZERO_FILL:
        zeros = {u: AffineForm() for u in s.free}
        assign = {u: a.substitute(zeros) for u, a in assign.items()}
        assign.update(zeros)
    if isinstance(target, VectorField):
        out = target.map(lambda p: _subst_poly(p, assign, free_policy))
        return out
    return _subst_poly(target, assign, free_policy)


def _subst_poly(p: Polynomial, assign, policy: FreePolicy) -> Polynomial:
    if p.domain is Domain.RATIONAL:
        return p
    out = p.substitute_unknowns(assign)
    if policy is FreePolicy.ZERO_FILL:
        leftover = out.unknowns()
        if leftover:
            out = out.substitute_unknowns({u: AffineForm() for u in leftover})
        return out.to_rational()
    return out


def solution_to_dict(s: SolutionSet) -> dict:
    if isinstance(s, Solved):
        return {
            "status": "solved",
            "assignments": {u.name: str(a) for u, a in s.assignments.items()},
            "free": [u.name for u in s.free],
        }
    return {
        "status": "inconsistent",
        "certificate": [[k, str(m)] for k, m in s.certificate],
        "residual": str(s.residual_constant),
    }
