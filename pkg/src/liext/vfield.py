"""Polynomial vector fields (derivations) and their Lie brackets.

Bracket convention: ``[X, Y]^j = X(Y^j) - Y(X^j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DomainMismatch, IllDefinedBracket, NotTangent
from .poly import Cutoff, Domain, Polynomial, mul, partial_derivative, substitute, truncate, valuation


@dataclass(frozen=True)
class VectorField:
    """One polynomial coefficient per coordinate direction.

    ``components[k]`` is the ``d/d coordinates[k]`` coefficient.
    """

    coordinates: tuple[str, ...]
    components: tuple[Polynomial, ...]
    deform: str | None = None

    def __post_init__(self):
        if len(self.coordinates) != len(self.components):
            raise ValueError("one component per coordinate required")
        domains = {c.domain for c in self.components}
        if len(domains) > 1:
            raise DomainMismatch("components of a field must share a coefficient domain")
        for c in self.components:
            if c.variables != self.coordinates:
                raise DomainMismatch(f"component over {c.variables}, field over {self.coordinates}")
        if self.deform is not None and self.deform not in self.coordinates:
            raise DomainMismatch(f"deformation variable {self.deform!r} is not a coordinate")

    @classmethod
    def from_components(
        cls,
        coordinates: Sequence[str],
        comps: Mapping[str, Polynomial],
        deform: str | None = None,
        domain: Domain = Domain.RATIONAL,
    ) -> "VectorField":
        coordinates = tuple(coordinates)
        unknown = set(comps) - set(coordinates)
        if unknown:
            raise DomainMismatch(f"components for undeclared coordinates {sorted(unknown)}")
        if comps:
            domain = next(iter(comps.values())).domain
        return cls(
            coordinates,
            tuple(comps.get(x, Polynomial.zero(coordinates, domain)) for x in coordinates),
            deform,
        )

    @classmethod
    def zero(cls, coordinates, deform=None, domain: Domain = Domain.RATIONAL) -> "VectorField":
        return cls.from_components(coordinates, {}, deform, domain)

    @property
    def domain(self) -> Domain:
        return self.components[0].domain if self.components else Domain.RATIONAL

    def component(self, x: str) -> Polynomial:
        return self.components[self.coordinates.index(x)]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def map(self, fn) -> "VectorField":
        return VectorField(self.coordinates, tuple(fn(c) for c in self.components), self.deform)

    def to_affine(self) -> "VectorField":
        return self.map(Polynomial.to_affine)

    def to_rational(self) -> "VectorField":
        return self.map(Polynomial.to_rational)

    def truncate(self, x: str, n: int) -> "VectorField":
        return self.map(lambda c: truncate(c, x, n))

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_frame(self, other)
        return VectorField(self.coordinates, tuple(a + b for a, b in zip(self.components, other.components)), self.deform)

    def __neg__(self) -> "VectorField":
        return self.map(lambda c: -c)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, c) -> "VectorField":
        return self.map(lambda p: p.scale(c))

    def __str__(self) -> str:
        return format_field(self)


def _same_frame(X: VectorField, Y: VectorField) -> None:
    if X.coordinates != Y.coordinates:
        raise DomainMismatch(f"fields over {X.coordinates} and {Y.coordinates}")


def apply(X: VectorField, f: Polynomial, cutoff: Cutoff = None, quadratic: dict | None = None) -> Polynomial:
    """The derivative of ``f`` along ``X``: sum over x of X^x * df/dx."""
    if f.variables != X.coordinates:
        raise DomainMismatch(f"polynomial over {f.variables}, field over {X.coordinates}")
    out = Polynomial.zero(X.coordinates, f.domain)
    for x, coeff in zip(X.coordinates, X.components):
        if coeff.is_zero():
            continue
        df = partial_derivative(f, x)
        if df.is_zero():
            continue
        out = out + mul(coeff, df, cutoff, quadratic)
    return out


def _check_well_defined(X: VectorField, Y: VectorField, cutoff: Cutoff) -> None:
    t = cutoff[0]
    if X.domain is Domain.RATIONAL and Y.domain is Domain.RATIONAL:
        return
    for F, label in ((X, "first"), (Y, "second")):
        if valuation(F.component(t), t) < 1:
            raise IllDefinedBracket(
                f"{label} field has a d/d{t} component with a constant term; "
                f"its bracket is not defined mod {t}^{cutoff[1] + 1}"
            )


def lie_bracket(X: VectorField, Y: VectorField, cutoff: Cutoff = None, quadratic: dict | None = None) -> VectorField:
    """``[X, Y]``, reduced mod ``t^(n+1)`` when ``cutoff=(t, n)``.

    With ``quadratic`` given, quadratic parts of unknown products are
    accumulated per ``(component, exponents)`` instead of raising
    NonlinearTerm, signs included, so cancelling pairs vanish.
    """
    _same_frame(X, Y)
    if cutoff is not None:
        _check_well_defined(X, Y, cutoff)
    comps = []
    for x, xj, yj in zip(X.coordinates, X.components, Y.components):
        if quadratic is None:
            comps.append(apply(X, yj, cutoff) - apply(Y, xj, cutoff))
            continue
        qa: dict = {}
        qb: dict = {}
        comps.append(apply(X, yj, cutoff, qa) - apply(Y, xj, cutoff, qb))
        for sign, acc in ((1, qa), (-1, qb)):
            for exps, pairs in acc.items():
                slot = quadratic.setdefault((x, exps), {})
                for key, val in pairs.items():
                    slot[key] = slot.get(key, Fraction(0)) + sign * val
    if quadratic is not None:
        for key in [k for k, v in quadratic.items() if not any(v.values())]:
            del quadratic[key]
        for key, pairs in quadratic.items():
            for pair in [p for p, v in pairs.items() if not v]:
                del pairs[pair]
    out = VectorField(X.coordinates, tuple(comps), X.deform or Y.deform)
    if cutoff is not None:
        out = out.truncate(*cutoff)
    return out


def restrict_central(X: VectorField, t: str | None = None) -> VectorField:
    """Set ``t = 0`` and drop the ``d/dt`` part; the result lives on the other coordinates."""
    t = t or X.deform
    if t is None:
        raise ValueError("no deformation variable given")
    tc = X.component(t)
    if valuation(tc, t) < 1:
        raise NotTangent(f"d/d{t} component {tc} has a nonzero constant term")
    rest = tuple(x for x in X.coordinates if x != t)
    comps = []
    ti = X.coordinates.index(t)
    for x in rest:
        c = substitute(X.component(x), t, 0)
        comps.append(Polynomial(rest, {e[:ti] + e[ti + 1:]: v for e, v in c.terms.items()}, c.domain))
    return VectorField(rest, tuple(comps), None)


def drop_variable(X: VectorField, t: str) -> VectorField:
    """Re-express a field that does not involve ``t`` over the remaining coordinates."""
    return restrict_central(VectorField(X.coordinates, X.components, t), t)


def linear_combination(coeffs: Sequence, fields: Sequence[VectorField]) -> VectorField:
    coeffs = list(coeffs)
    fields = list(fields)
    if len(coeffs) != len(fields):
        raise ValueError(f"{len(coeffs)} coefficients for {len(fields)} fields")
    if not fields:
        raise ValueError("empty combination has no frame")
    out = VectorField.zero(fields[0].coordinates, fields[0].deform, fields[0].domain)
    for c, F in zip(coeffs, fields):
        out = out + F.scale(Fraction(c))
    return out


def format_field(X: VectorField, marker: str = "d/d") -> str:
    """Canonical text ``(-v^2*y^2 + 1/2*t*v^2) d/dy + ...``; zero components omitted."""
    parts = []
    for x, c in zip(X.coordinates, X.components):
        if c.is_zero():
            continue
        text = str(c)
        if len(c) > 1:
            parts.append(("+", f"({text}) {marker}{x}"))
        else:
            sign = "-" if text.startswith("-") else "+"
            body = text.lstrip("-")
            parts.append((sign, f"{marker}{x}" if body == "1" else f"{body} {marker}{x}"))
    if not parts:
        return "0"
    out = ""
    for k, (sign, body) in enumerate(parts):
        if k == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    return out
