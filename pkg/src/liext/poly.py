"""Sparse multivariate polynomials with exact coefficients.

A polynomial lives over an ordered tuple of variable names and maps exponent
tuples to coefficients.  Coefficients come from one of two domains:

  * ``Domain.RATIONAL``: :class:`fractions.Fraction`
  * ``Domain.AFFINE``:   :class:`liext.affine.AffineForm`

Mixing domains in arithmetic raises :class:`DomainMismatch`; use
:meth:`Polynomial.to_affine` / :meth:`Polynomial.to_rational` to convert.
Scaling by a Python int or Fraction is allowed in both domains.

Truncation convention used throughout: ``truncate(p, t, n)`` keeps the
monomials with ``deg_t <= n`` (reduction mod ``t^(n+1)``).
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Tuple, Union

from .affine import AffineForm, Unknown
from .errors import DomainMismatch, NonlinearTerm

Exponents = Tuple[int, ...]
Coefficient = Union[Fraction, AffineForm]
Cutoff = Optional[Tuple[str, int]]
# exponents -> {(u, w): coefficient}; collects dropped quadratic parts
Quadratic = dict


class Domain(Enum):
    RATIONAL = "rational"
    AFFINE = "affine"


def _zero(domain: Domain) -> Coefficient:
    return Fraction(0) if domain is Domain.RATIONAL else AffineForm()


def _check_coeff(c, domain: Domain) -> Coefficient:
    if domain is Domain.RATIONAL:
        if isinstance(c, int) and not isinstance(c, bool):
            return Fraction(c)
        if isinstance(c, Fraction):
            return c
        raise DomainMismatch(f"rational polynomial given coefficient {c!r}")
    if isinstance(c, AffineForm):
        return c
    raise DomainMismatch(f"affine polynomial given coefficient {c!r}")


class Polynomial:
    __slots__ = ("variables", "domain", "_terms", "_hash")

    def __init__(
        self,
        variables: Iterable[str],
        terms: Mapping[Exponents, Coefficient] | None = None,
        domain: Domain = Domain.RATIONAL,
    ):
        self.variables = tuple(variables)
        self.domain = domain
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for variables {self.variables}")
            c = _check_coeff(c, domain)
            if c:
                clean[exps] = c
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, variables, domain: Domain = Domain.RATIONAL) -> "Polynomial":
        return cls(variables, {}, domain)

    @classmethod
    def constant(cls, variables, value, domain: Domain = Domain.RATIONAL) -> "Polynomial":
        variables = tuple(variables)
        if domain is Domain.AFFINE and not isinstance(value, AffineForm):
            value = AffineForm(value)
        return cls(variables, {(0,) * len(variables): value}, domain)

    @classmethod
    def variable(cls, variables, name: str, domain: Domain = Domain.RATIONAL) -> "Polynomial":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise DomainMismatch(f"variable {name!r} not among {variables}")
        one = Fraction(1) if domain is Domain.RATIONAL else AffineForm(1)
        return cls(variables, {exps: one}, domain)

    @classmethod
    def monomial(cls, variables, exps: Exponents, coeff=1, domain: Domain = Domain.RATIONAL) -> "Polynomial":
        if domain is Domain.AFFINE and not isinstance(coeff, AffineForm):
            coeff = AffineForm(coeff)
        return cls(variables, {tuple(exps): coeff}, domain)

    # accessors

    @property
    def terms(self) -> Mapping[Exponents, Coefficient]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exps: Exponents) -> Coefficient:
        return self._terms.get(tuple(exps), _zero(self.domain))

    def index(self, x: str) -> int:
        try:
            return self.variables.index(x)
        except ValueError:
            raise DomainMismatch(f"variable {x!r} not among {self.variables}") from None

    def degree(self, x: str) -> int:
        """Maximal degree in ``x``; -1 for the zero polynomial."""
        i = self.index(x)
        return max((e[i] for e in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exponents, Coefficient]]:
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]), reverse=True)

    def unknowns(self) -> tuple[Unknown, ...]:
        if self.domain is Domain.RATIONAL:
            return ()
        seen = set()
        for c in self._terms.values():
            seen.update(c.unknowns())
        return tuple(sorted(seen))

    # domain conversion

    def to_affine(self) -> "Polynomial":
        if self.domain is Domain.AFFINE:
            return self
        return Polynomial(self.variables, {e: AffineForm(c) for e, c in self._terms.items()}, Domain.AFFINE)

    def to_rational(self) -> "Polynomial":
        if self.domain is Domain.RATIONAL:
            return self
        terms = {}
        for e, c in self._terms.items():
            if not c.is_constant():
                raise DomainMismatch(f"coefficient {c} still depends on unknowns")
            terms[e] = c.constant
        return Polynomial(self.variables, terms, Domain.RATIONAL)

    def is_constant_coefficients(self) -> bool:
        return self.domain is Domain.RATIONAL or all(c.is_constant() for c in self._terms.values())

    def map_coefficients(self, fn, domain: Domain | None = None) -> "Polynomial":
        return Polynomial(self.variables, {e: fn(c) for e, c in self._terms.items()}, domain or self.domain)

    def substitute_unknowns(self, assignment) -> "Polynomial":
        if self.domain is Domain.RATIONAL:
            return self
        return self.map_coefficients(lambda c: c.substitute(assignment))

    # arithmetic

    def _compatible(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise DomainMismatch(f"variable lists differ: {self.variables} vs {other.variables}")
        if self.domain is not other.domain:
            raise DomainMismatch(f"coefficient domains differ: {self.domain.value} vs {other.domain.value}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return add(self, other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, {e: -c for e, c in self._terms.items()}, self.domain)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return add(self, -other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return mul(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.variables, 1, self.domain)
        for _ in range(n):
            out = mul(out, self)
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.variables, {e: v * c for e, v in self._terms.items()}, self.domain)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.domain is other.domain
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, self.domain, frozenset(self._terms.items())))
        return self._hash

    # convenience wrappers over the module functions

    def derivative(self, x: str) -> "Polynomial":
        return partial_derivative(self, x)

    def truncate(self, x: str, n: int) -> "Polynomial":
        return truncate(self, x, n)

    def valuation(self, x: str):
        return valuation(self, x)

    def substitute(self, x: str, value) -> "Polynomial":
        return substitute(self, x, value)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.variables}, {format_polynomial(self)!r})"


def monomial_key(exps: Exponents) -> tuple:
    """Graded lexicographic key in declared variable order."""
    return (sum(exps), exps)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._compatible(q)
    out = dict(p._terms)
    zero = _zero(p.domain)
    for e, c in q._terms.items():
        out[e] = out.get(e, zero) + c
    return Polynomial(p.variables, out, p.domain)


def mul(p: Polynomial, q: Polynomial, cutoff: Cutoff = None, quadratic: Quadratic | None = None) -> Polynomial:
    """Product of ``p`` and ``q``, optionally reduced mod ``x^(n+1)``.

    With ``cutoff=(x, n)`` any term pair whose ``x``-degree exceeds ``n`` is
    dropped before its coefficients are multiplied, so such pairs never
    raise :class:`NonlinearTerm`.  A surviving pair of non-constant affine
    coefficients raises, unless ``quadratic`` is a dict: its affine part is
    then kept and the quadratic part is accumulated as
    ``quadratic[exps][(u, w)] += coef``.
    """
    p._compatible(q)
    ci = p.index(cutoff[0]) if cutoff is not None else None
    limit = cutoff[1] if cutoff is not None else None
    affine = p.domain is Domain.AFFINE
    out: dict[Exponents, Coefficient] = {}
    zero = _zero(p.domain)
    for ea, ca in p._terms.items():
        for eb, cb in q._terms.items():
            if ci is not None and ea[ci] + eb[ci] > limit:
                continue
            e = tuple(a + b for a, b in zip(ea, eb))
            if affine and not ca.is_constant() and not cb.is_constant():
                if quadratic is None:
                    raise NonlinearTerm(
                        f"product ({ca}) * ({cb}) at monomial "
                        f"{format_monomial(p.variables, e)} leaves the affine regime"
                    )
                prod, quad = ca.split_product(cb)
                slot = quadratic.setdefault(e, {})
                for key, val in quad.items():
                    slot[key] = slot.get(key, Fraction(0)) + val
            else:
                prod = ca * cb
            out[e] = out.get(e, zero) + prod
    return Polynomial(p.variables, out, p.domain)


def partial_derivative(p: Polynomial, x: str) -> Polynomial:
    i = p.index(x)
    out = {}
    for e, c in p._terms.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1:]
            out[ne] = c * k
    return Polynomial(p.variables, out, p.domain)


def truncate(p: Polynomial, x: str, n: int) -> Polynomial:
    if n < 0:
        raise ValueError("truncation order must be >= 0")
    i = p.index(x)
    return Polynomial(p.variables, {e: c for e, c in p._terms.items() if e[i] <= n}, p.domain)


def valuation(p: Polynomial, x: str):
    """Minimal degree in ``x`` over all terms; ``math.inf`` for zero."""
    i = p.index(x)
    return min((e[i] for e in p._terms), default=math.inf)


def homogeneous_part(p: Polynomial, x: str, n: int) -> Polynomial:
    """The terms of ``p`` with ``deg_x == n``."""
    i = p.index(x)
    return Polynomial(p.variables, {e: c for e, c in p._terms.items() if e[i] == n}, p.domain)


def substitute(p: Polynomial, x: str, value) -> Polynomial:
    """Replace ``x`` by ``value`` (a Polynomial, or an exact scalar)."""
    i = p.index(x)
    if not isinstance(value, Polynomial):
        value = Polynomial.constant(p.variables, value, p.domain)
    p._compatible(value)
    groups: dict[int, dict[Exponents, Coefficient]] = {}
    for e, c in p._terms.items():
        groups.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
    out = Polynomial.zero(p.variables, p.domain)
    power = Polynomial.constant(p.variables, 1, p.domain)
    for k in range(max(groups, default=-1) + 1):
        if k in groups:
            out = out + mul(Polynomial(p.variables, groups[k], p.domain), power)
        power = mul(power, value)
    return out


def format_monomial(variables: tuple[str, ...], exps: Exponents) -> str:
    """Factors printed in alphabetical variable order, e.g. ``t^2*v``."""
    factors = []
    for name, e in sorted(zip(variables, exps)):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def _format_term(variables, exps, coeff) -> tuple[str, str]:
    """Return (sign, magnitude) for one term."""
    mono = format_monomial(variables, exps)
    if isinstance(coeff, AffineForm):
        if coeff.is_constant():
            coeff = coeff.constant
        else:
            body = f"({coeff})"
            return "+", body if mono == "1" else f"{body}*{mono}"
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    if mono == "1":
        return sign, str(mag)
    if mag == 1:
        return sign, mono
    return sign, f"{mag}*{mono}"


def format_polynomial(p: Polynomial) -> str:
    """Canonical text, e.g. ``-1/2*t^2*v + 1/2*t^2``."""
    if not p._terms:
        return "0"
    out = ""
    for k, (exps, c) in enumerate(p.sorted_terms()):
        sign, mag = _format_term(p.variables, exps, c)
        if k == 0:
            out = ("-" if sign == "-" else "") + mag
        else:
            out += f" {sign} {mag}"
    return out
