"""Affine-linear forms in named unknowns with exact rational coefficients.

An :class:`AffineForm` is ``constant + sum(coef * unknown)``.  It is the
coefficient domain of parametric polynomials: the bracket of two ansatz
fields is linear in the unknowns as long as no two non-constant forms are
ever multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NonlinearTerm

Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Unknown:
    """A named unknown; ordered globally by (order, seq)."""

    order: int
    seq: int
    name: str

    def __str__(self) -> str:
        return self.name


def _frac(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class AffineForm:
    __slots__ = ("_constant", "_linear", "_hash")

    def __init__(self, constant: Scalar = 0, linear: Mapping[Unknown, Scalar] | None = None):
        self._constant = _frac(constant)
        lin = {}
        if linear:
            for u, c in linear.items():
                c = _frac(c)
                if c:
                    lin[u] = c
        self._linear = dict(sorted(lin.items()))
        self._hash = None

    @classmethod
    def unknown(cls, u: Unknown) -> "AffineForm":
        return cls(0, {u: 1})

    @property
    def constant(self) -> Fraction:
        return self._constant

    @property
    def linear(self) -> Mapping[Unknown, Fraction]:
        return dict(self._linear)

    def unknowns(self) -> tuple[Unknown, ...]:
        return tuple(self._linear)

    def coefficient(self, u: Unknown) -> Fraction:
        return self._linear.get(u, Fraction(0))

    def is_constant(self) -> bool:
        return not self._linear

    def __bool__(self) -> bool:
        return bool(self._constant) or bool(self._linear)

    def __eq__(self, other) -> bool:
        if isinstance(other, AffineForm):
            return self._constant == other._constant and self._linear == other._linear
        if isinstance(other, (int, Fraction)):
            return not self._linear and self._constant == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._constant, tuple(self._linear.items())))
        return self._hash

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self._constant, {u: -c for u, c in self._linear.items()})

    def __add__(self, other) -> "AffineForm":
        if isinstance(other, (int, Fraction)):
            return AffineForm(self._constant + other, self._linear)
        if not isinstance(other, AffineForm):
            return NotImplemented
        lin = dict(self._linear)
        for u, c in other._linear.items():
            lin[u] = lin.get(u, 0) + c
        return AffineForm(self._constant + other._constant, lin)

    __radd__ = __add__

    def __sub__(self, other) -> "AffineForm":
        if isinstance(other, (int, Fraction, AffineForm)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> "AffineForm":
        return (-self) + other

    def __mul__(self, other) -> "AffineForm":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return AffineForm(self._constant * other, {u: c * other for u, c in self._linear.items()})
        if not isinstance(other, AffineForm):
            return NotImplemented
        if self._linear and other._linear:
            raise NonlinearTerm(f"product of non-constant forms ({self}) * ({other})")
        if self._linear:
            return self * other._constant
        return other * self._constant

    __rmul__ = __mul__

    def split_product(self, other: "AffineForm") -> tuple["AffineForm", dict[tuple[Unknown, Unknown], Fraction]]:
        """Return the affine part and the quadratic part of ``self * other``.

        Quadratic keys are sorted unknown pairs.
        """
        affine = AffineForm(self._constant * other._constant)
        affine = affine + AffineForm(0, {u: c * other._constant for u, c in self._linear.items()})
        affine = affine + AffineForm(0, {u: c * self._constant for u, c in other._linear.items()})
        quad: dict[tuple[Unknown, Unknown], Fraction] = {}
        for u, a in self._linear.items():
            for w, b in other._linear.items():
                key = (u, w) if u <= w else (w, u)
                quad[key] = quad.get(key, Fraction(0)) + a * b
        return affine, {k: c for k, c in quad.items() if c}

    def substitute(self, assignment: Mapping[Unknown, "AffineForm | Scalar"]) -> "AffineForm":
        out = AffineForm(self._constant)
        for u, c in self._linear.items():
            if u in assignment:
                val = assignment[u]
                out = out + (val * c if isinstance(val, AffineForm) else AffineForm(_frac(val) * c))
            else:
                out = out + AffineForm(0, {u: c})
        return out

    def evaluate(self, values: Mapping[Unknown, Scalar]) -> Fraction:
        total = self._constant
        for u, c in self._linear.items():
            total += c * _frac(values[u])
        return total

    def __str__(self) -> str:
        parts: list[str] = []
        for u, c in self._linear.items():
            if c == 1:
                mag = u.name
            elif c == -1:
                mag = u.name
            else:
                mag = f"{abs(c)}*{u.name}"
            parts.append(("-" if c < 0 else "+", mag))
        if self._constant or not parts:
            parts.append(("-" if self._constant < 0 else "+", str(abs(self._constant))))
        out = ""
        for i, (sign, mag) in enumerate(parts):
            if i == 0:
                out = ("-" if sign == "-" else "") + mag
            else:
                out += f" {sign} {mag}"
        return out

    def __repr__(self) -> str:
        return f"AffineForm({self})"


def combine(pairs: Iterable[tuple[Scalar, AffineForm]]) -> AffineForm:
    """Rational linear combination of forms."""
    out = AffineForm()
    for c, f in pairs:
        out = out + f * c
    return out
