"""Shared strategies, random generators and fixture loaders for the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from hypothesis import strategies as st

from liext.affine import AffineForm, Unknown
from liext.dsl import parse, to_problem
from liext.extend import extend
from liext.poly import Polynomial
from liext.vfield import VectorField

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
F2_FULL = FIXTURES / "f2_full.liext"
F2_TORUS = FIXTURES / "f2_torus.liext"

COORDS = ("v", "y", "t")


# ---------------------------------------------------------
# Hypothesis strategies
# ---------------------------------------------------------
fractions = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)
nonzero_fractions = fractions.filter(bool)


@st.composite
def exponents(draw, nvars=3, max_total=3):
    exps = []
    left = max_total
    for _ in range(nvars):
        e = draw(st.integers(min_value=0, max_value=left))
        exps.append(e)
        left -= e
    return tuple(exps)


@st.composite
def polynomials(draw, variables=COORDS, max_terms=4, max_total=3):
    terms = draw(
        st.dictionaries(exponents(len(variables), max_total), nonzero_fractions, max_size=max_terms)
    )
    return Polynomial(variables, terms)


@st.composite
def fields(draw, variables=COORDS, max_terms=3, max_total=3, deform=None):
    comps = tuple(draw(polynomials(variables, max_terms, max_total)) for _ in variables)
    return VectorField(tuple(variables), comps, deform)


@st.composite
def tangent_fields(draw, variables=COORDS, t="t", max_terms=3, max_total=3):
    """Fields whose t-component has valuation >= 1."""
    X = draw(fields(variables, max_terms, max_total, deform=t))
    ti = variables.index(t)
    shifted = X.components[ti] * Polynomial.variable(variables, t)
    comps = list(X.components)
    comps[ti] = shifted
    return VectorField(tuple(variables), tuple(comps), t)


# ---------------------------------------------------------
# Seeded generators (acceptance loops)
# ---------------------------------------------------------
def random_fraction(rng: random.Random, lo=-5, hi=5, den=3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_poly(rng: random.Random, variables=COORDS, max_terms=4, max_total=3, t=None, min_t=0) -> Polynomial:
    terms = {}
    ti = variables.index(t) if t is not None else None
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * len(variables)
        left = max_total
        for k in rng.sample(range(len(variables)), len(variables)):
            e = rng.randint(0, left)
            exps[k] = e
            left -= e
        if ti is not None and exps[ti] < min_t:
            exps[ti] = min_t
        c = random_fraction(rng)
        if c:
            terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + c
    return Polynomial(variables, terms)


def random_field(rng: random.Random, variables=COORDS, max_terms=3, max_total=3, t=None) -> VectorField:
    comps = []
    for x in variables:
        min_t = 1 if t is not None and x == t else 0
        comps.append(random_poly(rng, variables, max_terms, max_total, t, min_t))
    return VectorField(tuple(variables), tuple(comps), t)


def random_system(rng: random.Random, max_unknowns=8, max_constraints=10):
    """Random small affine system; returns (unknowns, forms)."""
    n = rng.randint(1, max_unknowns)
    us = [Unknown(1, k, f"x{k}") for k in range(n)]
    m = rng.randint(1, max_constraints)
    forms = []
    for _ in range(m):
        lin = {}
        for u in us:
            if rng.random() < 0.45:
                lin[u] = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))
        const = Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
        forms.append(AffineForm(const, lin))
    # sometimes append a combination of earlier rows to create dependencies
    if forms and rng.random() < 0.5:
        a, b = rng.choice(forms), rng.choice(forms)
        forms.append(a * Fraction(rng.randint(-2, 2)) + b)
    return us, forms


# ---------------------------------------------------------
# F2 fixture
# ---------------------------------------------------------
@lru_cache(maxsize=None)
def f2_document():
    return parse(F2_FULL.read_text())


@lru_cache(maxsize=None)
def f2_problem(max_order: int = 2):
    return to_problem(f2_document(), max_order)


@lru_cache(maxsize=None)
def f2_result(max_order: int = 2):
    return extend(f2_problem(max_order))


@lru_cache(maxsize=None)
def torus_document():
    return parse(F2_TORUS.read_text())


def base_fields():
    doc = f2_document()
    return {f.name: f.field for f in doc.fields}
