import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import COORDS, base_fields, fields, fractions, random_field, tangent_fields
from liext.affine import AffineForm, Unknown
from liext.dsl import parse_field, parse_polynomial
from liext.errors import IllDefinedBracket, NotTangent
from liext.poly import Domain, Polynomial
from liext.vfield import VectorField, apply, format_field, lie_bracket, linear_combination, restrict_central

F = lambda text: parse_field(text, COORDS, "t")
P = lambda text: parse_polynomial(text, COORDS)
E = base_fields()


# ---------------------------------------------------------
# Examples
# ---------------------------------------------------------
def test_apply_examples():
    assert apply(F("v d/v"), P("-v^2*y^2")) == P("-2*v^2*y^2")
    assert apply(F("d/v"), P("7")).is_zero()
    assert apply(F("2*y d/y - v d/v"), P("y")) == P("2*y")


def test_bracket_examples():
    assert lie_bracket(E["E1"], E["E3"]) == F("2*v*y^2 d/y")
    assert lie_bracket(E["E1"], E["E3"]) == E["E4"].scale(-2)
    assert lie_bracket(E["E5"], E["E6"]).is_zero()
    assert lie_bracket(E["E3"], E["E7"]) == F("2*y d/y - 2*v d/v")
    assert lie_bracket(E["E3"], E["E7"]) == E["E5"] - E["E6"]


def test_third_sixth_relation_is_plain_e3():
    assert lie_bracket(E["E3"], E["E6"]) == E["E3"]


@settings(max_examples=100, deadline=None)
@given(fields())
def test_self_bracket_zero(X):
    assert lie_bracket(X, X).is_zero()


def test_restrict_central_examples():
    E1_1 = F("1/2*t*v^2 d/v + (-v^2*y^2 + t*v*y) d/y")
    central = restrict_central(E1_1)
    assert central.coordinates == ("v", "y")
    assert central == parse_field("-v^2*y^2 d/y", ("v", "y"))
    L5 = F("2*y d/y - v d/v + t d/t")
    assert restrict_central(L5) == parse_field("2*y d/y - v d/v", ("v", "y"))
    with pytest.raises(NotTangent):
        restrict_central(F("v d/v + d/t"))


def test_linear_combination_examples():
    assert linear_combination([1, -1], [E["E5"], E["E6"]]) == F("2*y d/y - 2*v d/v")
    assert linear_combination([0], [E["E7"]]).is_zero()
    assert linear_combination([-2], [E["E4"]]) == F("2*v*y^2 d/y")
    with pytest.raises(ValueError):
        linear_combination([1, 2], [E["E4"]])


def test_ill_defined_truncated_bracket():
    k = AffineForm.unknown(Unknown(1, 0, "k"))
    X = VectorField.from_components(COORDS, {"t": Polynomial(COORDS, {(0, 0, 0): k}, Domain.AFFINE)}, "t", Domain.AFFINE)
    Y = E["E3"].to_affine()
    with pytest.raises(IllDefinedBracket):
        lie_bracket(X, Y, cutoff=("t", 1))
    lie_bracket(X, Y)  # no cutoff: exact bracket is fine


def test_format_field():
    assert format_field(F("(-v^2*y^2 + 1/2*t*v^2) d/y + d/v")) == "d/dv + (-v^2*y^2 + 1/2*t*v^2) d/dy"
    assert format_field(F("0")) == "0"
    assert format_field(F("-d/v"), marker="d/") == "-d/v"


def test_full_relation_table():
    table = {
        ("E1", "E2"): [], ("E1", "E3"): [(-2, "E4")], ("E1", "E4"): [], ("E1", "E5"): [],
        ("E1", "E6"): [(-2, "E1")], ("E1", "E7"): [], ("E2", "E3"): [], ("E2", "E4"): [],
        ("E2", "E5"): [(-2, "E2")], ("E2", "E6"): [], ("E2", "E7"): [(-2, "E4")],
        ("E3", "E4"): [(1, "E2")], ("E3", "E5"): [(-1, "E3")], ("E3", "E6"): [(1, "E3")],
        ("E3", "E7"): [(1, "E5"), (-1, "E6")], ("E4", "E5"): [(-1, "E4")], ("E4", "E6"): [(-1, "E4")],
        ("E4", "E7"): [(-1, "E1")], ("E5", "E6"): [], ("E5", "E7"): [(-1, "E7")], ("E6", "E7"): [(1, "E7")],
    }
    assert len(table) == 21
    for (a, b), rhs in table.items():
        expected = linear_combination([c for c, _ in rhs], [E[k] for _, k in rhs]) if rhs else VectorField.zero(COORDS, "t")
        assert lie_bracket(E[a], E[b]) == expected, (a, b)


# ---------------------------------------------------------
# Properties
# ---------------------------------------------------------
@settings(max_examples=200, deadline=None)
@given(fields(), fields())
def test_antisymmetry(X, Y):
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)


@settings(max_examples=200, deadline=None)
@given(fields(max_terms=2), fields(max_terms=2), fields(max_terms=2))
def test_jacobi(X, Y, Z):
    total = lie_bracket(lie_bracket(X, Y), Z) + lie_bracket(lie_bracket(Y, Z), X) + lie_bracket(lie_bracket(Z, X), Y)
    assert total.is_zero()


@settings(max_examples=150, deadline=None)
@given(fields(), fields(), fields(), fractions, fractions)
def test_bilinearity(X, Y, Z, a, b):
    assert lie_bracket(X.scale(a) + Y.scale(b), Z) == lie_bracket(X, Z).scale(a) + lie_bracket(Y, Z).scale(b)
    assert lie_bracket(Z, X.scale(a) + Y.scale(b)) == lie_bracket(Z, X).scale(a) + lie_bracket(Z, Y).scale(b)


@settings(max_examples=200, deadline=None)
@given(tangent_fields(), tangent_fields())
def test_truncation_coherence(X, Y):
    for n in range(4):
        lhs = lie_bracket(X.truncate("t", n), Y.truncate("t", n), cutoff=("t", n))
        assert lhs == lie_bracket(X, Y).truncate("t", n)


def test_truncation_coherence_seeded():
    rng = random.Random(7)
    for _ in range(50):
        X, Y = random_field(rng, t="t"), random_field(rng, t="t")
        n = rng.randint(0, 3)
        assert lie_bracket(X.truncate("t", n), Y.truncate("t", n), cutoff=("t", n)) == lie_bracket(X, Y).truncate("t", n)
