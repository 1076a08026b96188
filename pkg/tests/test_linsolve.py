import random
from fractions import Fraction

import pytest
import sympy

from helpers import COORDS, f2_result, random_system
from oracles import eliminate
from liext.affine import AffineForm, Unknown
from liext.dsl import parse_field, parse_polynomial
from liext.errors import SolverMisuse
from liext.linsolve import (
    Constraint,
    FreePolicy,
    Inconsistent,
    LinearSystem,
    Provenance,
    Solved,
    check_solution,
    collect,
    pinned_value,
    solution_to_dict,
    solve,
    substitute_solution,
    verify_certificate,
)
from liext.poly import Domain, Polynomial

x, y = Unknown(1, 0, "x"), Unknown(1, 1, "y")
X, Y = AffineForm.unknown(x), AffineForm.unknown(y)


def system(*forms):
    return LinearSystem(tuple(Constraint(f, Provenance(f"c{k + 1}")) for k, f in enumerate(forms)))


def affine_poly(terms):
    return Polynomial(COORDS, terms, Domain.AFFINE)


# ---------------------------------------------------------
# collect
# ---------------------------------------------------------
def test_collect_examples():
    assert len(collect(Polynomial.zero(COORDS))) == 0
    k1 = AffineForm.unknown(Unknown(1, 0, "k_1"))
    sys_ = collect(affine_poly({(1, 0, 1): k1}))
    assert sys_.forms() == [k1]
    l1 = AffineForm.unknown(Unknown(2, 0, "l_1"))
    p = affine_poly({(1, 0, 2): AffineForm(Fraction(-1, 2)), (0, 0, 2): l1 * Fraction(1, 2)})
    forms = collect(p, "[E1,E2]").forms()
    assert forms == [AffineForm(Fraction(-1, 2)), l1 * Fraction(1, 2)]


def test_collect_provenance():
    p = parse_polynomial("3*t*v - 2", COORDS)
    cons = collect(p, Provenance("[E1,E2]", (0, 1), "v")).constraints
    assert [c.provenance.monomial_text for c in cons] == ["t*v", "1"]
    assert cons[0].provenance.describe() == "[E1,E2] d/dv [t*v]"


# ---------------------------------------------------------
# solve
# ---------------------------------------------------------
def test_solve_unique():
    s = solve(system(X - Y * 2, Y - 3))
    assert isinstance(s, Solved) and s.status == "solved"
    assert pinned_value(s, x) == 6 and pinned_value(s, y) == 3
    assert s.free == ()


def test_solve_inconsistent_certificate():
    sys_ = system(X + 1, X - 1)
    s = solve(sys_)
    assert isinstance(s, Inconsistent) and s.status == "inconsistent"
    assert s.certificate == ((0, Fraction(1, 2)), (1, Fraction(-1, 2)))
    assert s.residual_constant == 1
    assert verify_certificate(sys_, s)


def test_constant_constraint_reported_verbatim():
    sys_ = system(X + Y, AffineForm(Fraction(-1, 2)), X - Y)
    s = solve(sys_)
    assert s.certificate == ((1, Fraction(1)),)
    assert solution_to_dict(s) == {"status": "inconsistent", "certificate": [[1, "1"]], "residual": "-1/2"}


def test_free_unknowns_and_pinned_absent():
    s = solve(system(X - Y))
    assert s.free == (y,)
    assert pinned_value(s, x) is None
    assert pinned_value(s, y) is None
    assert s.value(x) == Y
    s2 = solve(LinearSystem(()), [x])
    assert s2.free == (x,) and pinned_value(s2, x) is None


def test_pinned_value_misuse():
    with pytest.raises(SolverMisuse):
        pinned_value(solve(system(AffineForm(1))), x)
    with pytest.raises(SolverMisuse):
        substitute_solution(Polynomial.zero(COORDS), solve(system(AffineForm(1))))


def test_solution_json():
    s = solve(system(X * 2 - 1))
    assert solution_to_dict(s) == {"status": "solved", "assignments": {"x": "1/2"}, "free": []}


# ---------------------------------------------------------
# substitute_solution
# ---------------------------------------------------------
def test_substitute_empty_solution_is_identity():
    p = parse_polynomial("v^2 - t", COORDS)
    assert substitute_solution(p, Solved({}, ())) == p


def test_substitute_policies():
    p = affine_poly({(1, 0, 1): X, (0, 0, 1): Y, (0, 0, 0): AffineForm(1)})
    s = solve(system(X - Y - 2))
    kept = substitute_solution(p, s, FreePolicy.KEEP_SYMBOLIC)
    assert kept.coefficient((1, 0, 1)) == Y + 2
    zero = substitute_solution(p, s, FreePolicy.ZERO_FILL)
    assert zero.domain is Domain.RATIONAL
    assert zero == parse_polynomial("2*t*v + 1", COORDS)


def test_f2_first_order_specialization():
    st = f2_result(1).stages[0]
    pins = st.pinned()
    assert pins["A_1"] == Fraction(1, 2) and pins["A_2"] == 0
    assert pins["e_1"] == 0 and pins["e_2"] == 0
    assert pinned_value(st.solution, st.unknown("A_1")) == Fraction(1, 2)
    assert pinned_value(st.solution, st.unknown("k_1")) == 0
    E1, E2 = st.fields[0], st.fields[1]
    assert E1.component("v") == parse_polynomial("1/2*t*v^2", COORDS)
    assert E2.component("v") == parse_polynomial("1/2*t", COORDS)


# ---------------------------------------------------------
# Properties on random systems
# ---------------------------------------------------------
def test_random_systems_against_oracles():
    rng = random.Random(20261016)
    for _ in range(300):
        us, forms = random_system(rng)
        sys_ = system(*forms)
        s = solve(sys_, us)
        ref = eliminate(forms, us, rng)
        if ref is None:
            assert isinstance(s, Inconsistent)
            assert verify_certificate(sys_, s)
            continue
        rank, free_cols, sample = ref
        assert isinstance(s, Solved)
        assert len(s.assignments) == rank
        assert len(s.assignments) + len(s.free) == len(us)
        # back-substitution with random free values
        vals = {u: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for u in s.free}
        assert check_solution(sys_, s, vals)
        # every oracle point is reproduced by the parametric solution
        point = sample({u: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for u in free_cols})
        for u, a in s.assignments.items():
            assert a.evaluate(point) == point[u]


def test_rref_matches_sympy():
    rng = random.Random(99)
    for _ in range(100):
        us, forms = random_system(rng, 5, 6)
        s = solve(system(*forms), us)
        M = sympy.Matrix(
            [[sympy.Rational(str(f.coefficient(u))) for u in us] + [sympy.Rational(str(-f.constant))] for f in forms]
        )
        R, piv = M.rref()
        if len(us) in piv:
            assert isinstance(s, Inconsistent)
            continue
        assert [us[c] for c in piv] == list(s.assignments)
        for i, c in enumerate(piv):
            expected = AffineForm(
                Fraction(str(R[i, len(us)])),
                {us[j]: -Fraction(str(R[i, j])) for j in range(len(us)) if j != c and R[i, j] != 0},
            )
            assert s.assignments[us[c]] == expected


def test_determinism():
    rng = random.Random(3)
    for _ in range(50):
        us, forms = random_system(rng)
        a, b = solve(system(*forms), us), solve(system(*forms), us)
        assert a == b
