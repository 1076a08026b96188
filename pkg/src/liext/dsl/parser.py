"""Recursive-descent parser for the ``.liext`` problem language.

Grammar (every statement ends in ``;``, ``#`` starts a comment)::

    document   := stmt*
    stmt       := 'vars' IDENT+
                | 'deform' IDENT
                | 'field' IDENT '=' fieldexpr
                | 'relation' '[' IDENT ',' IDENT ']' '=' combination
                | 'ansatz' IDENT DVAR [':' bound (',' bound)*]
                | 'name' IDENT '=' coefref
                | 'constraint' linexpr '=' linexpr
                | 'option' IDENT '=' value (',' value)*
    fieldexpr  := '0' | [sign] [term] DVAR (sign [term] DVAR)*
    combination:= '0' | [sign] [NUM '*'] IDENT (sign [NUM '*'] IDENT)*
    bound      := 'deg' IDENT '<=' NUM
    linexpr    := [sign] lterm (sign lterm)*
    lterm      := NUM ['*' ref] | ref
    ref        := coefref | IDENT
    coefref    := 'coef' '(' IDENT ',' DVAR ',' monomial ')'
    expr       := [sign] term (sign term)*
    term       := factor ('*' factor)*
    factor     := (NUM | IDENT | '(' expr ')') ['^' NUM]

``NUM`` is an integer or a rational literal ``p/q``; ``DVAR`` is ``d/x``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError, SemanticError
from ..linsolve import FreePolicy
from ..poly import Domain, Polynomial
from ..vfield import VectorField
from .document import (
    AnsatzDef,
    CoefRefExpr,
    ConstraintDef,
    FieldDef,
    NameDef,
    ProblemDocument,
    RelationDef,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<dvar>d/[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<le><=)
  | (?P<punct>[;=\[\],()+\-*^:])
    """,
    re.VERBOSE,
)

STATEMENTS = ("vars", "deform", "field", "relation", "ansatz", "name", "constraint", "option")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def span(self) -> tuple[int, int, int]:
        return (self.line, self.col, self.col + max(len(self.text), 1))


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tok_kind = "punct" if kind == "le" else kind
            tokens.append(Token(tok_kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _rational(tok: Token) -> Fraction:
    num, _, den = tok.text.partition("/")
    if den and int(den) == 0:
        raise SemanticError(tok.span, "zero denominator")
    return Fraction(int(num), int(den) if den else 1)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.variables: tuple[str, ...] | None = None
        self.deform: str | None = None
        self.fields: dict[str, FieldDef] = {}
        self.relations: list[RelationDef] = []
        self.relation_pairs: set[frozenset] = set()
        self.ansatz: dict[tuple[str, str], AnsatzDef] = {}
        self.names: dict[str, NameDef] = {}
        self.constraints: list[ConstraintDef] = []
        self.options: dict[str, object] = {}

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what}")
        return self.advance()

    def fail(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(t.line, t.col, f"{message}, found {found}")

    # document

    def document(self) -> ProblemDocument:
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "ident" or t.text not in STATEMENTS:
                self.fail("expected a statement keyword")
            getattr(self, "stmt_" + t.text)(self.advance())
            self.expect(";")
        opts = self.options
        fields = tuple(
            FieldDef(f.name, VectorField(f.field.coordinates, f.field.components, self.deform))
            for f in self.fields.values()
        )
        return ProblemDocument(
            variables=self.variables or (),
            deform=self.deform,
            fields=fields,
            relations=tuple(self.relations),
            ansatz=tuple(self.ansatz.values()),
            names=tuple(self.names.values()),
            constraints=tuple(self.constraints),
            max_order=opts.get("max_order"),
            free_policy=opts.get("free_policy"),
            extend_fields=opts.get("extend_fields"),
        )

    def need_vars(self, kw: Token) -> tuple[str, ...]:
        if self.variables is None:
            raise SemanticError(kw.span, f"'{kw.text}' before any 'vars' declaration")
        return self.variables

    def need_deform(self, kw: Token) -> str:
        if self.deform is None:
            raise SemanticError(kw.span, f"'{kw.text}' needs a 'deform' declaration first")
        return self.deform

    def variable(self, tok: Token) -> str:
        if self.variables is None or tok.text not in self.variables:
            raise SemanticError(tok.span, f"undeclared variable {tok.text!r}")
        return tok.text

    def dvar(self) -> str:
        tok = self.expect_kind("dvar", "a derivation marker d/<var>")
        name = tok.text[2:]
        if self.variables is None or name not in self.variables:
            raise SemanticError(tok.span, f"undeclared variable {name!r}")
        return name

    def field_name(self, tok: Token) -> str:
        if tok.text not in self.fields:
            raise SemanticError(tok.span, f"undefined field {tok.text!r}")
        return tok.text

    def integer(self, what: str) -> int:
        tok = self.expect_kind("num", what)
        if "/" in tok.text:
            raise SemanticError(tok.span, f"{what} must be an integer")
        return int(tok.text)

    # statements

    def stmt_vars(self, kw: Token) -> None:
        if self.variables is not None:
            raise SemanticError(kw.span, "duplicate 'vars' declaration")
        names = []
        while self.tok.kind == "ident":
            t = self.advance()
            if t.text in STATEMENTS or t.text in ("coef", "deg"):
                raise SemanticError(t.span, f"{t.text!r} is a keyword, not a variable (missing ';'?)")
            if t.text in names:
                raise SemanticError(t.span, f"duplicate variable {t.text!r}")
            names.append(t.text)
        if not names:
            self.fail("expected a variable name")
        self.variables = tuple(names)

    def stmt_deform(self, kw: Token) -> None:
        self.need_vars(kw)
        t = self.expect_kind("ident", "a variable name")
        if self.deform is not None:
            raise SemanticError(kw.span, "duplicate 'deform' declaration")
        self.deform = self.variable(t)

    def stmt_field(self, kw: Token) -> None:
        coords = self.need_vars(kw)
        name = self.expect_kind("ident", "a field name")
        if name.text in self.fields:
            raise SemanticError(name.span, f"duplicate field {name.text!r}")
        self.expect("=")
        comps = self.field_expr(coords)
        vf = VectorField.from_components(coords, comps, self.deform)
        self.fields[name.text] = FieldDef(name.text, vf)

    def field_expr(self, coords) -> dict[str, Polynomial]:
        comps: dict[str, Polynomial] = {}
        first = True
        while True:
            sign = 1
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            elif not first:
                break
            if self.tok.kind == "dvar":
                term = Polynomial.constant(coords, sign)
            else:
                term = self.term(coords) * sign
            if first and (self.at(";") or self.tok.kind == "eof") and term.is_zero():
                return {}
            x = self.dvar()
            comps[x] = comps.get(x, Polynomial.zero(coords)) + term
            first = False
        return comps

    def stmt_relation(self, kw: Token) -> None:
        self.expect("[")
        a = self.expect_kind("ident", "a field name")
        self.expect(",")
        b = self.expect_kind("ident", "a field name")
        self.expect("]")
        left, right = self.field_name(a), self.field_name(b)
        if left == right:
            raise SemanticError(b.span, f"[{left},{left}] is zero by antisymmetry")
        pair = frozenset((left, right))
        if pair in self.relation_pairs:
            raise SemanticError(a.span, f"duplicate relation for [{left},{right}]")
        self.expect("=")
        rhs = self.combination()
        self.relation_pairs.add(pair)
        self.relations.append(RelationDef(left, right, rhs))

    def combination(self) -> tuple[tuple[Fraction, str], ...]:
        if self.tok.kind == "num" and self.tok.text == "0" and self.tokens[self.pos + 1].text == ";":
            self.advance()
            return ()
        acc: dict[str, Fraction] = {}
        first = True
        while True:
            sign = 1
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            elif not first:
                break
            coef = Fraction(1)
            if self.tok.kind == "num":
                coef = _rational(self.advance())
                self.expect("*")
            name = self.field_name(self.expect_kind("ident", "a field name"))
            acc[name] = acc.get(name, Fraction(0)) + sign * coef
            first = False
        return tuple((c, n) for n, c in acc.items() if c)

    def stmt_ansatz(self, kw: Token) -> None:
        self.need_deform(kw)
        f = self.expect_kind("ident", "a field name")
        fname = self.field_name(f)
        comp = self.dvar()
        if (fname, comp) in self.ansatz:
            raise SemanticError(f.span, f"duplicate ansatz for {fname} d/{comp}")
        bounds: dict[str, int] = {}
        if self.at(":"):
            self.advance()
            while True:
                self.expect("deg")
                vt = self.expect_kind("ident", "a variable name")
                var = self.variable(vt)
                if var == self.deform:
                    raise SemanticError(vt.span, "the deformation variable's degree is fixed by the order")
                if var in bounds:
                    raise SemanticError(vt.span, f"duplicate bound for {var!r}")
                self.expect("<=")
                bounds[var] = self.integer("a degree bound")
                if not self.at(","):
                    break
                self.advance()
        ordered = tuple((x, bounds[x]) for x in self.variables if x in bounds)
        self.ansatz[(fname, comp)] = AnsatzDef(fname, comp, ordered)

    def coefref(self, kw: Token) -> CoefRefExpr:
        self.expect("coef")
        self.expect("(")
        f = self.expect_kind("ident", "a field name")
        fname = self.field_name(f)
        self.expect(",")
        comp = self.dvar()
        self.expect(",")
        exps = self.monomial()
        self.expect(")")
        return CoefRefExpr(fname, comp, exps)

    def monomial(self) -> tuple[int, ...]:
        coords = self.variables
        exps = [0] * len(coords)
        if self.tok.kind == "num":
            t = self.advance()
            if t.text != "1":
                raise SemanticError(t.span, "a monomial has coefficient 1")
            return tuple(exps)
        while True:
            vt = self.expect_kind("ident", "a variable name")
            k = coords.index(self.variable(vt))
            power = 1
            if self.at("^"):
                self.advance()
                power = self.integer("an exponent")
            exps[k] += power
            if not self.at("*"):
                break
            self.advance()
        return tuple(exps)

    def stmt_name(self, kw: Token) -> None:
        deform = self.need_deform(kw)
        nt = self.expect_kind("ident", "a name")
        if nt.text in self.names:
            raise SemanticError(nt.span, f"duplicate name {nt.text!r}")
        self.expect("=")
        start = self.tok
        ref = self.coefref(kw)
        ti = self.variables.index(deform)
        block = self.ansatz.get((ref.field, ref.component))
        ok = block is not None and ref.exps[ti] >= 1
        if ok:
            bounds = dict(block.bounds)
            ok = all(e <= bounds.get(x, 0) for x, e in zip(self.variables, ref.exps) if x != deform)
        if not ok:
            raise SemanticError(start.span, "a name must refer to a coefficient of a declared ansatz block")
        self.names[nt.text] = NameDef(nt.text, ref)

    def stmt_constraint(self, kw: Token) -> None:
        self.need_deform(kw)
        lhs_terms, lhs_const = self.linexpr(kw)
        self.expect("=")
        rhs_terms, rhs_const = self.linexpr(kw)
        acc: dict = {}
        for c, r in lhs_terms:
            acc[r] = acc.get(r, Fraction(0)) + c
        for c, r in rhs_terms:
            acc[r] = acc.get(r, Fraction(0)) - c
        terms = tuple((c, r) for r, c in acc.items() if c)
        self.constraints.append(ConstraintDef(terms, rhs_const - lhs_const))

    def linexpr(self, kw: Token):
        terms = []
        const = Fraction(0)
        first = True
        while True:
            sign = 1
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            elif not first:
                break
            first = False
            coef = Fraction(1)
            if self.tok.kind == "num":
                coef = _rational(self.advance())
                if not self.at("*"):
                    const += sign * coef
                    continue
                self.advance()
            terms.append((sign * coef, self.ref(kw)))
        return terms, const

    def ref(self, kw: Token):
        if self.at("coef"):
            return self.coefref(kw)
        t = self.expect_kind("ident", "coef(...) or a declared name")
        if t.text not in self.names:
            raise SemanticError(t.span, f"undeclared name {t.text!r}")
        return t.text

    def stmt_option(self, kw: Token) -> None:
        key = self.expect_kind("ident", "an option name")
        self.expect("=")
        if key.text in self.options:
            raise SemanticError(key.span, f"duplicate option {key.text!r}")
        if key.text == "max_order":
            self.options["max_order"] = self.integer("max_order")
        elif key.text == "free_policy":
            vt = self.expect_kind("ident", "zero_fill or keep_symbolic")
            try:
                self.options["free_policy"] = FreePolicy(vt.text)
            except ValueError:
                raise SemanticError(vt.span, f"unknown free_policy {vt.text!r}") from None
        elif key.text == "extend_fields":
            names = [self.field_name(self.expect_kind("ident", "a field name"))]
            while self.at(","):
                self.advance()
                names.append(self.field_name(self.expect_kind("ident", "a field name")))
            if len(set(names)) != len(names):
                raise SemanticError(key.span, "extend_fields lists a field twice")
            self.options["extend_fields"] = tuple(names)
        else:
            raise SemanticError(key.span, f"unknown option {key.text!r}")

    # polynomial expressions

    def expr(self, coords) -> Polynomial:
        out = Polynomial.zero(coords)
        first = True
        while True:
            sign = 1
            if self.at("+") or self.at("-"):
                sign = -1 if self.advance().text == "-" else 1
            elif not first:
                return out
            out = out + self.term(coords) * sign
            first = False

    def term(self, coords) -> Polynomial:
        out = self.factor(coords)
        while self.at("*"):
            self.advance()
            out = out * self.factor(coords)
        return out

    def factor(self, coords) -> Polynomial:
        t = self.tok
        if t.kind == "num":
            self.advance()
            base = Polynomial.constant(coords, _rational(t))
        elif t.kind == "ident":
            self.advance()
            base = Polynomial.variable(coords, self.variable(t))
        elif self.at("("):
            self.advance()
            base = self.expr(coords)
            self.expect(")")
        else:
            self.fail("expected a number, variable or '('")
        if self.at("^"):
            self.advance()
            base = base ** self.integer("an exponent")
        return base


def parse(text: str) -> ProblemDocument:
    """Parse ``.liext`` text; raises ParseError or SemanticError."""
    return _Parser(text).document()


def parse_polynomial(text: str, variables) -> Polynomial:
    """Parse a rational polynomial expression over ``variables``."""
    p = _Parser(text)
    p.variables = tuple(variables)
    out = p.expr(p.variables)
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return out


def parse_field(text: str, variables, deform: str | None = None) -> VectorField:
    """Parse a field expression such as ``2*y d/y - v d/v``."""
    p = _Parser(text)
    p.variables = tuple(variables)
    comps = p.field_expr(p.variables)
    if p.tok.kind != "eof" and not p.at(";"):
        p.fail("unexpected trailing input")
    return VectorField.from_components(p.variables, comps, deform, Domain.RATIONAL)
