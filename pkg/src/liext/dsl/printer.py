"""Canonical text form of a ProblemDocument.

Statement groups appear in a fixed order (vars, deform, fields, relations,
ansatz, names, constraints, options), separated by one blank line, one
declaration per line.  Comments are not preserved.
"""

from __future__ import annotations

from ..poly import format_monomial
from ..vfield import format_field
from .document import CoefRefExpr, ProblemDocument


def _combination(pairs, render) -> str:
    if not pairs:
        return "0"
    out = ""
    for k, (c, target) in enumerate(pairs):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = render(target) if mag == 1 else f"{mag}*{render(target)}"
        if k == 0:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    return out


def _coefref(ref: CoefRefExpr, variables) -> str:
    return f"coef({ref.field}, d/{ref.component}, {format_monomial(variables, ref.exps)})"


def print_document(doc: ProblemDocument) -> str:
    groups: list[list[str]] = []
    if doc.variables:
        groups.append([f"vars {' '.join(doc.variables)};"])
    if doc.deform is not None:
        groups.append([f"deform {doc.deform};"])
    groups.append([f"field {f.name} = {format_field(f.field, marker='d/')};" for f in doc.fields])
    groups.append(
        [f"relation [{r.left},{r.right}] = {_combination(r.rhs, str)};" for r in doc.relations]
    )
    lines = []
    for a in doc.ansatz:
        head = f"ansatz {a.field} d/{a.component}"
        if a.bounds:
            head += " : " + ", ".join(f"deg {x} <= {d}" for x, d in a.bounds)
        lines.append(head + ";")
    groups.append(lines)
    groups.append([f"name {n.name} = {_coefref(n.ref, doc.variables)};" for n in doc.names])

    def render(target):
        return target if isinstance(target, str) else _coefref(target, doc.variables)

    groups.append(
        [f"constraint {_combination(c.terms, render)} = {c.rhs};" for c in doc.constraints]
    )
    opts = []
    if doc.max_order is not None:
        opts.append(f"option max_order = {doc.max_order};")
    if doc.free_policy is not None:
        opts.append(f"option free_policy = {doc.free_policy.value};")
    if doc.extend_fields is not None:
        opts.append(f"option extend_fields = {', '.join(doc.extend_fields)};")
    groups.append(opts)
    blocks = ["\n".join(g) for g in groups if g]
    return "\n\n".join(blocks) + "\n" if blocks else ""

