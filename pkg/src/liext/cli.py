"""Command-line front end.

    liext verify FILE [--json]
    liext bracket FILE --relation A B [--json]
    liext extend FILE [--order N] [--keep-free] [--json]
    liext parse-check FILE [--json]

Exit status: 0 success or solved, 2 obstructed (or relations that do not
hold), 1 usage, input or parse error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .dsl import emit_json, parse, to_problem
from .dsl.document import ProblemDocument
from .dsl.emit import bracket_dict, dumps
from .errors import LiextError, ParseError, SemanticError
from .extend import ExtensionResult, extend, verify_structure
from .linsolve import FreePolicy
from .vfield import format_field, lie_bracket

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_OBSTRUCTED = 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="liext", description="Lie bracket verification and order-by-order extension.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    b = sub.add_parser("bracket", help="print the exact bracket of two fields")
    b.add_argument("path")
    b.add_argument("--relation", nargs=2, metavar=("I", "J"), required=True,
                   help="field names or 1-based indices")
    b.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="check every declared relation exactly")
    v.add_argument("path")
    v.add_argument("--json", action="store_true")

    e = sub.add_parser("extend", help="extend the fields order by order")
    e.add_argument("path")
    e.add_argument("--order", type=int, default=None, help="highest order to reach (default: file option, else 2)")
    e.add_argument("--keep-free", action="store_true", help="carry free unknowns symbolically instead of zero-filling")
    e.add_argument("--json", action="store_true")

    c = sub.add_parser("parse-check", help="parse and validate only")
    c.add_argument("path")
    c.add_argument("--json", action="store_true")
    return p


def _field_ref(doc: ProblemDocument, ref: str) -> str:
    names = doc.field_names
    if ref in names:
        return ref
    if ref.isdigit() and 1 <= int(ref) <= len(names):
        return names[int(ref) - 1]
    raise _UsageError(f"no field {ref!r} (have: {', '.join(names) or 'none'})")


def cmd_bracket(doc: ProblemDocument, args) -> tuple[str, int]:
    a, b = (_field_ref(doc, r) for r in args.relation)
    br = lie_bracket(doc.field(a), doc.field(b))
    if args.json:
        return dumps(bracket_dict(a, b, br)), EXIT_OK
    return f"[{a},{b}] = {format_field(br)}", EXIT_OK


def cmd_verify(doc: ProblemDocument, args) -> tuple[str, int]:
    report = verify_structure([f.field for f in doc.fields], doc.spec())
    code = EXIT_OK if report.all_ok else EXIT_OBSTRUCTED
    if args.json:
        return emit_json(report), code
    lines = []
    for c in report.checks:
        mark = "ok  " if c.ok else "FAIL"
        line = f"{mark} {c.label} = {format_field(c.bracket)}"
        if not c.ok:
            line += f"    (difference {format_field(c.difference)})"
        lines.append(line)
    lines.append(f"{report.passed}/{len(report.checks)} relations hold")
    return "\n".join(lines), code


def _render_extension(result: ExtensionResult) -> str:
    problem = result.problem
    named = sorted(set(problem.ansatz.names.values()))
    lines = []
    for st in result.stages:
        values = st.pinned()
        n_free = len(st.solution.free)
        lines.append(
            f"order {st.order}: solved in {len(st.rounds)} round(s); "
            f"{len(st.unknowns)} new unknowns, {len(values)} pinned, {n_free} free"
        )
        shown = [f"{n} = {values[n]}" for n in named if n in values]
        if shown:
            lines.append("  pinned: " + ", ".join(shown))
        for nm, F in zip(problem.spec.field_names, st.fields):
            lines.append(f"  {nm} = {format_field(F)}")
    ob = result.obstruction
    if ob is not None:
        lines.append(f"order {ob.order}: obstructed")
        comp = f"d/d{ob.component}" if ob.component else "-"
        lines.append(f"  relation {ob.relation_label}, component {comp}")
        if ob.residual is not None:
            lines.append(f"  residual: {ob.residual}")
        for k, m in ob.certificate.certificate:
            con = ob.system.constraints[k]
            lines.append(f"  certificate: {m} * ({con.form} = 0)  from {con.provenance.describe()}")
        lines.append(f"  combination = {ob.certificate.residual_constant} != 0")
        if ob.inconsistent_relations:
            lines.append("  inconsistent relations: " + ", ".join(ob.inconsistent_relations))
        lines.append(f"result: extends to order {result.achieved_order}, obstructed at order {ob.order}")
    else:
        lines.append(f"result: extends to order {result.achieved_order}")
    return "\n".join(lines)


def cmd_extend(doc: ProblemDocument, args) -> tuple[str, int]:
    if args.order is not None and args.order < 0:
        raise _UsageError("--order must be >= 0")
    policy = FreePolicy.KEEP_SYMBOLIC if args.keep_free else None
    result = extend(to_problem(doc, args.order, policy))
    code = EXIT_OBSTRUCTED if result.obstruction is not None else EXIT_OK
    if args.json:
        return emit_json(result), code
    return _render_extension(result), code


def cmd_parse_check(doc: ProblemDocument, args) -> tuple[str, int]:
    summary = {
        "kind": "parse-check",
        "status": "ok",
        "variables": list(doc.variables),
        "deform": doc.deform,
        "fields": len(doc.fields),
        "relations": len(doc.relations),
        "ansatz_blocks": len(doc.ansatz),
        "constraints": len(doc.constraints),
    }
    if args.json:
        return dumps(summary), EXIT_OK
    return (
        f"ok: {len(doc.variables)} variables, {len(doc.fields)} fields, {len(doc.relations)} relations, "
        f"{len(doc.ansatz)} ansatz blocks, {len(doc.constraints)} constraints"
    ), EXIT_OK


COMMANDS = {
    "bracket": cmd_bracket,
    "verify": cmd_verify,
    "extend": cmd_extend,
    "parse-check": cmd_parse_check,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=err)
        return EXIT_ERROR
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.path}: {exc}", file=err)
        return EXIT_ERROR
    try:
        doc = parse(text)
        output, code = COMMANDS[args.command](doc, args)
    except ParseError as exc:
        print(f"{args.path}:{exc.line}:{exc.column}: parse error: {exc.message}", file=err)
        return EXIT_ERROR
    except SemanticError as exc:
        line, col, _ = exc.span
        print(f"{args.path}:{line}:{col}: error: {exc.message}", file=err)
        return EXIT_ERROR
    except _UsageError as exc:
        print(f"liext {args.command}: {exc}", file=err)
        return EXIT_ERROR
    except LiextError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    print(output, file=out)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)
