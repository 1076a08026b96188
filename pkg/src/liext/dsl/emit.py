"""Deterministic JSON rendering of verification and extension results.

Rationals are strings ``"p/q"``, polynomials and fields use their canonical
text, keys are sorted and separators compact, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import json
from importlib import resources

from ..extend import ExtensionResult, ObstructionReport, Stage, VerificationReport
from ..linsolve import solution_to_dict
from ..vfield import VectorField, format_field


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def load_schema() -> dict:
    text = resources.files("liext").joinpath("schema/result.schema.json").read_text()
    return json.loads(text)


def verification_dict(report: VerificationReport) -> dict:
    return {
        "kind": "verify",
        "status": "ok" if report.all_ok else "failed",
        "relations_checked": len(report.checks),
        "relations_passed": report.passed,
        "relations": [
            {
                "relation": c.label,
                "holds": c.ok,
                "bracket": format_field(c.bracket),
                "difference": format_field(c.difference),
            }
            for c in report.checks
        ],
    }


def _stage_dict(stage: Stage, field_names, named) -> dict:
    values = stage.pinned()
    known = {u.name for u in stage.unknowns} | {u.name for u in stage.solution.assignments}
    return {
        "order": stage.order,
        "rounds": len(stage.rounds),
        "unknowns": len(stage.unknowns),
        "pinned": {k: str(v) for k, v in values.items()},
        "named": {n: str(values[n]) if n in values else "free" for n in named if n in known},
        "solution": solution_to_dict(stage.solution),
        "fields": {nm: format_field(F) for nm, F in zip(field_names, stage.fields)},
    }


def obstruction_dict(ob: ObstructionReport) -> dict:
    spec_pair = [ob.relation[0] + 1, ob.relation[1] + 1] if ob.relation is not None else None
    return {
        "order": ob.order,
        "relation": ob.relation_label,
        "relation_indices": spec_pair,
        "component": ob.component,
        "residual": str(ob.residual) if ob.residual is not None else None,
        "certificate": [[k, str(m)] for k, m in ob.certificate.certificate],
        "residual_constant": str(ob.certificate.residual_constant),
        "certificate_constraints": [
            {
                "index": k,
                "multiplier": str(m),
                "form": str(ob.system.constraints[k].form),
                "provenance": ob.system.constraints[k].provenance.describe(),
            }
            for k, m in ob.certificate.certificate
        ],
        "constraints_collected": len(ob.system),
        "inconsistent_relations": list(ob.inconsistent_relations),
    }


def extension_dict(result: ExtensionResult) -> dict:
    problem = result.problem
    named = sorted(set(problem.ansatz.names.values()))
    return {
        "kind": "extend",
        "status": "obstructed" if result.obstruction is not None else "solved",
        "max_order": problem.max_order,
        "achieved_order": result.achieved_order,
        "free_policy": problem.free_policy.value,
        "base_fields": {nm: format_field(F) for nm, F in zip(problem.spec.field_names, problem.base_fields)},
        "orders": [_stage_dict(s, problem.spec.field_names, named) for s in result.stages],
        "obstruction": obstruction_dict(result.obstruction) if result.obstruction is not None else None,
    }


def bracket_dict(left: str, right: str, bracket: VectorField) -> dict:
    return {
        "kind": "bracket",
        "left": left,
        "right": right,
        "bracket": format_field(bracket),
        "components": {x: str(c) for x, c in zip(bracket.coordinates, bracket.components) if not c.is_zero()},
    }


def emit_json(result) -> str:
    if isinstance(result, ExtensionResult):
        return dumps(extension_dict(result))
    if isinstance(result, VerificationReport):
        return dumps(verification_dict(result))
    if isinstance(result, dict):
        return dumps(result)
    raise TypeError(f"cannot render {type(result).__name__} as JSON")
