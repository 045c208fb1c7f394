"""ModelDocument: versioned JSON interchange for typed models.

``parse_model(write_model(m))`` is structurally identical to ``m``:
variable order, constraint order, labels, and tree-node tags all survive.
Rationals serialize as ``{"num": p, "den": q}``; infinite bounds as null.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from ..core import (
    Alternative,
    Balance,
    BalanceFlavor,
    Bound,
    ConditionalBound,
    Direction,
    EitherOr,
    IfThen,
    LinearExpr,
    Model,
    Objective,
    OffBehavior,
    RawRow,
    Sense,
    SetCovering,
    SetPacking,
    SetPartitioning,
    TypedConstraint,
    Variable,
    VariableFix,
    VarKind,
    bound_is_expr,
    validate,
)
from ..errors import ToolkitError, ValidationFailed
from ..rationals import from_json, to_json

SCHEMA_VERSION = "1"

_FAMILY_CLASSES = {
    "bound": Bound,
    "conditional_bound": ConditionalBound,
    "balance": Balance,
    "set_packing": SetPacking,
    "set_partitioning": SetPartitioning,
    "set_covering": SetCovering,
    "variable_fix": VariableFix,
    "if_then": IfThen,
    "either_or": EitherOr,
    "raw_row": RawRow,
}


def expr_to_json(expr: LinearExpr, order: dict[str, int]) -> dict:
    keys = sorted(expr.terms, key=lambda v: (order.get(v, len(order)), v))
    return {
        "terms": {var: to_json(expr.terms[var]) for var in keys},
        "constant": to_json(expr.constant),
    }


def expr_from_json(obj: Any) -> LinearExpr:
    if not isinstance(obj, dict) or set(obj) != {"terms", "constant"}:
        raise ToolkitError("MalformedDocument", f"not a linear expression: {obj!r}")
    if not isinstance(obj["terms"], dict):
        raise ToolkitError("MalformedDocument", "expression terms must be an object")
    terms = {var: from_json(coeff) for var, coeff in obj["terms"].items()}
    return LinearExpr(terms, from_json(obj["constant"]))


def _bound_to_json(bound, order) -> dict:
    if bound_is_expr(bound):
        return {"kind": "expression", "expr": expr_to_json(bound, order)}
    return {"kind": "constant", "value": to_json(bound)}


def _bound_from_json(obj: Any):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ToolkitError("MalformedDocument", f"not a bound: {obj!r}")
    if obj["kind"] == "constant":
        return from_json(obj["value"])
    if obj["kind"] == "expression":
        return expr_from_json(obj["expr"])
    raise ToolkitError("MalformedDocument", f"unknown bound kind {obj['kind']!r}")


def _constraint_to_json(constraint: TypedConstraint, cid: str, order: dict[str, int]) -> dict:
    body: dict[str, Any] = {"id": cid}
    if isinstance(constraint, Bound):
        body["family"] = "bound"
        body["expr"] = expr_to_json(constraint.expr, order)
        body["sense"] = constraint.sense.value
        body["bound"] = _bound_to_json(constraint.bound, order)
    elif isinstance(constraint, ConditionalBound):
        body["family"] = "conditional_bound"
        body["expr"] = expr_to_json(constraint.expr, order)
        body["sense"] = constraint.sense.value
        body["bound"] = _bound_to_json(constraint.bound, order)
        body["indicator"] = constraint.indicator
        body["off_behavior"] = constraint.off_behavior.value
    elif isinstance(constraint, Balance):
        body["family"] = "balance"
        body["lhs"] = expr_to_json(constraint.lhs, order)
        body["rhs"] = expr_to_json(constraint.rhs, order)
        body["flavor"] = constraint.flavor.value
    elif isinstance(constraint, (SetPacking, SetPartitioning, SetCovering)):
        body["family"] = {
            SetPacking: "set_packing",
            SetPartitioning: "set_partitioning",
            SetCovering: "set_covering",
        }[type(constraint)]
        body["members"] = list(constraint.members)
        body["weights"] = None if constraint.weights is None else [to_json(w) for w in constraint.weights]
        body["rhs"] = constraint.rhs
    elif isinstance(constraint, VariableFix):
        body["family"] = "variable_fix"
        body["var"] = constraint.var
        body["value"] = to_json(constraint.value)
    elif isinstance(constraint, IfThen):
        body["family"] = "if_then"
        body["antecedents"] = list(constraint.antecedents)
        body["consequents"] = list(constraint.consequents)
    elif isinstance(constraint, EitherOr):
        body["family"] = "either_or"
        body["alternatives"] = [
            {"expr": expr_to_json(alt.expr, order), "sense": alt.sense.value, "rhs": to_json(alt.rhs)}
            for alt in constraint.alternatives
        ]
    elif isinstance(constraint, RawRow):
        body["family"] = "raw_row"
        body["expr"] = expr_to_json(constraint.expr, order)
        body["sense"] = constraint.sense.value
        body["rhs"] = to_json(constraint.rhs)
    else:
        raise ToolkitError("MalformedDocument", f"unknown family {type(constraint).__name__}")
    body["label"] = constraint.label
    body["omt_node"] = constraint.omt_node
    return body


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ToolkitError("MalformedDocument", f"{where} misses {key!r}")
    return obj[key]


def _constraint_from_json(obj: Any) -> TypedConstraint:
    if not isinstance(obj, dict):
        raise ToolkitError("MalformedDocument", "constraint entries must be objects")
    family = _require(obj, "family", "constraint")
    if family not in _FAMILY_CLASSES:
        raise ToolkitError("MalformedDocument", f"unknown constraint family tag {family!r}")
    label = obj.get("label", "")
    omt_node = obj.get("omt_node")
    if omt_node is not None and not isinstance(omt_node, int):
        raise ToolkitError("MalformedDocument", "omt_node must be an integer or null")
    meta = {"label": label, "omt_node": omt_node}
    try:
        if family == "bound":
            return Bound(expr_from_json(_require(obj, "expr", family)), Sense(_require(obj, "sense", family)),
                         _bound_from_json(_require(obj, "bound", family)), **meta)
        if family == "conditional_bound":
            return ConditionalBound(
                expr_from_json(_require(obj, "expr", family)), Sense(_require(obj, "sense", family)),
                _bound_from_json(_require(obj, "bound", family)), _require(obj, "indicator", family),
                OffBehavior(_require(obj, "off_behavior", family)), **meta)
        if family == "balance":
            return Balance(expr_from_json(_require(obj, "lhs", family)), expr_from_json(_require(obj, "rhs", family)),
                           BalanceFlavor(_require(obj, "flavor", family)), **meta)
        if family in ("set_packing", "set_partitioning", "set_covering"):
            weights = obj.get("weights")
            members = _require(obj, "members", family)
            if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
                raise ToolkitError("MalformedDocument", "members must be a list of variable ids")
            rhs = _require(obj, "rhs", family)
            cls = _FAMILY_CLASSES[family]
            return cls(members=tuple(members),
                       weights=None if weights is None else tuple(from_json(w) for w in weights),
                       rhs=rhs, **meta)
        if family == "variable_fix":
            return VariableFix(_require(obj, "var", family), from_json(_require(obj, "value", family)), **meta)
        if family == "if_then":
            return IfThen(tuple(_require(obj, "antecedents", family)), tuple(_require(obj, "consequents", family)), **meta)
        if family == "either_or":
            alternatives = tuple(
                Alternative(expr_from_json(_require(alt, "expr", family)), Sense(_require(alt, "sense", family)),
                            from_json(_require(alt, "rhs", family)))
                for alt in _require(obj, "alternatives", family)
            )
            return EitherOr(alternatives, **meta)
        return RawRow(expr_from_json(_require(obj, "expr", family)), Sense(_require(obj, "sense", family)),
                      from_json(_require(obj, "rhs", family)), **meta)
    except ValueError as exc:
        raise ToolkitError("MalformedDocument", f"bad {family} constraint: {exc}") from exc


def model_to_document(model: Model) -> dict:
    order = {v.id: i for i, v in enumerate(model.variables)}
    return {
        "schema_version": SCHEMA_VERSION,
        "name": model.name,
        "variables": [
            {
                "id": v.id,
                "name": v.name,
                "kind": v.kind.value,
                "lower": None if v.lower is None else to_json(v.lower),
                "upper": None if v.upper is None else to_json(v.upper),
            }
            for v in model.variables
        ],
        "objective": None if model.objective is None else {
            "direction": model.objective.direction.value,
            "expr": expr_to_json(model.objective.expr, order),
        },
        "constraints": [
            _constraint_to_json(c, f"c{i}", order) for i, c in enumerate(model.constraints)
        ],
    }


def write_model(model: Model) -> str:
    """Serialize a validated model (raises ValidationFailed on errors)."""
    errors = [d for d in validate(model) if d.severity == "error"]
    if errors:
        raise ValidationFailed(errors)
    return json.dumps(model_to_document(model), indent=2, ensure_ascii=False) + "\n"


def document_to_model(document: Any) -> Model:
    """Build a Model from a parsed document; validation errors re-raise."""
    if not isinstance(document, dict):
        raise ToolkitError("MalformedDocument", "document root must be an object")
    version = _require(document, "schema_version", "document")
    if version != SCHEMA_VERSION:
        raise ToolkitError("SchemaMismatch", f"schema_version {version!r} is not {SCHEMA_VERSION!r}")
    model = Model(_require(document, "name", "document"))
    raw_variables = _require(document, "variables", "document")
    if not isinstance(raw_variables, list):
        raise ToolkitError("MalformedDocument", "variables must be a list")
    for entry in raw_variables:
        if not isinstance(entry, dict):
            raise ToolkitError("MalformedDocument", "variable entries must be objects")
        try:
            kind = VarKind(_require(entry, "kind", "variable"))
        except ValueError as exc:
            raise ToolkitError("MalformedDocument", str(exc)) from exc
        lower = entry.get("lower")
        upper = entry.get("upper")
        var = Variable(
            id=_require(entry, "id", "variable"),
            name=_require(entry, "name", "variable"),
            kind=kind,
            lower=None if lower is None else from_json(lower),
            upper=None if upper is None else from_json(upper),
        )
        # raw append: malformed content must surface via validate, not here
        model.variables.append(var)
        model._by_id[var.id] = var
    raw_constraints = _require(document, "constraints", "document")
    if not isinstance(raw_constraints, list):
        raise ToolkitError("MalformedDocument", "constraints must be a list")
    for i, entry in enumerate(raw_constraints):
        constraint = _constraint_from_json(entry)
        declared = entry.get("id")
        if declared is not None and declared != f"c{i}":
            raise ToolkitError("MalformedDocument", f"constraint id {declared!r} out of order (expected c{i})")
        model.constraints.append(constraint)
    raw_objective = document.get("objective")
    if raw_objective is not None:
        if not isinstance(raw_objective, dict):
            raise ToolkitError("MalformedDocument", "objective must be an object or null")
        try:
            direction = Direction(_require(raw_objective, "direction", "objective"))
        except ValueError as exc:
            raise ToolkitError("MalformedDocument", str(exc)) from exc
        model.objective = Objective(direction, expr_from_json(_require(raw_objective, "expr", "objective")))
    diagnostics = validate(model)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        raise ValidationFailed(errors)
    return model


def parse_model(text: str) -> Model:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ToolkitError("MalformedDocument", f"invalid JSON: {exc}") from exc
    return document_to_model(document)
