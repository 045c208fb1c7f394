"""The modelling tree: usage-organized constraint elicitation.

Internal nodes ask a question; each answer selects a child. Leaves carry a
constraint template a caller fills to obtain a typed constraint tagged with
the leaf's node id. `classify` is the reverse map: any typed constraint
(except raw rows) lands on exactly one leaf, and
``classify(instantiate(n, b)) == n`` for every leaf ``n``.

Leaf ids 1-24 (6 and 10 unassigned) follow the published numbering where
one exists; nodes flagged ``anchored`` are the cited ones, the rest are a
documented reconstruction. Internal nodes are numbered from 100.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .core import (
    Alternative,
    Balance,
    BalanceFlavor,
    Bound,
    ConditionalBound,
    EitherOr,
    IfThen,
    LinearExpr,
    OffBehavior,
    RawRow,
    Sense,
    SetCovering,
    SetPacking,
    SetPartitioning,
    TypedConstraint,
    VariableFix,
    bound_is_expr,
    rat,
)
from .errors import ToolkitError

TREE_SCHEMA_VERSION = "1"


class SlotKind(str, enum.Enum):
    VARIABLE = "variable"
    VARIABLE_LIST = "variable-list"
    EXPRESSION = "expression"
    RATIONAL = "rational"
    POSITIVE_INTEGER = "positive-integer"


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: SlotKind


@dataclass(frozen=True)
class TemplateSpec:
    family: str
    slots: tuple[SlotSpec, ...]
    fixed: dict[str, Any]


@dataclass(frozen=True)
class OmtNode:
    id: int
    label: str
    kind: str  # "internal" | "leaf"
    question: str | None
    children: tuple[tuple[str, int], ...]  # (answer label, child id)
    template: TemplateSpec | None
    anchored: bool

    def child_for(self, answer: str) -> int | None:
        for label, child in self.children:
            if label == answer:
                return child
        return None


@dataclass(frozen=True)
class OmtTree:
    root: int
    nodes: dict[int, OmtNode]

    def node(self, node_id: int) -> OmtNode:
        if node_id not in self.nodes:
            raise ToolkitError("UnknownNode", f"no tree node {node_id}")
        return self.nodes[node_id]

    def leaves(self) -> list[OmtNode]:
        return [n for n in self.nodes.values() if n.kind == "leaf"]


def _slot(name: str, kind: str) -> SlotSpec:
    return SlotSpec(name, SlotKind(kind))


def _internal(node_id, label, question, children) -> OmtNode:
    return OmtNode(node_id, label, "internal", question, tuple(children), None, False)


def _leaf(node_id, label, anchored, family, slots, fixed=None) -> OmtNode:
    template = TemplateSpec(family, tuple(slots), dict(fixed or {}))
    return OmtNode(node_id, label, "leaf", None, (), template, anchored)


def _build_nodes() -> list[OmtNode]:
    return [
        _internal(100, "requirement", "What does the business requirement describe?", [
            ("a limit or requirement on a quantity", 101),
            ("two quantities that must be equal", 104),
            ("a choice among yes/no options", 105),
            ("a logical link between decisions", 106),
            ("a decision already fixed in advance", 19),
        ]),
        _internal(101, "bounds", "Is the quantity capped from above (supply or capacity) or required from below (demand)?", [
            ("capped from above", 102),
            ("required from below", 103),
        ]),
        _internal(102, "supply", "What sets the upper limit?", [
            ("a fixed number over a weighted total", 1),
            ("a fixed number on a single stored quantity", 7),
            ("another decision variable", 2),
            ("a limit that applies only while a yes/no decision is on", 3),
        ]),
        _internal(103, "demand", "What sets the lower requirement?", [
            ("a fixed number over a weighted total", 4),
            ("a fixed number on a single quantity", 5),
            ("another decision variable", 8),
            ("a requirement that applies only while a yes/no decision is on", 9),
        ]),
        _internal(104, "balance", "What is being equated?", [
            ("a quantity carried between two consecutive periods", 12),
            ("a quantity assigned from one measure to another", 13),
            ("flow into and out of a point", 14),
            ("inputs blended into outputs", 15),
            ("a starting quantity and its initial condition", 16),
        ]),
        _internal(105, "selection", "How many of the options must be selected?", [
            ("at most one", 11),
            ("exactly one", 17),
            ("at least a required number", 18),
            ("at most a quota larger than one", 20),
            ("exactly a count larger than one", 21),
        ]),
        _internal(106, "logic", "How are the decisions linked?", [
            ("one of two conditions must hold", 22),
            ("if some decisions are taken, one other must follow", 23),
            ("if some decisions are taken, several others must follow", 24),
        ]),
        _leaf(1, "knapsack-limit", False, "bound",
              [_slot("total", "expression"), _slot("limit", "rational")],
              {"sense": "<=", "bound_kind": "constant"}),
        _leaf(2, "variable-upper-bound", True, "bound",
              [_slot("expr", "expression"), _slot("bound", "expression")],
              {"sense": "<=", "bound_kind": "expression"}),
        _leaf(3, "conditional-upper-bound", True, "conditional_bound",
              [_slot("expr", "expression"), _slot("limit", "rational"), _slot("switch", "variable")],
              {"sense": "<=", "off_behavior": "force_zero"}),
        _leaf(4, "demand-floor", False, "bound",
              [_slot("total", "expression"), _slot("requirement", "rational")],
              {"sense": ">=", "bound_kind": "constant"}),
        _leaf(5, "minimum-level", False, "bound",
              [_slot("quantity", "variable"), _slot("requirement", "rational")],
              {"sense": ">=", "bound_kind": "constant"}),
        _leaf(7, "storage-cap", True, "bound",
              [_slot("quantity", "variable"), _slot("limit", "rational")],
              {"sense": "<=", "bound_kind": "constant"}),
        _leaf(8, "variable-lower-bound", True, "bound",
              [_slot("expr", "expression"), _slot("bound", "expression")],
              {"sense": ">=", "bound_kind": "expression"}),
        _leaf(9, "conditional-lower-bound", True, "conditional_bound",
              [_slot("expr", "expression"), _slot("requirement", "rational"), _slot("switch", "variable")],
              {"sense": ">=", "off_behavior": "force_zero"}),
        _leaf(11, "set-packing", True, "set_packing",
              [_slot("members", "variable-list")], {"rhs": 1}),
        _leaf(12, "interperiod-balance", True, "balance",
              [_slot("lhs", "expression"), _slot("rhs", "expression")], {"flavor": "interperiod"}),
        _leaf(13, "assignment-balance", True, "balance",
              [_slot("lhs", "expression"), _slot("rhs", "expression")], {"flavor": "assignment"}),
        _leaf(14, "flow-balance", True, "balance",
              [_slot("lhs", "expression"), _slot("rhs", "expression")], {"flavor": "flow"}),
        _leaf(15, "blending-balance", False, "balance",
              [_slot("lhs", "expression"), _slot("rhs", "expression")], {"flavor": "blending"}),
        _leaf(16, "initial-condition", False, "balance",
              [_slot("lhs", "expression"), _slot("rhs", "expression")], {"flavor": "initial"}),
        _leaf(17, "set-partitioning", True, "set_partitioning",
              [_slot("members", "variable-list")], {"rhs": 1}),
        _leaf(18, "set-covering", False, "set_covering",
              [_slot("members", "variable-list"), _slot("minimum", "positive-integer")], {}),
        _leaf(19, "variable-fix", True, "variable_fix",
              [_slot("var", "variable"), _slot("value", "rational")], {}),
        _leaf(20, "weighted-packing", False, "set_packing",
              [_slot("members", "variable-list"), _slot("quota", "positive-integer")], {}),
        _leaf(21, "weighted-partitioning", False, "set_partitioning",
              [_slot("members", "variable-list"), _slot("count", "positive-integer")], {}),
        _leaf(22, "either-or", False, "either_or",
              [_slot("first", "expression"), _slot("first_limit", "rational"),
               _slot("second", "expression"), _slot("second_limit", "rational")],
              {"senses": ["<=", "<="]}),
        _leaf(23, "if-then-single", False, "if_then",
              [_slot("conditions", "variable-list"), _slot("consequence", "variable")], {}),
        _leaf(24, "if-then-multi", True, "if_then",
              [_slot("conditions", "variable-list"), _slot("consequences", "variable-list")], {}),
    ]


_TREE: OmtTree | None = None

#: Leaf ids whose number and meaning are pinned by the published numbering.
ANCHORED_NODES = frozenset({2, 3, 7, 8, 9, 11, 12, 13, 14, 17, 19, 24})


def load_tree() -> OmtTree:
    """The built-in canonical tree (immutable; identical across calls)."""
    global _TREE
    if _TREE is None:
        nodes = {n.id: n for n in _build_nodes()}
        tree = OmtTree(root=100, nodes=nodes)
        _check_tree(tree)
        _TREE = tree
    return _TREE


def _check_tree(tree: OmtTree) -> None:
    seen_children: set[int] = set()
    for node in tree.nodes.values():
        if node.kind == "internal":
            if len(node.children) < 2:
                raise ToolkitError("MalformedTree", f"internal node {node.id} has under two children")
            labels = [a for a, _ in node.children]
            if len(set(labels)) != len(labels):
                raise ToolkitError("MalformedTree", f"duplicate answers at node {node.id}")
            for _, child in node.children:
                if child in seen_children:
                    raise ToolkitError("MalformedTree", f"node {child} has two parents")
                seen_children.add(child)
                if child not in tree.nodes:
                    raise ToolkitError("MalformedTree", f"missing child node {child}")
        elif node.template is None:
            raise ToolkitError("MalformedTree", f"leaf {node.id} lacks a template")
    reachable = {tree.root}
    frontier = [tree.root]
    while frontier:
        node = tree.nodes[frontier.pop()]
        for _, child in node.children:
            if child not in reachable:
                reachable.add(child)
                frontier.append(child)
    if reachable != set(tree.nodes):
        raise ToolkitError("MalformedTree", "tree is not connected")


def descend(tree: OmtTree, node_id: int, answer: str) -> int:
    node = tree.node(node_id)
    if node.kind != "internal":
        raise ToolkitError("NotInternal", f"node {node_id} is a leaf; nothing to descend", str(node_id))
    child = node.child_for(answer)
    if child is None:
        raise ToolkitError("UnknownAnswer", f"node {node_id} has no answer {answer!r}", str(node_id))
    return child


def answer_path(tree: OmtTree, leaf_id: int) -> list[str]:
    """The unique answer sequence from the root to a leaf."""
    parent: dict[int, tuple[int, str]] = {}
    for node in tree.nodes.values():
        for answer, child in node.children:
            parent[child] = (node.id, answer)
    tree.node(leaf_id)
    path: list[str] = []
    cursor = leaf_id
    while cursor != tree.root:
        up, answer = parent[cursor]
        path.append(answer)
        cursor = up
    return list(reversed(path))


# --------------------------------------------------------------------------
# Template instantiation


def _coerce(binding: Any, kind: SlotKind, slot: str):
    if kind is SlotKind.VARIABLE:
        if not isinstance(binding, str):
            raise ToolkitError("KindMismatch", f"slot {slot!r} wants a variable id", slot)
        return binding
    if kind is SlotKind.VARIABLE_LIST:
        if isinstance(binding, str) or not isinstance(binding, Sequence) or not all(isinstance(v, str) for v in binding):
            raise ToolkitError("KindMismatch", f"slot {slot!r} wants a list of variable ids", slot)
        return list(binding)
    if kind is SlotKind.EXPRESSION:
        if not isinstance(binding, LinearExpr):
            raise ToolkitError("KindMismatch", f"slot {slot!r} wants a linear expression", slot)
        return binding
    if kind is SlotKind.RATIONAL:
        try:
            return rat(binding)
        except ToolkitError:
            raise ToolkitError("KindMismatch", f"slot {slot!r} wants a rational", slot) from None
    if kind is SlotKind.POSITIVE_INTEGER:
        if not isinstance(binding, int) or isinstance(binding, bool) or binding < 1:
            raise ToolkitError("KindMismatch", f"slot {slot!r} wants a positive integer", slot)
        return binding
    raise ToolkitError("KindMismatch", f"slot {slot!r} has unknown kind", slot)


def instantiate(tree: OmtTree, leaf_id: int, bindings: Mapping[str, Any], label: str = "") -> TypedConstraint:
    """Fill a leaf template; the result carries omt_node = leaf_id.

    Raises MissingSlot / KindMismatch / UnknownNode. A binding whose shape
    would classify elsewhere (e.g. a single consequent on the
    multi-consequence leaf) is a KindMismatch: instantiation guarantees
    the classify round-trip.
    """
    node = tree.node(leaf_id)
    if node.kind != "leaf" or node.template is None:
        raise ToolkitError("NotLeaf", f"node {leaf_id} is internal; answer questions instead", str(leaf_id))
    template = node.template
    values: list[Any] = []
    names = {s.name for s in template.slots}
    for extra in sorted(set(bindings) - names):
        raise ToolkitError("KindMismatch", f"no slot named {extra!r} on leaf {leaf_id}", extra)
    for slot in template.slots:
        if slot.name not in bindings:
            raise ToolkitError("MissingSlot", f"slot {slot.name!r} not bound", slot.name)
        values.append(_coerce(bindings[slot.name], slot.kind, slot.name))
    constraint = _construct(template, values, leaf_id, label)
    if classify(constraint) != leaf_id:
        raise ToolkitError(
            "KindMismatch",
            f"bindings build a constraint of a different leaf than {leaf_id}",
            str(leaf_id),
        )
    return constraint


def _as_expr_value(value: Any) -> LinearExpr:
    return value if isinstance(value, LinearExpr) else LinearExpr.var(value)


def _construct(template: TemplateSpec, values: list[Any], leaf_id: int, label: str) -> TypedConstraint:
    family = template.family
    fixed = template.fixed
    meta = {"label": label, "omt_node": leaf_id}
    try:
        if family == "bound":
            expr = _as_expr_value(values[0])
            bound = values[1] if fixed["bound_kind"] == "expression" else rat(values[1])
            return Bound(expr, Sense(fixed["sense"]), bound, **meta)
        if family == "conditional_bound":
            return ConditionalBound(
                values[0], Sense(fixed["sense"]), rat(values[1]), values[2],
                OffBehavior(fixed["off_behavior"]), **meta)
        if family == "balance":
            return Balance(values[0], values[1], BalanceFlavor(fixed["flavor"]), **meta)
        if family in ("set_packing", "set_partitioning", "set_covering"):
            cls = {"set_packing": SetPacking, "set_partitioning": SetPartitioning,
                   "set_covering": SetCovering}[family]
            rhs = fixed.get("rhs", values[1] if len(values) > 1 else 1)
            return cls(members=tuple(values[0]), weights=None, rhs=rhs, **meta)
        if family == "variable_fix":
            return VariableFix(values[0], rat(values[1]), **meta)
        if family == "either_or":
            senses = [Sense(s) for s in fixed["senses"]]
            return EitherOr((
                Alternative(values[0], senses[0], rat(values[1])),
                Alternative(values[2], senses[1], rat(values[3])),
            ), **meta)
        if family == "if_then":
            consequents = values[1] if isinstance(values[1], list) else [values[1]]
            return IfThen(tuple(values[0]), tuple(consequents), **meta)
    except ToolkitError:
        raise
    except (ValueError, KeyError, IndexError) as exc:
        raise ToolkitError("KindMismatch", f"cannot build {family}: {exc}") from exc
    raise ToolkitError("KindMismatch", f"template family {family!r} is unknown")


# --------------------------------------------------------------------------
# Reverse classification


def _single_unit_variable(expr: LinearExpr) -> bool:
    return expr.constant == 0 and len(expr.terms) == 1 and next(iter(expr.terms.values())) == 1


def _unit_weights(weights) -> bool:
    return weights is None or all(w == 1 for w in weights)


def classify(constraint: TypedConstraint) -> int:
    """Deterministic leaf id for any typed constraint except raw rows.

    Bound-family precedence: conditional > variable-valued bound >
    constant bound; set families are recognized before anything falls
    back to the raw-row escape hatch (which is unclassifiable).
    """
    if isinstance(constraint, ConditionalBound):
        return 3 if constraint.sense is Sense.LE else 9
    if isinstance(constraint, Bound):
        variable_bound = bound_is_expr(constraint.bound) and bool(constraint.bound.terms)
        if constraint.sense is Sense.LE:
            if variable_bound:
                return 2
            return 7 if _single_unit_variable(constraint.expr) else 1
        if variable_bound:
            return 8
        return 5 if _single_unit_variable(constraint.expr) else 4
    if isinstance(constraint, Balance):
        return {
            BalanceFlavor.INTERPERIOD: 12,
            BalanceFlavor.ASSIGNMENT: 13,
            BalanceFlavor.FLOW: 14,
            BalanceFlavor.BLENDING: 15,
            BalanceFlavor.INITIAL: 16,
        }[constraint.flavor]
    if isinstance(constraint, SetPacking):
        return 11 if constraint.rhs == 1 and _unit_weights(constraint.weights) else 20
    if isinstance(constraint, SetPartitioning):
        return 17 if constraint.rhs == 1 and _unit_weights(constraint.weights) else 21
    if isinstance(constraint, SetCovering):
        return 18
    if isinstance(constraint, VariableFix):
        return 19
    if isinstance(constraint, IfThen):
        return 24 if len(constraint.consequents) >= 2 else 23
    if isinstance(constraint, EitherOr):
        return 22
    if isinstance(constraint, RawRow):
        raise ToolkitError("Unclassifiable", "raw rows carry no typology meaning")
    raise ToolkitError("Unclassifiable", f"unknown constraint family {type(constraint).__name__}")


# --------------------------------------------------------------------------
# Canonical serialization (shared with the service and UI)


def tree_to_document(tree: OmtTree) -> dict:
    nodes = []
    for node_id in sorted(tree.nodes):
        node = tree.nodes[node_id]
        template = None
        if node.template is not None:
            template = {
                "family": node.template.family,
                "fixed": node.template.fixed,
                "slots": [{"name": s.name, "kind": s.kind.value} for s in node.template.slots],
            }
        nodes.append({
            "id": node.id,
            "label": node.label,
            "kind": node.kind,
            "question": node.question,
            "children": [{"answer": a, "child": c} for a, c in node.children],
            "template": template,
            "anchored": node.anchored,
        })
    return {"schema_version": TREE_SCHEMA_VERSION, "root": tree.root, "nodes": nodes}


def canonical_tree_json(tree: OmtTree | None = None) -> str:
    """Byte-deterministic serialization; the shipped JSON document equals this."""
    document = tree_to_document(tree or load_tree())
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
