"""Implicit-constraint mappings.

Some requirements ("visit every city exactly once and come home") have no
direct constraint counterpart; a modeller applies a known reformulation
instead. This registry holds named, parameterized expansions from such
requirements to typed constraints, each tagged with its tree nodes.

Registered mappings:

* ``atsp-tour`` — a closed tour over n cities given an n x n matrix of
  binary arc variables (diagonal excluded). Expands to per-city outgoing
  and incoming exactly-one rows (assignment part) and, for every vertex
  subset S with 2 <= |S| <= n-1, an at-least-one row over the arcs that
  leave S (subtour elimination in cut form, literally a covering row).
* ``routing-flow-balance`` — "whoever is visited has a predecessor and a
  successor": per node, in-degree equals out-degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any, Mapping, Sequence

from .core import (
    Balance,
    BalanceFlavor,
    LinearExpr,
    Model,
    SetCovering,
    SetPartitioning,
    TypedConstraint,
    Variable,
    VarKind,
)
from .errors import ToolkitError
from .tree import SlotKind, SlotSpec

#: Largest tour size the registry will expand (the subset family is
#: exponential; n=12 keeps the worst case under ~4100 rows).
MAX_TOUR_CITIES = 12


@dataclass(frozen=True)
class ImplicitMapping:
    id: str
    description: str
    parameters: tuple[SlotSpec, ...]
    target_nodes: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "parameters": [{"name": s.name, "kind": s.kind.value} for s in self.parameters],
            "target_nodes": list(self.target_nodes),
        }


@dataclass(frozen=True)
class ExpansionResult:
    new_variables: tuple[Variable, ...]
    constraints: tuple[TypedConstraint, ...]


_MAPPINGS: tuple[ImplicitMapping, ...] = (
    ImplicitMapping(
        id="atsp-tour",
        description=(
            "visit every city exactly once and return home; params: "
            "'arcs' = n x n row-major matrix of binary arc variable ids "
            "with null on the diagonal (arcs[i][j] = travel i -> j)"
        ),
        parameters=(SlotSpec("arcs", SlotKind.VARIABLE_LIST),),
        target_nodes=(17, 18),
    ),
    ImplicitMapping(
        id="routing-flow-balance",
        description=(
            "every visited point has one predecessor and one successor; "
            "params: 'arcs' as in atsp-tour"
        ),
        parameters=(SlotSpec("arcs", SlotKind.VARIABLE_LIST),),
        target_nodes=(14,),
    ),
)


def list_mappings() -> list[ImplicitMapping]:
    """Stable, deterministic registry listing."""
    return list(_MAPPINGS)


def get_mapping(mapping_id: str) -> ImplicitMapping:
    for mapping in _MAPPINGS:
        if mapping.id == mapping_id:
            return mapping
    raise ToolkitError("UnknownMapping", f"no implicit mapping {mapping_id!r}", mapping_id)


def _arc_matrix(model: Model, params: Mapping[str, Any], minimum: int) -> list[list[str | None]]:
    if "arcs" not in params:
        raise ToolkitError("BadParams", "missing 'arcs' matrix parameter")
    arcs = params["arcs"]
    if not isinstance(arcs, Sequence) or isinstance(arcs, str):
        raise ToolkitError("BadParams", "'arcs' must be an n x n matrix of variable ids")
    n = len(arcs)
    if "n" in params and params["n"] != n:
        raise ToolkitError("BadParams", f"'n'={params['n']} does not match the {n} x {n} matrix")
    extra = set(params) - {"arcs", "n"}
    if extra:
        raise ToolkitError("BadParams", f"unknown parameters: {sorted(extra)}")
    if n < minimum:
        raise ToolkitError("BadParams", f"needs at least {minimum} cities, got {n}")
    matrix: list[list[str | None]] = []
    for i, row in enumerate(arcs):
        if not isinstance(row, Sequence) or isinstance(row, str) or len(row) != n:
            raise ToolkitError("BadParams", f"row {i} is not a length-{n} list")
        out_row: list[str | None] = []
        for j, entry in enumerate(row):
            if i == j:
                if entry is not None:
                    raise ToolkitError("BadParams", f"diagonal entry [{i}][{j}] must be null")
                out_row.append(None)
                continue
            if not isinstance(entry, str):
                raise ToolkitError("BadParams", f"entry [{i}][{j}] is not a variable id")
            if not model.has_variable(entry):
                raise ToolkitError("BadParams", f"arc variable {entry!r} is not in the model", entry)
            if model.variable(entry).kind is not VarKind.BINARY:
                raise ToolkitError("BadParams", f"arc variable {entry!r} must be binary", entry)
            out_row.append(entry)
        matrix.append(out_row)
    return matrix


def expand(model: Model, mapping_id: str, params: Mapping[str, Any]) -> ExpansionResult:
    """Expand a mapping against a model's variables (pure; nothing is added)."""
    get_mapping(mapping_id)
    if mapping_id == "atsp-tour":
        return _expand_atsp(model, params)
    return _expand_flow_balance(model, params)


def _expand_atsp(model: Model, params: Mapping[str, Any]) -> ExpansionResult:
    matrix = _arc_matrix(model, params, minimum=3)
    n = len(matrix)
    if n > MAX_TOUR_CITIES:
        raise ToolkitError("TooLarge", f"{n} cities exceed the cap of {MAX_TOUR_CITIES}")
    constraints: list[TypedConstraint] = []
    for i in range(n):
        members = tuple(matrix[i][j] for j in range(n) if j != i)
        constraints.append(SetPartitioning(
            members=members, rhs=1, label=f"tour-out-{i}", omt_node=17))
    for j in range(n):
        members = tuple(matrix[i][j] for i in range(n) if i != j)
        constraints.append(SetPartitioning(
            members=members, rhs=1, label=f"tour-in-{j}", omt_node=17))
    for size in range(2, n):
        for subset in combinations(range(n), size):
            inside = set(subset)
            members = tuple(
                matrix[i][j]
                for i in subset
                for j in range(n)
                if j not in inside
            )
            tag = "-".join(str(i) for i in subset)
            constraints.append(SetCovering(
                members=members, rhs=1, label=f"tour-cut-{tag}", omt_node=18))
    return ExpansionResult(new_variables=(), constraints=tuple(constraints))


def _expand_flow_balance(model: Model, params: Mapping[str, Any]) -> ExpansionResult:
    matrix = _arc_matrix(model, params, minimum=2)
    n = len(matrix)
    constraints: list[TypedConstraint] = []
    for i in range(n):
        inbound = LinearExpr.total(matrix[j][i] for j in range(n) if j != i)
        outbound = LinearExpr.total(matrix[i][j] for j in range(n) if j != i)
        constraints.append(Balance(
            inbound, outbound, BalanceFlavor.FLOW,
            label=f"degree-balance-{i}", omt_node=14))
    return ExpansionResult(new_variables=(), constraints=tuple(constraints))
