"""Desk-scale case-study models.

Four parameterized builders reconstruct classic application models —
chemical batch scheduling, supply-chain production planning, course
timetabling, and vehicle routing with time windows — at toy scale: all
data are invented small integers chosen so each default model is feasible
and exactly solvable by enumeration. Every constraint carries a
constraint-set label (the published numbering of its source model) and
its tree-node tag; ``expected_node_map`` returns the set -> node table
each model must classify to.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Mapping

from .core import (
    Balance,
    BalanceFlavor,
    Bound,
    ConditionalBound,
    IfThen,
    LinearExpr,
    Model,
    OffBehavior,
    Sense,
    SetPacking,
    SetPartitioning,
    VariableFix,
)
from .errors import ToolkitError

CASE_IDS = (
    "chemical-scheduling",
    "supply-chain-planning",
    "course-timetabling",
    "vrptw-multitrip",
)

_DEFAULT_SCALES: dict[str, dict[str, int]] = {
    "chemical-scheduling": {"units": 2, "tasks": 2, "periods": 2},
    "supply-chain-planning": {"products": 2, "periods": 2},
    "course-timetabling": {"courses": 2, "professors": 2, "slots": 2},
    "vrptw-multitrip": {"customers": 3, "vehicles": 1},
}

_EXPECTED_NODE_MAPS: dict[str, dict[str, list[int]]] = {
    "chemical-scheduling": {"set1": [11], "set2": [3, 9], "set3a": [14], "set3b": [7]},
    "supply-chain-planning": {
        "set1": [12], "set2": [13], "set3": [2, 8], "set4": [3, 9], "set5": [13], "set6": [2, 8],
    },
    "course-timetabling": {
        "set2": [17], "set3": [17],
        "set4": [11], "set5": [11], "set6": [11], "set7": [11], "set8": [11], "set9": [11],
        "set11": [24], "set12": [24], "set13": [24], "set15": [24],
    },
    "vrptw-multitrip": {
        "set1": [17], "set2": [19], "set3": [17], "set4": [17], "set5": [14],
        "set6": [9], "set7": [9], "set8": [3], "set9": [11], "set10": [2],
    },
}


def case_ids() -> list[str]:
    return list(CASE_IDS)


def default_scale(case_id: str) -> dict[str, int]:
    _check_case(case_id)
    return dict(_DEFAULT_SCALES[case_id])


def expected_node_map(case_id: str) -> dict[str, list[int]]:
    _check_case(case_id)
    return {k: list(v) for k, v in _EXPECTED_NODE_MAPS[case_id].items()}


def _check_case(case_id: str) -> None:
    if case_id not in CASE_IDS:
        raise ToolkitError("UnknownCase", f"no case study {case_id!r}", case_id)


def _resolve_scale(case_id: str, scale: Mapping[str, Any] | None) -> dict[str, int]:
    resolved = dict(_DEFAULT_SCALES[case_id])
    for key, value in (scale or {}).items():
        if key not in resolved:
            raise ToolkitError("BadParams", f"unknown scale parameter {key!r} for {case_id}", key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ToolkitError("BadParams", f"scale parameter {key!r} must be a positive integer", key)
        resolved[key] = value
    return resolved


def build(case_id: str, scale: Mapping[str, Any] | None = None) -> Model:
    """Build a case study at the given scale (defaults when omitted)."""
    _check_case(case_id)
    resolved = _resolve_scale(case_id, scale)
    builder = {
        "chemical-scheduling": _build_chemical,
        "supply-chain-planning": _build_supply_chain,
        "course-timetabling": _build_timetabling,
        "vrptw-multitrip": _build_vrptw,
    }[case_id]
    return builder(resolved)


def fixture(case_id: str) -> dict:
    """The shipped fixture: expected node map, a feasible witness, notes."""
    _check_case(case_id)
    data = resources.files("typedmilp").joinpath(f"data/corpus/{case_id}.fixture.json")
    return json.loads(data.read_text(encoding="utf-8"))


def golden_document(case_id: str) -> str:
    """The shipped ModelDocument golden file for the default scale."""
    _check_case(case_id)
    data = resources.files("typedmilp").joinpath(f"data/corpus/{case_id}.model.json")
    return data.read_text(encoding="utf-8")


def node_map_of(model: Model) -> dict[str, list[int]]:
    """Classify a case model's constraints, grouped by constraint-set label.

    Labels follow the convention ``set<k>[-detail]``; the part before the
    first dash names the set.
    """
    from .tree import classify

    grouped: dict[str, set[int]] = {}
    for constraint in model.constraints:
        set_label = constraint.label.split("-", 1)[0]
        grouped.setdefault(set_label, set()).add(classify(constraint))
    return {label: sorted(nodes) for label, nodes in grouped.items()}


def verify_node_map(case_id: str, scale: Mapping[str, Any] | None = None) -> tuple[bool, dict, dict]:
    """(ok, got, expected) for one case's node-map fidelity."""
    model = build(case_id, scale)
    got = node_map_of(model)
    expected = {k: sorted(v) for k, v in expected_node_map(case_id).items()}
    return got == expected, got, expected


# --------------------------------------------------------------------------
# chemical batch scheduling


def _build_chemical(scale: dict[str, int]) -> Model:
    units, tasks, periods = scale["units"], scale["tasks"], scale["periods"]
    if units * tasks * periods > 12:
        raise ToolkitError("ScaleTooLarge", "units x tasks x periods must stay <= 12 for enumeration")
    cap_min, cap_max, store_cap, init_inventory = 1, 2, 2, 1

    model = Model("chemical-scheduling")
    start: dict[tuple[int, int, int], str] = {}
    batch: dict[tuple[int, int, int], str] = {}
    inventory: dict[tuple[int, int], str] = {}
    for t in range(periods):
        for u in range(units):
            for k in range(tasks):
                start[u, k, t] = model.binary(f"start_u{u}_k{k}_t{t}")
        for u in range(units):
            for k in range(tasks):
                batch[u, k, t] = model.integer(f"batch_u{u}_k{k}_t{t}", 0, cap_max)
        for k in range(tasks):
            inventory[k, t] = model.integer(f"inv_k{k}_t{t}", 0, store_cap)

    def demand(k: int, t: int) -> int:
        return 1 if t == (k % periods) else 0

    for u in range(units):
        for t in range(periods):
            model.add_constraint(SetPacking(
                members=tuple(start[u, k, t] for k in range(tasks)),
                rhs=1, label=f"set1-u{u}-t{t}", omt_node=11))
    for u in range(units):
        for k in range(tasks):
            for t in range(periods):
                expr = LinearExpr.var(batch[u, k, t])
                model.add_constraint(ConditionalBound(
                    expr, Sense.LE, Fraction(cap_max), start[u, k, t],
                    OffBehavior.FORCE_ZERO, label=f"set2-max-u{u}-k{k}-t{t}", omt_node=3))
                model.add_constraint(ConditionalBound(
                    expr, Sense.GE, Fraction(cap_min), start[u, k, t],
                    OffBehavior.FORCE_ZERO, label=f"set2-min-u{u}-k{k}-t{t}", omt_node=9))
    for k in range(tasks):
        for t in range(periods):
            produced = LinearExpr.total(batch[u, k, t] for u in range(units))
            if t == 0:
                carried: LinearExpr = LinearExpr(constant=init_inventory)
            else:
                carried = LinearExpr.var(inventory[k, t - 1])
            model.add_constraint(Balance(
                LinearExpr.var(inventory[k, t]),
                carried + produced - demand(k, t),
                BalanceFlavor.FLOW, label=f"set3a-k{k}-t{t}", omt_node=14))
    for k in range(tasks):
        for t in range(periods):
            model.add_constraint(Bound(
                LinearExpr.var(inventory[k, t]), Sense.LE, Fraction(store_cap),
                label=f"set3b-k{k}-t{t}", omt_node=7))

    profit = LinearExpr.weighted((b, Fraction(3)) for b in batch.values())
    holding = LinearExpr.total(inventory.values())
    model.maximize(profit - holding)
    return model


# --------------------------------------------------------------------------
# supply-chain production planning


def _build_supply_chain(scale: dict[str, int]) -> Model:
    products, periods = scale["products"], scale["periods"]
    if products > 3 or periods > 3:
        raise ToolkitError("ScaleTooLarge", "products and periods must stay <= 3 for enumeration")
    quantity_cap = 2

    model = Model("supply-chain-planning")
    cap = [model.integer(f"cap_t{t}", 0, quantity_cap) for t in range(periods)]
    reserved = [model.integer(f"reserved_p{p}", 0, 1) for p in range(products)]
    safety = [model.integer(f"safety_p{p}", 0, 1) for p in range(products)]
    line: dict[tuple[int, int], str] = {}
    produce: dict[tuple[int, int], str] = {}
    ship: dict[tuple[int, int], str] = {}
    carry: dict[tuple[int, int], str] = {}
    total = []
    for t in range(periods):
        for p in range(products):
            line[p, t] = model.binary(f"line_p{p}_t{t}")
            produce[p, t] = model.integer(f"produce_p{p}_t{t}", 0, quantity_cap)
            ship[p, t] = model.integer(f"ship_p{p}_t{t}", 0, quantity_cap)
        for p in range(products):
            carry[p, t] = model.integer(f"carry_p{p}_t{t}", 0, quantity_cap)
        total.append(model.integer(f"total_t{t}", 0, quantity_cap * products))
    end = [model.integer(f"end_p{p}", 0, quantity_cap) for p in range(products)]

    def init_carry(p: int) -> int:
        return 1 if p == 0 else 0

    for p in range(products):
        for t in range(periods):
            prev: LinearExpr = LinearExpr(constant=init_carry(p)) if t == 0 else LinearExpr.var(carry[p, t - 1])
            model.add_constraint(Balance(
                LinearExpr.var(carry[p, t]),
                prev + LinearExpr.var(produce[p, t]) - LinearExpr.var(ship[p, t]),
                BalanceFlavor.INTERPERIOD, label=f"set1-p{p}-t{t}", omt_node=12))
    for t in range(periods):
        model.add_constraint(Balance(
            LinearExpr.var(total[t]),
            LinearExpr.total(ship[p, t] for p in range(products)),
            BalanceFlavor.ASSIGNMENT, label=f"set2-t{t}", omt_node=13))
    for p in range(products):
        for t in range(periods):
            model.add_constraint(Bound(
                LinearExpr.var(produce[p, t]), Sense.LE, LinearExpr.var(cap[t]),
                label=f"set3-cap-p{p}-t{t}", omt_node=2))
            model.add_constraint(Bound(
                LinearExpr.var(produce[p, t]), Sense.GE, LinearExpr.var(reserved[p]),
                label=f"set3-floor-p{p}-t{t}", omt_node=8))
    for p in range(products):
        for t in range(periods):
            expr = LinearExpr.var(produce[p, t])
            model.add_constraint(ConditionalBound(
                expr, Sense.LE, Fraction(quantity_cap), line[p, t],
                OffBehavior.FORCE_ZERO, label=f"set4-max-p{p}-t{t}", omt_node=3))
            model.add_constraint(ConditionalBound(
                expr, Sense.GE, Fraction(1), line[p, t],
                OffBehavior.FORCE_ZERO, label=f"set4-min-p{p}-t{t}", omt_node=9))
    for p in range(products):
        model.add_constraint(Balance(
            LinearExpr.var(end[p]), LinearExpr.var(carry[p, periods - 1]),
            BalanceFlavor.ASSIGNMENT, label=f"set5-p{p}", omt_node=13))
    for p in range(products):
        for t in range(periods):
            model.add_constraint(Bound(
                LinearExpr.var(ship[p, t]), Sense.LE, LinearExpr.var(cap[t]),
                label=f"set6-cap-p{p}-t{t}", omt_node=2))
            model.add_constraint(Bound(
                LinearExpr.var(carry[p, t]), Sense.GE, LinearExpr.var(safety[p]),
                label=f"set6-floor-p{p}-t{t}", omt_node=8))

    revenue = LinearExpr.weighted((s, Fraction(3)) for s in ship.values())
    holding = LinearExpr.total(carry.values())
    capacity_rent = LinearExpr.total(cap)
    model.maximize(revenue - holding - capacity_rent)
    return model


# --------------------------------------------------------------------------
# course timetabling


def _build_timetabling(scale: dict[str, int]) -> Model:
    courses, professors, slots = scale["courses"], scale["professors"], scale["slots"]
    if courses != professors:
        raise ToolkitError("BadParams", "this reconstruction needs courses == professors")
    if slots < courses:
        raise ToolkitError("BadParams", "needs at least as many slots as courses")
    if courses > 3 or slots > 3:
        raise ToolkitError("ScaleTooLarge", "courses and slots must stay <= 3 for enumeration")

    model = Model("course-timetabling")
    assign: dict[tuple[int, int, int], str] = {}
    for c in range(courses):
        for p in range(professors):
            for s in range(slots):
                assign[c, p, s] = model.binary(f"assign_c{c}_p{p}_s{s}")
    lab = [model.binary(f"lab_s{s}") for s in range(slots)]
    projector = [model.binary(f"proj_s{s}") for s in range(slots)]
    tech = [model.binary(f"tech_s{s}") for s in range(slots)]

    for c in range(courses):
        model.add_constraint(SetPartitioning(
            members=tuple(assign[c, p, s] for p in range(professors) for s in range(slots)),
            rhs=1, label=f"set2-c{c}", omt_node=17))
    for p in range(professors):
        model.add_constraint(SetPartitioning(
            members=tuple(assign[c, p, s] for c in range(courses) for s in range(slots)),
            rhs=1, label=f"set3-p{p}", omt_node=17))
    for p in range(professors):
        for s in range(slots):
            model.add_constraint(SetPacking(
                members=tuple(assign[c, p, s] for c in range(courses)),
                rhs=1, label=f"set4-p{p}-s{s}", omt_node=11))
    for c in range(courses):
        for s in range(slots):
            model.add_constraint(SetPacking(
                members=tuple(assign[c, p, s] for p in range(professors)),
                rhs=1, label=f"set5-c{c}-s{s}", omt_node=11))
    for c in range(courses):
        for p in range(professors):
            model.add_constraint(SetPacking(
                members=tuple(assign[c, p, s] for s in range(slots)),
                rhs=1, label=f"set6-c{c}-p{p}", omt_node=11))
    for s in range(slots):
        model.add_constraint(SetPacking(
            members=tuple(assign[c, p, s] for c in range(courses) for p in range(professors)),
            rhs=1, label=f"set7-s{s}", omt_node=11))
    for p in range(professors):
        model.add_constraint(SetPacking(
            members=tuple(assign[c, p, s] for c in range(courses) for s in range(slots)),
            rhs=1, label=f"set8-p{p}", omt_node=11))
    for c in range(courses):
        model.add_constraint(SetPacking(
            members=tuple(assign[c, p, s] for p in range(professors) for s in range(slots)),
            rhs=1, label=f"set9-c{c}", omt_node=11))

    c_b, p_b = courses - 1, professors - 1  # the "other" course/professor
    for s in range(slots):
        model.add_constraint(IfThen(
            (assign[0, 0, s],), (lab[s], projector[s]),
            label=f"set11-s{s}", omt_node=24))
    for s in range(slots):
        model.add_constraint(IfThen(
            (assign[c_b, p_b, s],), (lab[s], projector[s]),
            label=f"set12-s{s}", omt_node=24))
    for s in range(slots):
        model.add_constraint(IfThen(
            (assign[0, p_b, s],), (projector[s], tech[s]),
            label=f"set13-s{s}", omt_node=24))
    for s in range(slots):
        model.add_constraint(IfThen(
            (assign[c_b, 0, s], assign[0, p_b, s]), (tech[s], lab[s]),
            label=f"set15-s{s}", omt_node=24))

    preference = LinearExpr.weighted(
        (assign[c, p, s], Fraction(2 + (c + p + s) % 2))
        for c in range(courses) for p in range(professors) for s in range(slots)
    )
    resources_open = LinearExpr.total(lab + projector + tech)
    model.maximize(preference - resources_open)
    return model


# --------------------------------------------------------------------------
# vehicle routing with time windows


_VRPTW_DATA: dict[int, dict[str, Any]] = {
    2: {
        "travel": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
        "earliest": [0, 1, 2],
        "latest": [0, 2, 3],
        "horizon": 4,
        "budget_cap": 8,
    },
    3: {
        "travel": [[0, 1, 2, 2], [1, 0, 1, 2], [2, 1, 0, 1], [2, 2, 1, 0]],
        "earliest": [0, 1, 2, 4],
        "latest": [0, 3, 4, 6],
        "horizon": 6,
        "budget_cap": 12,
    },
    4: {
        "travel": [
            [0, 1, 2, 2, 1],
            [1, 0, 1, 2, 2],
            [2, 1, 0, 1, 2],
            [2, 2, 1, 0, 1],
            [1, 2, 2, 1, 0],
        ],
        "earliest": [0, 1, 2, 3, 4],
        "latest": [0, 3, 4, 5, 6],
        "horizon": 6,
        "budget_cap": 12,
    },
}


def _build_vrptw(scale: dict[str, int]) -> Model:
    customers, vehicles = scale["customers"], scale["vehicles"]
    if vehicles != 1:
        raise ToolkitError("ScaleTooLarge", "multi-vehicle scales exceed desk-scale enumeration; use vehicles=1")
    if customers not in _VRPTW_DATA:
        raise ToolkitError("ScaleTooLarge", f"customers must be one of {sorted(_VRPTW_DATA)}")
    data = _VRPTW_DATA[customers]
    travel: list[list[int]] = data["travel"]
    earliest: list[int] = data["earliest"]
    latest: list[int] = data["latest"]
    n = customers + 1  # node 0 is the depot

    model = Model("vrptw-multitrip")
    arc: dict[tuple[int, int], str] = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                arc[i, j] = model.binary(f"x_{i}_{j}")
    time = [
        model.integer(f"t_{i}", 0, 0 if i == 0 else data["horizon"])
        for i in range(n)
    ]
    budget = model.integer("budget", 0, data["budget_cap"])

    for i in range(1, n):
        model.add_constraint(SetPartitioning(
            members=tuple(arc[j, i] for j in range(n) if j != i),
            rhs=1, label=f"set1-in-{i}", omt_node=17))
    impossible = [
        (j, i)
        for j in range(1, n)
        for i in range(1, n)
        if j != i and earliest[j] + travel[j][i] > latest[i]
    ]
    for j, i in impossible:
        model.add_constraint(VariableFix(
            arc[j, i], Fraction(0), label=f"set2-x{j}-{i}", omt_node=19))
    for i in range(1, n):
        model.add_constraint(SetPartitioning(
            members=tuple(arc[i, j] for j in range(n) if j != i),
            rhs=1, label=f"set3-out-{i}", omt_node=17))
    model.add_constraint(SetPartitioning(
        members=tuple(arc[0, j] for j in range(1, n)),
        rhs=1, label="set4-depot-out", omt_node=17))
    model.add_constraint(SetPartitioning(
        members=tuple(arc[j, 0] for j in range(1, n)),
        rhs=1, label="set4-depot-in", omt_node=17))
    for i in range(1, n):
        model.add_constraint(Balance(
            LinearExpr.total(arc[j, i] for j in range(n) if j != i),
            LinearExpr.total(arc[i, j] for j in range(n) if j != i),
            BalanceFlavor.FLOW, label=f"set5-{i}", omt_node=14))
    for i in range(n):
        for j in range(1, n):
            if i == j:
                continue
            model.add_constraint(ConditionalBound(
                LinearExpr.var(time[j]), Sense.GE,
                LinearExpr.var(time[i]) + travel[i][j], arc[i, j],
                OffBehavior.FREE, label=f"set6-{i}-{j}", omt_node=9))
    for i in range(n):
        for j in range(1, n):
            if i == j:
                continue
            model.add_constraint(ConditionalBound(
                LinearExpr.var(time[j]), Sense.GE, Fraction(earliest[j]), arc[i, j],
                OffBehavior.FREE, label=f"set7-{i}-{j}", omt_node=9))
    for i in range(n):
        for j in range(1, n):
            if i == j:
                continue
            model.add_constraint(ConditionalBound(
                LinearExpr.var(time[j]), Sense.LE, Fraction(latest[j]), arc[i, j],
                OffBehavior.FREE, label=f"set8-{i}-{j}", omt_node=3))
    far = tuple(arc[0, j] for j in range(1, n) if travel[0][j] >= 2)
    model.add_constraint(SetPacking(
        members=far, rhs=1, label="set9-far-first", omt_node=11))
    total_travel = LinearExpr.weighted(
        ((arc[i, j], Fraction(travel[i][j])) for (i, j) in arc),
    )
    model.add_constraint(Bound(
        total_travel, Sense.LE, LinearExpr.var(budget),
        label="set10-budget", omt_node=2))

    model.minimize(total_travel + LinearExpr.var(budget))
    return model
