"""Exact-arithmetic model core.

A :class:`Model` holds decision variables, an optional linear objective,
and an ordered list of *typed* constraints. Constraints are kept at the
semantic level (set packing, balance, conditional bound, …) rather than as
raw rows; the lowering module compiles them to canonical linear form.

All coefficients, bounds, and values are :class:`fractions.Fraction`, so
evaluation never rounds and structural equality is decidable.

Diagnostic codes (closed set)
-----------------------------
errors:   DuplicateName, ReservedName, InvalidBounds, UnknownVariable,
          NonBinaryLiteral, EmptyMemberList, WeightCountMismatch,
          InvalidRhs, TooFewAlternatives, InvalidSense
warnings: RawRowUsed, BigMUnderivable
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ToolkitError
from .rationals import rat

#: Reserved prefix for auxiliary binaries introduced by lowering.
AUX_PREFIX = "__aux"

Assignment = Mapping[str, Fraction]
Bounds = Mapping[str, tuple[Fraction | None, Fraction | None]]


class VarKind(str, enum.Enum):
    BINARY = "binary"
    INTEGER = "integer"
    CONTINUOUS = "continuous"


class Sense(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Direction(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class OffBehavior(str, enum.Enum):
    """What a conditional bound requires while its indicator is 0."""

    FORCE_ZERO = "force_zero"
    FREE = "free"


class BalanceFlavor(str, enum.Enum):
    INTERPERIOD = "interperiod"
    ASSIGNMENT = "assignment"
    FLOW = "flow"
    BLENDING = "blending"
    INITIAL = "initial"


@dataclass(frozen=True)
class Variable:
    id: str
    name: str
    kind: VarKind
    lower: Fraction | None  # None = -infinity
    upper: Fraction | None  # None = +infinity


class LinearExpr:
    """A finite map variable id -> coefficient, plus a constant.

    Zero coefficients are never stored, so equality of expressions is
    structural equality of the reduced form. Instances support +, -, and
    scalar *; they are treated as immutable once built.
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Mapping[str, Fraction] | None = None, constant=0):
        reduced: dict[str, Fraction] = {}
        for var, coeff in (terms or {}).items():
            c = rat(coeff)
            if c != 0:
                reduced[var] = c
        self.terms = reduced
        self.constant = rat(constant)

    @classmethod
    def var(cls, var_id: str, coeff=1) -> "LinearExpr":
        return cls({var_id: rat(coeff)})

    @classmethod
    def weighted(cls, pairs: Iterable[tuple[str, Fraction]], constant=0) -> "LinearExpr":
        acc: dict[str, Fraction] = {}
        for var, coeff in pairs:
            acc[var] = acc.get(var, Fraction(0)) + rat(coeff)
        return cls(acc, constant)

    @classmethod
    def total(cls, var_ids: Iterable[str]) -> "LinearExpr":
        return cls.weighted((v, Fraction(1)) for v in var_ids)

    def variables(self) -> set[str]:
        return set(self.terms)

    def evaluate(self, assignment: Assignment) -> Fraction:
        acc = self.constant
        for var, coeff in self.terms.items():
            if var not in assignment:
                raise ToolkitError("MissingValue", f"assignment misses variable {var!r}", var)
            acc += coeff * rat(assignment[var])
        return acc

    def __add__(self, other: "LinearExpr | Fraction | int") -> "LinearExpr":
        other = as_expr(other)
        acc = dict(self.terms)
        for var, coeff in other.terms.items():
            acc[var] = acc.get(var, Fraction(0)) + coeff
        return LinearExpr(acc, self.constant + other.constant)

    def __sub__(self, other: "LinearExpr | Fraction | int") -> "LinearExpr":
        return self + (-as_expr(other))

    def __neg__(self) -> "LinearExpr":
        return LinearExpr({v: -c for v, c in self.terms.items()}, -self.constant)

    def __mul__(self, scalar) -> "LinearExpr":
        s = rat(scalar)
        return LinearExpr({v: c * s for v, c in self.terms.items()}, self.constant * s)

    __rmul__ = __mul__

    def __radd__(self, other) -> "LinearExpr":
        return self + other

    def __rsub__(self, other) -> "LinearExpr":
        return (-self) + other

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearExpr)
            and self.terms == other.terms
            and self.constant == other.constant
        )

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.constant))

    def __repr__(self):
        parts = [f"{c}*{v}" for v, c in self.terms.items()]
        if self.constant != 0 or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts)


def as_expr(value) -> LinearExpr:
    if isinstance(value, LinearExpr):
        return value
    return LinearExpr(constant=rat(value))


#: A bound is either a constant (Fraction) or a linear expression.
BoundSpec = Union[Fraction, LinearExpr]


def bound_as_expr(bound: BoundSpec) -> LinearExpr:
    return bound if isinstance(bound, LinearExpr) else LinearExpr(constant=bound)


def bound_is_expr(bound: BoundSpec) -> bool:
    return isinstance(bound, LinearExpr)


# --------------------------------------------------------------------------
# Typed constraints


@dataclass(frozen=True)
class TypedConstraint:
    """Base for all constraint families; carries shared metadata."""

    label: str = field(default="", kw_only=True)
    omt_node: int | None = field(default=None, kw_only=True)

    def variables(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Bound(TypedConstraint):
    """expr <= bound (supply/capacity) or expr >= bound (demand)."""

    expr: LinearExpr
    sense: Sense
    bound: BoundSpec

    def __post_init__(self):
        if not isinstance(self.bound, LinearExpr):
            object.__setattr__(self, "bound", rat(self.bound))

    def variables(self) -> set[str]:
        return self.expr.variables() | bound_as_expr(self.bound).variables()


@dataclass(frozen=True)
class ConditionalBound(TypedConstraint):
    """A bound that applies only while a binary indicator is 1.

    With FORCE_ZERO the expression must equal 0 while the indicator is 0;
    with FREE it is unconstrained (classical big-M relaxation).
    """

    expr: LinearExpr
    sense: Sense
    bound: BoundSpec
    indicator: str
    off_behavior: OffBehavior = OffBehavior.FORCE_ZERO

    def __post_init__(self):
        if not isinstance(self.bound, LinearExpr):
            object.__setattr__(self, "bound", rat(self.bound))

    def variables(self) -> set[str]:
        return self.expr.variables() | bound_as_expr(self.bound).variables() | {self.indicator}


@dataclass(frozen=True)
class Balance(TypedConstraint):
    """lhs = rhs; the flavor records usage, not different algebra."""

    lhs: LinearExpr
    rhs: LinearExpr
    flavor: BalanceFlavor

    def variables(self) -> set[str]:
        return self.lhs.variables() | self.rhs.variables()


@dataclass(frozen=True)
class _SetFamily(TypedConstraint):
    members: tuple[str, ...]
    weights: tuple[Fraction, ...] | None = None
    rhs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(rat(w) for w in self.weights))

    def effective_weights(self) -> tuple[Fraction, ...]:
        if self.weights is not None:
            return self.weights
        return tuple(Fraction(1) for _ in self.members)

    def variables(self) -> set[str]:
        return set(self.members)


@dataclass(frozen=True)
class SetPacking(_SetFamily):
    """Choose at most rhs out of the members (weighted sum <= rhs)."""

    row_sense = Sense.LE


@dataclass(frozen=True)
class SetPartitioning(_SetFamily):
    """Choose exactly rhs out of the members (weighted sum = rhs)."""

    row_sense = Sense.EQ


@dataclass(frozen=True)
class SetCovering(_SetFamily):
    """Choose at least rhs out of the members (weighted sum >= rhs)."""

    row_sense = Sense.GE


@dataclass(frozen=True)
class VariableFix(TypedConstraint):
    var: str
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", rat(self.value))

    def variables(self) -> set[str]:
        return {self.var}


@dataclass(frozen=True)
class IfThen(TypedConstraint):
    """If every antecedent is 1 then every consequent must be 1."""

    antecedents: tuple[str, ...]
    consequents: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))
        object.__setattr__(self, "consequents", tuple(self.consequents))

    def variables(self) -> set[str]:
        return set(self.antecedents) | set(self.consequents)


@dataclass(frozen=True)
class Alternative:
    expr: LinearExpr
    sense: Sense
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", rat(self.rhs))


@dataclass(frozen=True)
class EitherOr(TypedConstraint):
    """At least one alternative (expr sense rhs) must hold."""

    alternatives: tuple[Alternative, ...]

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for alt in self.alternatives:
            out |= alt.expr.variables()
        return out


@dataclass(frozen=True)
class RawRow(TypedConstraint):
    """Escape hatch for rows the typology does not name (warns on validate)."""

    expr: LinearExpr
    sense: Sense
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", rat(self.rhs))

    def variables(self) -> set[str]:
        return self.expr.variables()


@dataclass(frozen=True)
class Objective:
    direction: Direction
    expr: LinearExpr


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    subject: str  # variable or constraint id

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "subject": self.subject,
        }


# --------------------------------------------------------------------------
# Model


class Model:
    """Mutable builder with stable variable/constraint ids.

    Variable ids equal their (unique) names; constraint ids are
    ``c<index>`` in insertion order. Insertion order is preserved and
    determines emission order.
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[TypedConstraint] = []
        self.objective: Objective | None = None
        self._by_id: dict[str, Variable] = {}

    # -- variables ----------------------------------------------------

    def add_variable(self, name: str, kind: VarKind | str, lower=None, upper=None) -> str:
        kind = VarKind(kind)
        if name in self._by_id:
            raise ToolkitError("DuplicateName", f"variable name {name!r} already used", name)
        if name.startswith(AUX_PREFIX):
            raise ToolkitError("ReservedName", f"{AUX_PREFIX!r} prefix is reserved for auxiliaries", name)
        lo = None if lower is None else rat(lower)
        hi = None if upper is None else rat(upper)
        if kind is VarKind.BINARY:
            if lo is None:
                lo = Fraction(0)
            if hi is None:
                hi = Fraction(1)
            if lo != 0 or hi != 1:
                raise ToolkitError("InvalidBounds", f"binary {name!r} must have bounds [0,1]", name)
        if lo is not None and hi is not None and lo > hi:
            raise ToolkitError("InvalidBounds", f"lower {lo} > upper {hi} for {name!r}", name)
        var = Variable(id=name, name=name, kind=kind, lower=lo, upper=hi)
        self.variables.append(var)
        self._by_id[name] = var
        return var.id

    def binary(self, name: str) -> str:
        return self.add_variable(name, VarKind.BINARY, 0, 1)

    def integer(self, name: str, lower=None, upper=None) -> str:
        return self.add_variable(name, VarKind.INTEGER, lower, upper)

    def continuous(self, name: str, lower=None, upper=None) -> str:
        return self.add_variable(name, VarKind.CONTINUOUS, lower, upper)

    def variable(self, var_id: str) -> Variable:
        try:
            return self._by_id[var_id]
        except KeyError:
            raise ToolkitError("UnknownVariable", f"no variable {var_id!r}", var_id) from None

    def has_variable(self, var_id: str) -> bool:
        return var_id in self._by_id

    def bounds(self) -> dict[str, tuple[Fraction | None, Fraction | None]]:
        return {v.id: (v.lower, v.upper) for v in self.variables}

    # -- constraints ----------------------------------------------------

    def add_constraint(self, constraint: TypedConstraint) -> str:
        cid = f"c{len(self.constraints)}"
        for diag in _constraint_diagnostics(self, constraint, cid):
            if diag.severity == "error":
                raise ToolkitError(diag.code, diag.message, diag.subject)
        self.constraints.append(constraint)
        return cid

    def constraint_ids(self) -> list[str]:
        return [f"c{i}" for i in range(len(self.constraints))]

    def constraint(self, cid: str) -> TypedConstraint:
        if cid.startswith("c") and cid[1:].isdigit():
            index = int(cid[1:])
            if index < len(self.constraints):
                return self.constraints[index]
        raise ToolkitError("UnknownConstraint", f"no constraint {cid!r}", cid)

    # -- objective ----------------------------------------------------

    def set_objective(self, direction: Direction | str, expr: LinearExpr) -> None:
        direction = Direction(direction)
        for var in sorted(expr.variables()):
            if var not in self._by_id:
                raise ToolkitError("UnknownVariable", f"objective references unknown {var!r}", var)
        self.objective = Objective(direction, expr)

    def maximize(self, expr: LinearExpr) -> None:
        self.set_objective(Direction.MAX, expr)

    def minimize(self, expr: LinearExpr) -> None:
        self.set_objective(Direction.MIN, expr)

    # -- misc ----------------------------------------------------

    def validate(self) -> list[Diagnostic]:
        return validate(self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Model)
            and self.name == other.name
            and self.variables == other.variables
            and self.constraints == other.constraints
            and self.objective == other.objective
        )

    def __repr__(self):
        return f"Model({self.name!r}, {len(self.variables)} vars, {len(self.constraints)} constraints)"


# --------------------------------------------------------------------------
# Evaluation and interval arithmetic


def evaluate_expr(expr: LinearExpr, assignment: Assignment) -> Fraction:
    """constant + sum(coeff * value), exact."""
    return expr.evaluate(assignment)


def expr_range(expr: LinearExpr, bounds: Bounds) -> tuple[Fraction | None, Fraction | None]:
    """Interval [inf, sup] of expr over the variable box (None = unbounded).

    Coefficient-signed bound selection: a positive coefficient takes the
    variable's upper bound for the sup and lower for the inf; negative
    coefficients swap.
    """
    lo: Fraction | None = expr.constant
    hi: Fraction | None = expr.constant
    for var, coeff in expr.terms.items():
        if var not in bounds:
            raise ToolkitError("UnknownVariable", f"no bounds for {var!r}", var)
        vlo, vhi = bounds[var]
        lo_side = vlo if coeff > 0 else vhi
        hi_side = vhi if coeff > 0 else vlo
        lo = None if (lo is None or lo_side is None) else lo + coeff * lo_side
        hi = None if (hi is None or hi_side is None) else hi + coeff * hi_side
    return lo, hi


# --------------------------------------------------------------------------
# Validation


def validate(model: Model) -> list[Diagnostic]:
    """Deterministic diagnostics, ordered by subject insertion order.

    Empty iff the model is well-formed; errors never raise here (they are
    returned), so parsed or hand-assembled models can be inspected.
    """
    out: list[Diagnostic] = []
    seen: dict[str, int] = {}
    for var in model.variables:
        if var.name in seen:
            out.append(Diagnostic("error", "DuplicateName", f"variable name {var.name!r} reused", var.name))
        seen[var.name] = 1
        if var.name.startswith(AUX_PREFIX):
            out.append(Diagnostic("error", "ReservedName", f"{var.name!r} uses the reserved auxiliary prefix", var.name))
        if var.kind is VarKind.BINARY and (var.lower != 0 or var.upper != 1):
            out.append(Diagnostic("error", "InvalidBounds", f"binary {var.name!r} must have bounds [0,1]", var.name))
        elif var.lower is not None and var.upper is not None and var.lower > var.upper:
            out.append(Diagnostic("error", "InvalidBounds", f"lower > upper for {var.name!r}", var.name))
    for i, constraint in enumerate(model.constraints):
        out.extend(_constraint_diagnostics(model, constraint, f"c{i}"))
    if model.objective is not None:
        for var in sorted(model.objective.expr.variables()):
            if not model.has_variable(var):
                out.append(Diagnostic("error", "UnknownVariable", f"objective references unknown {var!r}", "objective"))
    return out


def _unknowns(model: Model, cid: str, var_ids: Iterable[str]) -> Iterator[Diagnostic]:
    for var in var_ids:
        if not model.has_variable(var):
            yield Diagnostic("error", "UnknownVariable", f"constraint references unknown {var!r}", cid)


def _non_binary(model: Model, cid: str, var_ids: Iterable[str], role: str) -> Iterator[Diagnostic]:
    for var in var_ids:
        if model.has_variable(var) and model.variable(var).kind is not VarKind.BINARY:
            yield Diagnostic("error", "NonBinaryLiteral", f"{role} {var!r} must be binary", cid)


def _ordered_vars(constraint: TypedConstraint) -> list[str]:
    return sorted(constraint.variables())


def _needed_sides_finite(expr: LinearExpr, bounds: Bounds, want_sup: bool) -> bool:
    lo, hi = expr_range(expr, bounds)
    return (hi is not None) if want_sup else (lo is not None)


def _constraint_diagnostics(model: Model, constraint: TypedConstraint, cid: str) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    out.extend(_unknowns(model, cid, _ordered_vars(constraint)))
    if any(d.code == "UnknownVariable" for d in out):
        return out  # later checks need resolvable variables

    if isinstance(constraint, (Bound, ConditionalBound)):
        if constraint.sense is Sense.EQ:
            out.append(Diagnostic("error", "InvalidSense", "bound constraints use <= or >=", cid))
    if isinstance(constraint, ConditionalBound):
        out.extend(_non_binary(model, cid, [constraint.indicator], "indicator"))
        if not out:
            out.extend(_big_m_warnings(model, constraint, cid))
    elif isinstance(constraint, _SetFamily):
        if not constraint.members:
            out.append(Diagnostic("error", "EmptyMemberList", "set constraint has no members", cid))
        if constraint.weights is not None and len(constraint.weights) != len(constraint.members):
            out.append(Diagnostic("error", "WeightCountMismatch", "weights and members differ in length", cid))
        if not isinstance(constraint.rhs, int) or isinstance(constraint.rhs, bool) or constraint.rhs < 1:
            out.append(Diagnostic("error", "InvalidRhs", "set constraint rhs must be a positive integer", cid))
        out.extend(_non_binary(model, cid, constraint.members, "member"))
    elif isinstance(constraint, IfThen):
        if not constraint.antecedents or not constraint.consequents:
            out.append(Diagnostic("error", "EmptyMemberList", "if-then needs antecedents and consequents", cid))
        out.extend(_non_binary(model, cid, list(constraint.antecedents) + list(constraint.consequents), "literal"))
    elif isinstance(constraint, EitherOr):
        if len(constraint.alternatives) < 2:
            out.append(Diagnostic("error", "TooFewAlternatives", "either-or needs at least two alternatives", cid))
        for alt in constraint.alternatives:
            if alt.sense is Sense.EQ:
                out.append(Diagnostic("error", "InvalidSense", "either-or alternatives use <= or >=", cid))
        if not out:
            bounds = model.bounds()
            for k, alt in enumerate(constraint.alternatives):
                if not _needed_sides_finite(alt.expr, bounds, want_sup=alt.sense is Sense.LE):
                    out.append(Diagnostic(
                        "warning", "BigMUnderivable",
                        f"alternative {k} ranges over an unbounded variable; lowering will fail", cid))
    elif isinstance(constraint, RawRow):
        out.append(Diagnostic("warning", "RawRowUsed", "raw row bypasses the constraint typology", cid))
    return out


def _big_m_warnings(model: Model, constraint: ConditionalBound, cid: str) -> list[Diagnostic]:
    bounds = model.bounds()
    moved = constraint.expr - bound_as_expr(constraint.bound)
    out: list[Diagnostic] = []
    needed: list[tuple[LinearExpr, bool]] = []
    if constraint.off_behavior is OffBehavior.FREE:
        needed.append((moved, constraint.sense is Sense.LE))
    else:
        lo, hi = expr_range(constraint.expr, bounds)
        if constraint.sense is Sense.GE:
            needed.append((constraint.expr, True))  # sup for the off-state upper row
        else:
            if lo is None or lo < 0:
                needed.append((constraint.expr, False))  # inf for the off-state lower row
        if bound_is_expr(constraint.bound):
            # general gated on-row needs a big-M over the moved expression
            needed.append((moved, constraint.sense is Sense.LE))
    for expr, want_sup in needed:
        if not _needed_sides_finite(expr, bounds, want_sup):
            side = "upper" if want_sup else "lower"
            out.append(Diagnostic(
                "warning", "BigMUnderivable",
                f"conditional bound needs a finite {side} range; a variable box is unbounded", cid))
            break
    return out
