"""Compile typed constraints to canonical linear rows.

Every family lowers to rows ``sum(coeff*var) {<=,=,>=} rhs``. Logic
families need big-M constants; these are always derived per row from the
variable boxes (interval arithmetic, exact in rationals), never a global
magic number — that keeps the relaxations as tight as the box allows.

Conditional bounds honor their off-behavior exactly: with FORCE_ZERO the
lowered rows pin the expression to 0 while the indicator is 0 (extra
indicator-gated rows are emitted when the box admits values on the far
side); with FREE the single row is relaxed by M*(1-indicator).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

from .core import (
    AUX_PREFIX,
    Balance,
    Bound,
    Bounds,
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
    TypedConstraint,
    Variable,
    VariableFix,
    VarKind,
    _SetFamily,
    bound_as_expr,
    bound_is_expr,
    expr_range,
    rat,
    validate,
)
from .errors import ToolkitError, ValidationFailed


@dataclass(frozen=True)
class CanonicalRow:
    coefficients: dict[str, Fraction]
    sense: Sense
    rhs: Fraction
    source: str | None = None
    omt_node: int | None = None
    label: str = ""


@dataclass
class CanonicalForm:
    """Lowered model: variables (model order, then auxiliaries), rows, objective."""

    variables: list[Variable]
    rows: list[CanonicalRow]
    objective: Objective
    name: str = "model"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CanonicalForm)
            and self.variables == other.variables
            and self.rows == other.rows
            and self.objective == other.objective
            and self.name == other.name
        )


class IfThenStrength(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class LowerOptions:
    if_then_strength: IfThenStrength = IfThenStrength.STRONG
    conditional_style: str = "derived"  # big-M constants come from variable boxes

    def __post_init__(self):
        object.__setattr__(self, "if_then_strength", IfThenStrength(self.if_then_strength))
        if self.conditional_style != "derived":
            raise ToolkitError("BadParams", f"unknown conditional style {self.conditional_style!r}")


def derive_big_m(expr: LinearExpr, sense: Sense, rhs: Fraction, bounds: Bounds) -> Fraction:
    """Smallest sufficient relaxation constant over the variable box.

    LE rows need max(0, sup(expr) - rhs); GE rows need max(0, rhs - inf(expr)).
    """
    if sense is Sense.EQ:
        raise ToolkitError("InvalidSense", "big-M applies to inequality rows only")
    lo, hi = expr_range(expr, bounds)
    if sense is Sense.LE:
        if hi is None:
            raise ToolkitError("UnboundedVariable", "expression has no finite upper range")
        return max(Fraction(0), hi - rhs)
    if lo is None:
        raise ToolkitError("UnboundedVariable", "expression has no finite lower range")
    return max(Fraction(0), rhs - lo)


def _row(expr: LinearExpr, sense: Sense, rhs, source: str | None, omt_node: int | None) -> CanonicalRow:
    return CanonicalRow(dict(expr.terms), sense, rat(rhs) - expr.constant, source, omt_node)


def lower_constraint(
    constraint: TypedConstraint,
    bounds: Bounds,
    options: LowerOptions | None = None,
    source: str | None = None,
) -> tuple[list[CanonicalRow], list[Variable]]:
    """Rows (+ auxiliary binaries) realizing one typed constraint.

    The produced rows, with auxiliaries existentially projected, are
    satisfied at exactly the box points where the constraint's direct
    semantics holds (the oracle module checks this exhaustively).
    """
    options = options or LowerOptions()
    rows, invented = _dispatch(constraint, bounds, options, source)
    if constraint.label:
        rows = [replace(row, label=constraint.label) for row in rows]
    return rows, invented


def _dispatch(constraint, bounds, options, source) -> tuple[list[CanonicalRow], list[Variable]]:
    node = constraint.omt_node
    invented: list[Variable] = []

    if isinstance(constraint, Bound):
        moved = constraint.expr - bound_as_expr(constraint.bound)
        return [_row(moved, constraint.sense, 0, source, node)], invented

    if isinstance(constraint, RawRow):
        return [_row(constraint.expr, constraint.sense, constraint.rhs, source, node)], invented

    if isinstance(constraint, Balance):
        return [_row(constraint.lhs - constraint.rhs, Sense.EQ, 0, source, node)], invented

    if isinstance(constraint, _SetFamily):
        expr = LinearExpr.weighted(zip(constraint.members, constraint.effective_weights()))
        return [_row(expr, constraint.row_sense, constraint.rhs, source, node)], invented

    if isinstance(constraint, VariableFix):
        return [_row(LinearExpr.var(constraint.var), Sense.EQ, constraint.value, source, node)], invented

    if isinstance(constraint, ConditionalBound):
        return _lower_conditional(constraint, bounds, source, node), invented

    if isinstance(constraint, IfThen):
        return _lower_if_then(constraint, options, source, node), invented

    if isinstance(constraint, EitherOr):
        return _lower_either_or(constraint, bounds, source, node)

    raise ToolkitError("Unclassifiable", f"unknown constraint family {type(constraint).__name__}")


def _lower_conditional(c: ConditionalBound, bounds: Bounds, source, node) -> list[CanonicalRow]:
    ind = LinearExpr.var(c.indicator)
    moved = c.expr - bound_as_expr(c.bound)

    if c.off_behavior is OffBehavior.FREE:
        m = derive_big_m(moved, c.sense, Fraction(0), bounds)
        if c.sense is Sense.LE:
            return [_row(moved + m * ind, Sense.LE, m, source, node)]
        return [_row(moved - m * ind, Sense.GE, -m, source, node)]

    # FORCE_ZERO: while the indicator is 0 the expression itself must be 0.
    lo, hi = expr_range(c.expr, bounds)
    rows: list[CanonicalRow] = []
    if not bound_is_expr(c.bound):
        limit = bound_as_expr(c.bound).constant
        if c.sense is Sense.LE:
            rows.append(_row(c.expr - limit * ind, Sense.LE, 0, source, node))
            if lo is None:
                raise ToolkitError("UnboundedVariable", "force-zero needs a finite lower range")
            if lo < 0:
                rows.append(_row(c.expr - lo * ind, Sense.GE, 0, source, node))
        else:
            rows.append(_row(c.expr - limit * ind, Sense.GE, 0, source, node))
            if hi is None:
                raise ToolkitError("UnboundedVariable", "force-zero needs a finite upper range")
            rows.append(_row(c.expr - hi * ind, Sense.LE, 0, source, node))
        return rows

    # Expression-valued bound: gate the on-row with a derived big-M, then
    # pin the expression to zero while off.
    m = derive_big_m(moved, c.sense, Fraction(0), bounds)
    if c.sense is Sense.LE:
        rows.append(_row(moved + m * ind, Sense.LE, m, source, node))
    else:
        rows.append(_row(moved - m * ind, Sense.GE, -m, source, node))
    if hi is None or (hi > 0):
        if hi is None:
            raise ToolkitError("UnboundedVariable", "force-zero needs a finite upper range")
        rows.append(_row(c.expr - hi * ind, Sense.LE, 0, source, node))
    if lo is None or (lo < 0):
        if lo is None:
            raise ToolkitError("UnboundedVariable", "force-zero needs a finite lower range")
        rows.append(_row(c.expr - lo * ind, Sense.GE, 0, source, node))
    return rows


def _lower_if_then(c: IfThen, options: LowerOptions, source, node) -> list[CanonicalRow]:
    k = len(c.antecedents)
    ante = LinearExpr.weighted((a, Fraction(1)) for a in c.antecedents)
    if options.if_then_strength is IfThenStrength.WEAK:
        m = len(c.consequents)
        cons = LinearExpr.weighted((x, Fraction(1)) for x in c.consequents)
        return [_row(m * ante - cons, Sense.LE, m * (k - 1), source, node)]
    return [
        _row(ante - LinearExpr.var(x), Sense.LE, k - 1, source, node)
        for x in c.consequents
    ]


def _lower_either_or(c: EitherOr, bounds: Bounds, source, node):
    tag = source if source is not None else "anon"
    rows: list[CanonicalRow] = []
    aux: list[Variable] = []
    selector_sum = LinearExpr()
    for i, alt in enumerate(c.alternatives):
        name = f"{AUX_PREFIX}_{tag}_z{i}"
        aux.append(Variable(id=name, name=name, kind=VarKind.BINARY, lower=Fraction(0), upper=Fraction(1)))
        z = LinearExpr.var(name)
        selector_sum = selector_sum + z
        m = derive_big_m(alt.expr, alt.sense, alt.rhs, bounds)
        if alt.sense is Sense.LE:
            rows.append(_row(alt.expr - m * z, Sense.LE, alt.rhs, source, node))
        else:
            rows.append(_row(alt.expr + m * z, Sense.GE, alt.rhs, source, node))
    rows.append(_row(selector_sum, Sense.LE, len(c.alternatives) - 1, source, node))
    return rows, aux


def form_as_raw_model(form: CanonicalForm, row_scales=None) -> Model:
    """Rebuild a canonical form as a model of raw rows (for re-enumeration).

    Auxiliary binaries keep their reserved names; optional per-row positive
    scales exercise the scaling-invariance property.
    """
    model = Model(form.name)
    for variable in form.variables:
        model.variables.append(variable)
        model._by_id[variable.id] = variable
    scales = row_scales or [Fraction(1)] * len(form.rows)
    for row, scale in zip(form.rows, scales):
        if scale <= 0:
            raise ToolkitError("BadParams", "row scales must be positive")
        model.constraints.append(RawRow(
            LinearExpr({var: coeff * scale for var, coeff in row.coefficients.items()}),
            row.sense, row.rhs * scale,
            label=row.label, omt_node=row.omt_node))
    model.objective = form.objective
    return model


def lower_model(model: Model, options: LowerOptions | None = None) -> CanonicalForm:
    """Lower a clean model; rows follow constraint insertion order and each
    multi-row constraint stays contiguous. Auxiliary binaries are appended
    after the model variables."""
    options = options or LowerOptions()
    errors = [d for d in validate(model) if d.severity == "error"]
    if errors:
        raise ValidationFailed(errors)
    bounds = model.bounds()
    rows: list[CanonicalRow] = []
    auxiliaries: list[Variable] = []
    for i, constraint in enumerate(model.constraints):
        cid = f"c{i}"
        try:
            new_rows, new_aux = lower_constraint(constraint, bounds, options, source=cid)
        except ToolkitError as exc:
            if exc.subject is None:
                raise ToolkitError(exc.code, exc.message, cid) from None
            raise
        rows.extend(new_rows)
        auxiliaries.extend(new_aux)
    objective = model.objective or Objective(Direction.MIN, LinearExpr())
    return CanonicalForm(
        variables=list(model.variables) + auxiliaries,
        rows=rows,
        objective=objective,
        name=model.name,
    )
