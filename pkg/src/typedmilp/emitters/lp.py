"""LP-format emission (CPLEX-style dialect subset).

Sections in fixed order: objective, Subject To, Bounds, Generals,
Binaries, End. Rows are named positionally (``c<k>``); labels and row
provenance ride in comment lines so the parser can reconstruct the exact
canonical form. Output is byte-deterministic. Only data with terminating
decimal expansions can be emitted (NonDecimalCoefficient otherwise).
"""

from __future__ import annotations

from fractions import Fraction
from urllib.parse import quote

from ..core import Direction, Sense, Variable, VarKind
from ..lowering import CanonicalForm, CanonicalRow
from ..rationals import decimal_str

_SENSE_TEXT = {Sense.LE: "<=", Sense.EQ: "=", Sense.GE: ">="}


def _check_emittable(form: CanonicalForm) -> None:
    values: list[Fraction] = list(form.objective.expr.terms.values())
    values.append(form.objective.expr.constant)
    for row in form.rows:
        values.extend(row.coefficients.values())
        values.append(row.rhs)
    for var in form.variables:
        if var.lower is not None:
            values.append(var.lower)
        if var.upper is not None:
            values.append(var.upper)
    for value in values:
        decimal_str(value)  # raises NonDecimalCoefficient


def _terms_text(coefficients: dict[str, Fraction], order: list[str], constant: Fraction = Fraction(0)) -> str:
    parts: list[str] = []
    for var in order:
        if var not in coefficients:
            continue
        coeff = coefficients[var]
        magnitude = abs(coeff)
        sign = "-" if coeff < 0 else "+"
        if not parts:
            lead = ["-"] if sign == "-" else []
        else:
            lead = [sign]
        if magnitude != 1:
            lead.append(decimal_str(magnitude))
        lead.append(var)
        parts.append(" ".join(lead))
    if constant != 0:
        sign = "-" if constant < 0 else "+"
        if not parts:
            parts.append(decimal_str(constant))
        else:
            parts.append(f"{sign} {decimal_str(abs(constant))}")
    return " ".join(parts)


def provenance_comment(prefix: str, name: str, row: CanonicalRow) -> str:
    source = row.source if row.source is not None else "-"
    omt = str(row.omt_node) if row.omt_node is not None else "-"
    return f"{prefix} row {name} source={source} omt={omt} label={quote(row.label, safe='')}"


def _bound_text(value: Fraction | None, infinite: str) -> str:
    return infinite if value is None else decimal_str(value)


def emit_lp(form: CanonicalForm) -> str:
    _check_emittable(form)
    order = [v.id for v in form.variables]
    lines: list[str] = ["Maximize" if form.objective.direction is Direction.MAX else "Minimize"]
    lines.append(f"\\ name: {quote(form.name, safe='')}")
    obj_text = _terms_text(form.objective.expr.terms, order, form.objective.expr.constant)
    lines.append(f" obj: {obj_text}".rstrip())
    lines.append("Subject To")
    for k, row in enumerate(form.rows):
        name = f"c{k}"
        lines.append(provenance_comment("\\", name, row))
        body = _terms_text(row.coefficients, order) or "0"
        lines.append(f" {name}: {body} {_SENSE_TEXT[row.sense]} {decimal_str(row.rhs)}")
    lines.append("Bounds")
    for var in form.variables:
        if var.lower is None and var.upper is None:
            lines.append(f" {var.id} free")
        else:
            lines.append(f" {_bound_text(var.lower, '-inf')} <= {var.id} <= {_bound_text(var.upper, '+inf')}")
    generals = [v.id for v in form.variables if v.kind is VarKind.INTEGER]
    if generals:
        lines.append("Generals")
        lines.extend(f" {name}" for name in generals)
    binaries = [v.id for v in form.variables if v.kind is VarKind.BINARY]
    if binaries:
        lines.append("Binaries")
        lines.extend(f" {name}" for name in binaries)
    lines.append("End")
    return "\n".join(lines) + "\n"
