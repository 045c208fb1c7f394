"""Free-format MPS emission.

Sections: NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND markers around
integer and binary columns), RHS, BOUNDS, ENDATA. Every variable gets an
objective entry (possibly 0) so column order survives the round trip;
binaries are declared with BV bounds. Row provenance rides in ``*``
comment lines inside ROWS.
"""

from __future__ import annotations

from fractions import Fraction
from urllib.parse import quote

from ..core import Direction, Sense, VarKind
from ..lowering import CanonicalForm
from ..rationals import decimal_str
from .lp import _check_emittable, provenance_comment

_ROW_TYPE = {Sense.LE: "L", Sense.GE: "G", Sense.EQ: "E"}


def emit_mps(form: CanonicalForm) -> str:
    _check_emittable(form)
    lines: list[str] = [f"NAME {quote(form.name, safe='')}"]
    lines.append("OBJSENSE")
    lines.append(" MAX" if form.objective.direction is Direction.MAX else " MIN")
    lines.append("ROWS")
    lines.append(" N obj")
    row_names = [f"c{k}" for k in range(len(form.rows))]
    for name, row in zip(row_names, form.rows):
        lines.append(f" {_ROW_TYPE[row.sense]} {name}")
        lines.append(provenance_comment("*", name, row))
    lines.append("COLUMNS")
    marker = 0
    in_integer_run = False
    for var in form.variables:
        integral = var.kind in (VarKind.INTEGER, VarKind.BINARY)
        if integral and not in_integer_run:
            lines.append(f" MARK{marker} 'MARKER' 'INTORG'")
            marker += 1
            in_integer_run = True
        elif not integral and in_integer_run:
            lines.append(f" MARK{marker} 'MARKER' 'INTEND'")
            marker += 1
            in_integer_run = False
        obj_coeff = form.objective.expr.terms.get(var.id, Fraction(0))
        lines.append(f" {var.id} obj {decimal_str(obj_coeff)}")
        for name, row in zip(row_names, form.rows):
            if var.id in row.coefficients:
                lines.append(f" {var.id} {name} {decimal_str(row.coefficients[var.id])}")
    if in_integer_run:
        lines.append(f" MARK{marker} 'MARKER' 'INTEND'")
    lines.append("RHS")
    if form.objective.expr.constant != 0:
        lines.append(f" RHS obj {decimal_str(-form.objective.expr.constant)}")
    for name, row in zip(row_names, form.rows):
        if row.rhs != 0:
            lines.append(f" RHS {name} {decimal_str(row.rhs)}")
    lines.append("BOUNDS")
    for var in form.variables:
        if var.kind is VarKind.BINARY:
            lines.append(f" BV BND {var.id}")
            continue
        if var.lower is None:
            lines.append(f" MI BND {var.id}")
        else:
            lines.append(f" LO BND {var.id} {decimal_str(var.lower)}")
        if var.upper is None:
            lines.append(f" PL BND {var.id}")
        else:
            lines.append(f" UP BND {var.id} {decimal_str(var.upper)}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"
