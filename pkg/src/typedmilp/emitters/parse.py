"""Parser for the toolkit's own LP and MPS dialect subsets.

``parse_canonical(emit_lp(F)) == F`` and ``parse_canonical(emit_mps(F)) == F``
for any canonical form over decimal-representable data: names, kinds,
bounds, row order, and row provenance all survive. Constructs outside the
emitted subset raise UnsupportedDialect; malformed text raises ParseError
with a line (and column where known).
"""

from __future__ import annotations

import re
from fractions import Fraction
from urllib.parse import unquote

from ..core import Direction, LinearExpr, Objective, Sense, Variable, VarKind
from ..errors import ParseError, ToolkitError
from ..lowering import CanonicalForm, CanonicalRow

_TOKEN = re.compile(r"\s*(<=|>=|=|\+|-|:|[A-Za-z_][A-Za-z0-9_.]*|[0-9]+(?:\.[0-9]+)?)")
_SENSE = {"<=": Sense.LE, ">=": Sense.GE, "=": Sense.EQ}
_PROVENANCE = re.compile(r"row (\S+) source=(\S+) omt=(\S+) label=(\S*)$")


def parse_canonical(text: str) -> CanonicalForm:
    """Parse LP or MPS text produced by this toolkit's emitters."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith(("\\", "*")):
            continue
        head = stripped.split()[0].lower()
        if head in ("maximize", "minimize"):
            return _parse_lp(text)
        if head == "name":
            return _parse_mps(text)
        raise ParseError(f"unrecognized format (starts with {head!r})", 1)
    raise ParseError("empty input", 1)


def _provenance(line: str) -> tuple[str, dict] | None:
    match = _PROVENANCE.search(line)
    if match is None:
        return None
    name, source, omt, label = match.groups()
    return name, {
        "source": None if source == "-" else source,
        "omt_node": None if omt == "-" else int(omt),
        "label": unquote(label),
    }


def _tokens(line: str, lineno: int) -> list[str]:
    out: list[str] = []
    pos = 0
    while pos < len(line):
        match = _TOKEN.match(line, pos)
        if match is None:
            if line[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {line[pos:].strip()[0]!r}", lineno, pos + 1)
        out.append(match.group(1))
        pos = match.end()
    return out


def _is_number(token: str) -> bool:
    return bool(re.fullmatch(r"[0-9]+(?:\.[0-9]+)?", token))


class _ExprParse:
    def __init__(self, tokens: list[str], lineno: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of line", self.lineno)
        self.pos += 1
        return token

    def parse_terms(self) -> tuple[dict[str, Fraction], Fraction]:
        """Terms until a sense token or end of tokens."""
        coefficients: dict[str, Fraction] = {}
        constant = Fraction(0)
        first = True
        while True:
            token = self.peek()
            if token is None or token in _SENSE:
                return coefficients, constant
            sign = Fraction(1)
            if token in ("+", "-"):
                if first and token == "+":
                    raise ParseError("dangling '+'", self.lineno)
                sign = Fraction(-1) if token == "-" else Fraction(1)
                self.take()
                token = self.peek()
            first = False
            if token is None:
                raise ParseError("dangling sign", self.lineno)
            if _is_number(token):
                value = sign * Fraction(self.take())
                nxt = self.peek()
                if nxt is not None and nxt not in _SENSE and nxt not in ("+", "-"):
                    name = self.take()
                    coefficients[name] = coefficients.get(name, Fraction(0)) + value
                else:
                    constant += value
            else:
                name = self.take()
                coefficients[name] = coefficients.get(name, Fraction(0)) + sign

    def parse_signed_number(self) -> Fraction:
        token = self.take()
        sign = Fraction(1)
        if token in ("+", "-"):
            sign = Fraction(-1) if token == "-" else Fraction(1)
            token = self.take()
        if not _is_number(token):
            raise ParseError(f"expected a number, got {token!r}", self.lineno)
        return sign * Fraction(token)

    def parse_bound_value(self, for_upper: bool) -> Fraction | None:
        token = self.take()
        sign = 1
        if token in ("+", "-"):
            sign = -1 if token == "-" else 1
            token = self.take()
        if token == "inf":
            return None
        if not _is_number(token):
            raise ParseError(f"expected a bound, got {token!r}", self.lineno)
        return Fraction(token) * sign


def _drop_zeros(coefficients: dict[str, Fraction]) -> dict[str, Fraction]:
    return {k: v for k, v in coefficients.items() if v != 0}


# --------------------------------------------------------------------------
# LP


_LP_UNSUPPORTED = {"ranges", "sos", "semi-continuous", "semis", "semi"}


def _parse_lp(text: str) -> CanonicalForm:
    name = "model"
    direction: Direction | None = None
    objective_tokens: list[str] = []
    objective_line = 1
    rows: list[tuple[str, dict, Fraction, Sense, int]] = []
    pending_provenance: dict[str, dict] = {}
    bounds_order: list[tuple[str, Fraction | None, Fraction | None]] = []
    generals: set[str] = set()
    binaries: set[str] = set()
    state = "direction"
    saw_end = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("\\"):
            body = stripped[1:].strip()
            if body.startswith("name:"):
                name = unquote(body[5:].strip())
            else:
                prov = _provenance(body)
                if prov is not None:
                    pending_provenance[prov[0]] = prov[1]
            continue
        if saw_end:
            raise ParseError("content after End", lineno)
        lowered = stripped.lower()
        if lowered in ("maximize", "minimize"):
            if state != "direction":
                raise ParseError("objective section out of place", lineno)
            direction = Direction.MAX if lowered == "maximize" else Direction.MIN
            state = "objective"
            continue
        if lowered == "subject to":
            state = "rows"
            continue
        if lowered == "bounds":
            state = "bounds"
            continue
        if lowered == "generals":
            state = "generals"
            continue
        if lowered in ("binaries", "binary"):
            state = "binaries"
            continue
        if lowered == "end":
            saw_end = True
            continue
        if lowered in _LP_UNSUPPORTED:
            raise ToolkitError("UnsupportedDialect", f"LP section {stripped!r} is outside the emitted subset")
        if state == "direction":
            raise ParseError(f"expected Maximize/Minimize, got {stripped!r}", lineno)
        if state == "objective":
            objective_tokens.extend(_tokens(stripped, lineno))
            objective_line = lineno
            continue
        if state == "rows":
            tokens = _tokens(stripped, lineno)
            if tokens.count("<=") + tokens.count(">=") + tokens.count("=") > 1:
                raise ToolkitError("UnsupportedDialect", f"ranged rows are outside the emitted subset (line {lineno})")
            parser = _ExprParse(tokens, lineno)
            row_name = parser.take()
            if parser.take() != ":":
                raise ParseError(f"expected ':' after row name {row_name!r}", lineno)
            coefficients, constant = parser.parse_terms()
            sense_token = parser.take()
            if sense_token not in _SENSE:
                raise ParseError(f"expected a sense, got {sense_token!r}", lineno)
            rhs = parser.parse_signed_number() - constant
            if parser.peek() is not None:
                raise ParseError(f"trailing tokens after row {row_name!r}", lineno)
            rows.append((row_name, _drop_zeros(coefficients), rhs, _SENSE[sense_token], lineno))
            continue
        if state == "bounds":
            tokens = _tokens(stripped, lineno)
            parser = _ExprParse(tokens, lineno)
            if len(tokens) == 2 and tokens[1] == "free":
                bounds_order.append((tokens[0], None, None))
                continue
            lower = parser.parse_bound_value(for_upper=False)
            if parser.take() != "<=":
                raise ParseError("expected '<=' in bounds line", lineno)
            var_name = parser.take()
            if parser.take() != "<=":
                raise ParseError("expected '<=' in bounds line", lineno)
            upper = parser.parse_bound_value(for_upper=True)
            bounds_order.append((var_name, lower, upper))
            continue
        if state == "generals":
            generals.update(_tokens(stripped, lineno))
            continue
        if state == "binaries":
            binaries.update(_tokens(stripped, lineno))
            continue
        raise ParseError(f"unexpected line {stripped!r}", lineno)

    if not saw_end:
        raise ParseError("missing End marker (truncated file?)", len(text.splitlines()) or 1)
    if direction is None:
        raise ParseError("missing objective section", 1)

    parser = _ExprParse(objective_tokens, objective_line)
    if parser.peek() is None:
        raise ParseError("missing objective row", objective_line)
    parser.take()  # objective row name
    if parser.take() != ":":
        raise ParseError("expected ':' after the objective name", objective_line)
    obj_terms, obj_constant = parser.parse_terms()
    if parser.peek() is not None:
        raise ParseError("unexpected sense in the objective", objective_line)

    variables = []
    seen: set[str] = set()
    for var_name, lower, upper in bounds_order:
        if var_name in seen:
            raise ParseError(f"duplicate bounds for {var_name!r}", 1)
        seen.add(var_name)
        if var_name in binaries:
            kind = VarKind.BINARY
        elif var_name in generals:
            kind = VarKind.INTEGER
        else:
            kind = VarKind.CONTINUOUS
        variables.append(Variable(var_name, var_name, kind, lower, upper))

    known = {v.id for v in variables}
    canonical_rows = []
    for row_name, coefficients, rhs, sense, lineno in rows:
        for var in coefficients:
            if var not in known:
                raise ParseError(f"row {row_name!r} references undeclared {var!r}", lineno)
        prov = pending_provenance.get(row_name, {"source": None, "omt_node": None, "label": ""})
        canonical_rows.append(CanonicalRow(coefficients, sense, rhs, prov["source"], prov["omt_node"], prov["label"]))
    for var in _drop_zeros(obj_terms):
        if var not in known:
            raise ParseError(f"objective references undeclared {var!r}", objective_line)

    objective = Objective(direction, LinearExpr(_drop_zeros(obj_terms), obj_constant))
    return CanonicalForm(variables=variables, rows=canonical_rows, objective=objective, name=name)


# --------------------------------------------------------------------------
# MPS


def _parse_mps(text: str) -> CanonicalForm:
    name = "model"
    direction: Direction | None = None
    row_order: list[tuple[str, Sense | None]] = []  # (name, sense); None = objective row
    provenance: dict[str, dict] = {}
    column_order: list[str] = []
    column_kind: dict[str, VarKind] = {}
    column_entries: dict[str, list[tuple[str, Fraction]]] = {}
    rhs_values: dict[str, Fraction] = {}
    bound_lower: dict[str, Fraction | None] = {}
    bound_upper: dict[str, Fraction | None] = {}
    explicit_lower: set[str] = set()
    explicit_upper: set[str] = set()
    binaries: set[str] = set()
    objective_row: str | None = None
    section = None
    in_integer_run = False
    saw_end = False

    type_map = {"L": Sense.LE, "G": Sense.GE, "E": Sense.EQ}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("*"):
            prov = _provenance(stripped[1:].strip())
            if prov is not None:
                provenance[prov[0]] = prov[1]
            continue
        if saw_end:
            raise ParseError("content after ENDATA", lineno)
        fields = stripped.split()
        keyword = fields[0].upper()
        if keyword == "NAME" and section is None:
            name = unquote(stripped[4:].strip()) or "model"
            section = "named"
            continue
        if keyword in ("OBJSENSE", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA") and len(fields) == 1:
            section = keyword
            if keyword == "ENDATA":
                saw_end = True
            continue
        if keyword == "RANGES" and len(fields) == 1:
            raise ToolkitError("UnsupportedDialect", f"MPS RANGES section is outside the emitted subset (line {lineno})")
        if section == "OBJSENSE":
            token = keyword
            if token == "MAX":
                direction = Direction.MAX
            elif token == "MIN":
                direction = Direction.MIN
            else:
                raise ParseError(f"unknown objective sense {token!r}", lineno)
            continue
        if section == "ROWS":
            if len(fields) != 2:
                raise ParseError("expected '<type> <name>' in ROWS", lineno)
            row_type, row_name = fields[0].upper(), fields[1]
            if row_type == "N":
                if objective_row is not None:
                    raise ToolkitError("UnsupportedDialect", f"multiple N rows (line {lineno})")
                objective_row = row_name
            elif row_type in type_map:
                row_order.append((row_name, type_map[row_type]))
            else:
                raise ParseError(f"unknown row type {row_type!r}", lineno)
            continue
        if section == "COLUMNS":
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                marker = fields[2].strip("'").upper()
                if marker == "INTORG":
                    in_integer_run = True
                elif marker == "INTEND":
                    in_integer_run = False
                else:
                    raise ParseError(f"unknown marker {fields[2]!r}", lineno)
                continue
            if len(fields) not in (3, 5):
                raise ParseError("expected '<column> <row> <value>' entries", lineno)
            column = fields[0]
            if column not in column_kind:
                column_order.append(column)
                column_kind[column] = VarKind.INTEGER if in_integer_run else VarKind.CONTINUOUS
                column_entries[column] = []
            pairs = [(fields[1], fields[2])] + ([(fields[3], fields[4])] if len(fields) == 5 else [])
            for row_name, value_text in pairs:
                try:
                    value = Fraction(value_text)
                except ValueError:
                    raise ParseError(f"bad coefficient {value_text!r}", lineno) from None
                column_entries[column].append((row_name, value))
            continue
        if section == "RHS":
            if len(fields) not in (3, 5):
                raise ParseError("expected '<set> <row> <value>' entries", lineno)
            pairs = [(fields[1], fields[2])] + ([(fields[3], fields[4])] if len(fields) == 5 else [])
            for row_name, value_text in pairs:
                try:
                    rhs_values[row_name] = Fraction(value_text)
                except ValueError:
                    raise ParseError(f"bad rhs {value_text!r}", lineno) from None
            continue
        if section == "BOUNDS":
            bound_type = fields[0].upper()
            if bound_type == "BV" and len(fields) == 3:
                binaries.add(fields[2])
                continue
            if bound_type in ("MI", "PL") and len(fields) == 3:
                var = fields[2]
                if bound_type == "MI":
                    bound_lower[var] = None
                    explicit_lower.add(var)
                else:
                    bound_upper[var] = None
                    explicit_upper.add(var)
                continue
            if bound_type in ("LO", "UP") and len(fields) == 4:
                var = fields[2]
                try:
                    value = Fraction(fields[3])
                except ValueError:
                    raise ParseError(f"bad bound {fields[3]!r}", lineno) from None
                if bound_type == "LO":
                    bound_lower[var] = value
                    explicit_lower.add(var)
                else:
                    bound_upper[var] = value
                    explicit_upper.add(var)
                continue
            raise ToolkitError("UnsupportedDialect", f"bound type {fields[0]!r} is outside the emitted subset (line {lineno})")
        raise ParseError(f"unexpected line {stripped!r}", lineno)

    if not saw_end:
        raise ParseError("missing ENDATA (truncated file?)", len(text.splitlines()) or 1)
    if direction is None:
        raise ParseError("missing OBJSENSE section", 1)
    if objective_row is None:
        raise ParseError("missing objective (N) row", 1)

    row_coefficients: dict[str, dict[str, Fraction]] = {row_name: {} for row_name, _ in row_order}
    objective_terms: dict[str, Fraction] = {}
    for column in column_order:
        for row_name, value in column_entries[column]:
            if row_name == objective_row:
                if value != 0:
                    objective_terms[column] = objective_terms.get(column, Fraction(0)) + value
            elif row_name in row_coefficients:
                if value != 0:
                    row_coefficients[row_name][column] = value
            else:
                raise ParseError(f"column {column!r} references unknown row {row_name!r}", 1)

    variables = []
    for column in column_order:
        if column in binaries:
            kind = VarKind.BINARY
            lower: Fraction | None = Fraction(0)
            upper: Fraction | None = Fraction(1)
        else:
            kind = column_kind[column]
            lower = bound_lower.get(column, Fraction(0) if column not in explicit_lower else None)
            upper = bound_upper.get(column, None)
        variables.append(Variable(column, column, kind, lower, upper))

    rows = []
    for row_name, sense in row_order:
        prov = provenance.get(row_name, {"source": None, "omt_node": None, "label": ""})
        rows.append(CanonicalRow(
            row_coefficients[row_name], sense, rhs_values.get(row_name, Fraction(0)),
            prov["source"], prov["omt_node"], prov["label"]))

    constant = -rhs_values.get(objective_row, Fraction(0))
    objective = Objective(direction, LinearExpr(objective_terms, constant))
    return CanonicalForm(variables=variables, rows=rows, objective=objective, name=name)
