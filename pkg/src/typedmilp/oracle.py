"""Ground-truth semantics and desk-scale exact solving.

`satisfies` evaluates the *direct* meaning of a typed constraint (no
linearization). `check_equivalence` exhaustively compares that meaning
against a lowered row set, existentially projecting auxiliary binaries.
`solve_by_enumeration` finds exact optima of pure-integer models by a
depth-first walk with constraint short-circuiting; pruned subtrees are
still accounted for, so points_enumerated always equals the box size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .core import (
    Assignment,
    Balance,
    Bound,
    ConditionalBound,
    EitherOr,
    IfThen,
    LinearExpr,
    Model,
    RawRow,
    Sense,
    TypedConstraint,
    Variable,
    VariableFix,
    VarKind,
    _SetFamily,
    bound_as_expr,
    rat,
)
from .errors import ToolkitError
from .lowering import CanonicalRow

DEFAULT_CHECK_CAP = 10**6
MAX_AUX = 16


def _cmp(left: Fraction, sense: Sense, right: Fraction) -> bool:
    if sense is Sense.LE:
        return left <= right
    if sense is Sense.GE:
        return left >= right
    return left == right


def _indicator_on(value: Fraction) -> bool:
    if value == 1:
        return True
    if value == 0:
        return False
    raise ToolkitError("NonBinaryValue", f"indicator value {value} is not 0/1")


def satisfies(constraint: TypedConstraint, assignment: Assignment) -> bool:
    """Direct (non-linearized) meaning of a typed constraint at a point."""
    if isinstance(constraint, Bound):
        return _cmp(constraint.expr.evaluate(assignment), constraint.sense,
                    bound_as_expr(constraint.bound).evaluate(assignment))
    if isinstance(constraint, ConditionalBound):
        if constraint.indicator not in assignment:
            _missing(constraint.indicator)
        value = constraint.expr.evaluate(assignment)
        if _indicator_on(rat(assignment[constraint.indicator])):
            return _cmp(value, constraint.sense, bound_as_expr(constraint.bound).evaluate(assignment))
        if constraint.off_behavior.value == "force_zero":
            return value == 0
        return True
    if isinstance(constraint, Balance):
        return constraint.lhs.evaluate(assignment) == constraint.rhs.evaluate(assignment)
    if isinstance(constraint, _SetFamily):
        total = Fraction(0)
        for member, weight in zip(constraint.members, constraint.effective_weights()):
            if member not in assignment:
                _missing(member)
            total += weight * rat(assignment[member])
        return _cmp(total, constraint.row_sense, Fraction(constraint.rhs))
    if isinstance(constraint, VariableFix):
        if constraint.var not in assignment:
            _missing(constraint.var)
        return rat(assignment[constraint.var]) == constraint.value
    if isinstance(constraint, IfThen):
        for var in list(constraint.antecedents) + list(constraint.consequents):
            if var not in assignment:
                _missing(var)
        if all(rat(assignment[a]) == 1 for a in constraint.antecedents):
            return all(rat(assignment[c]) == 1 for c in constraint.consequents)
        return True
    if isinstance(constraint, EitherOr):
        return any(
            _cmp(alt.expr.evaluate(assignment), alt.sense, alt.rhs)
            for alt in constraint.alternatives
        )
    if isinstance(constraint, RawRow):
        return _cmp(constraint.expr.evaluate(assignment), constraint.sense, constraint.rhs)
    raise ToolkitError("Unclassifiable", f"unknown constraint family {type(constraint).__name__}")


def _missing(var: str):
    raise ToolkitError("MissingValue", f"assignment misses variable {var!r}", var)


def row_satisfied(row: CanonicalRow, assignment: Assignment) -> bool:
    total = Fraction(0)
    for var, coeff in row.coefficients.items():
        if var not in assignment:
            _missing(var)
        total += coeff * rat(assignment[var])
    return _cmp(total, row.sense, row.rhs)


# --------------------------------------------------------------------------
# Sample boxes


@dataclass(frozen=True)
class SampleBox:
    """Per-variable ordered sample values; points iterate lexicographically."""

    entries: tuple[tuple[str, tuple[Fraction, ...]], ...]

    def size(self) -> int:
        return math.prod(len(values) for _, values in self.entries)

    def variables(self) -> list[str]:
        return [var for var, _ in self.entries]

    def points(self) -> Iterator[dict[str, Fraction]]:
        names = self.variables()
        for combo in product(*(values for _, values in self.entries)):
            yield dict(zip(names, combo))


def build_sample_box(variables: Sequence[Variable], continuous_samples: int = 3) -> SampleBox:
    """Every integer in range for integer/binary variables; an evenly spaced
    grid including both bounds (and the midpoint) for continuous ones."""
    entries = []
    for var in variables:
        if var.kind is VarKind.CONTINUOUS:
            if var.lower is None or var.upper is None:
                raise ToolkitError("UnboundedVariable", f"{var.id!r} has no finite box", var.id)
            k = max(2, continuous_samples)
            if var.lower == var.upper:
                values = (var.lower,)
            else:
                span = var.upper - var.lower
                values = tuple(var.lower + span * Fraction(i, k - 1) for i in range(k))
        else:
            if var.lower is None or var.upper is None:
                raise ToolkitError("UnboundedVariable", f"{var.id!r} has no finite box", var.id)
            lo = math.ceil(var.lower)
            hi = math.floor(var.upper)
            if lo > hi:
                raise ToolkitError("InvalidBounds", f"{var.id!r} has an empty integer range", var.id)
            values = tuple(Fraction(v) for v in range(lo, hi + 1))
        entries.append((var.id, values))
    return SampleBox(tuple(entries))


# --------------------------------------------------------------------------
# Equivalence checking


@dataclass(frozen=True)
class Mismatch:
    assignment: dict[str, Fraction]
    semantics: bool
    lowered: bool


@dataclass(frozen=True)
class EquivalenceReport:
    points_checked: int
    mismatches: tuple[Mismatch, ...]

    @property
    def equivalent(self) -> bool:
        return not self.mismatches


def _scale_int(value: Fraction, scale: int) -> int:
    scaled = value * scale
    assert scaled.denominator == 1
    return scaled.numerator


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


class _ScaledRow:
    """Row compiled against a box: integer coefficients over point positions."""

    __slots__ = ("pairs", "aux_add", "sense", "rhs")

    def __init__(self, row: CanonicalRow, positions: dict[str, int], aux_ids: list[str], d_scale: int):
        c_scale = _lcm_denominators(list(row.coefficients.values()) + [row.rhs])
        self.pairs: list[tuple[int, int]] = []
        aux_coeff: dict[str, int] = {}
        for var, coeff in row.coefficients.items():
            scaled = _scale_int(coeff, c_scale)
            if var in positions:
                self.pairs.append((positions[var], scaled))
            elif var in aux_ids:
                aux_coeff[var] = scaled * d_scale
            else:
                _missing(var)
        # contribution of each auxiliary when set to 1, in combo order
        self.aux_add: tuple[tuple[int, int], ...] = tuple(
            (aux_ids.index(a), c) for a, c in aux_coeff.items()
        )
        self.sense = row.sense
        self.rhs = _scale_int(row.rhs, c_scale * d_scale)

    def base(self, point: tuple[int, ...]) -> int:
        return sum(c * point[i] for i, c in self.pairs)

    def holds(self, lhs: int) -> bool:
        if self.sense is Sense.LE:
            return lhs <= self.rhs
        if self.sense is Sense.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


def _compile_linear(expr: LinearExpr, positions: dict[str, int], d_scale: int):
    """Return (pairs, constant_scaled, c_scale) for fast integer evaluation."""
    c_scale = _lcm_denominators(list(expr.terms.values()) + [expr.constant])
    pairs = []
    for var, coeff in expr.terms.items():
        if var not in positions:
            _missing(var)
        pairs.append((positions[var], _scale_int(coeff, c_scale)))
    return pairs, _scale_int(expr.constant, c_scale * d_scale), c_scale


def _compile_semantics(constraint: TypedConstraint, positions: dict[str, int], d_scale: int):
    """Compile `satisfies` to a closure over integer-scaled points."""

    def linear_check(expr: LinearExpr, sense: Sense, rhs: Fraction):
        moved = expr - LinearExpr(constant=rhs)
        pairs, const, _ = _compile_linear(moved, positions, d_scale)

        def check(point):
            total = const + sum(c * point[i] for i, c in pairs)
            if sense is Sense.LE:
                return total <= 0
            if sense is Sense.GE:
                return total >= 0
            return total == 0

        return check

    if isinstance(constraint, Bound):
        moved = constraint.expr - bound_as_expr(constraint.bound)
        return linear_check(moved, constraint.sense, Fraction(0))
    if isinstance(constraint, RawRow):
        return linear_check(constraint.expr, constraint.sense, constraint.rhs)
    if isinstance(constraint, Balance):
        return linear_check(constraint.lhs - constraint.rhs, Sense.EQ, Fraction(0))
    if isinstance(constraint, _SetFamily):
        expr = LinearExpr.weighted(zip(constraint.members, constraint.effective_weights()))
        return linear_check(expr, constraint.row_sense, Fraction(constraint.rhs))
    if isinstance(constraint, VariableFix):
        return linear_check(LinearExpr.var(constraint.var), Sense.EQ, constraint.value)
    if isinstance(constraint, ConditionalBound):
        on_check = linear_check(constraint.expr - bound_as_expr(constraint.bound), constraint.sense, Fraction(0))
        zero_check = linear_check(constraint.expr, Sense.EQ, Fraction(0))
        ind_pos = positions[constraint.indicator]
        force_zero = constraint.off_behavior.value == "force_zero"

        def check(point):
            ind = point[ind_pos]
            if ind == d_scale:
                return on_check(point)
            if ind != 0:
                raise ToolkitError("NonBinaryValue", f"indicator value {Fraction(ind, d_scale)} is not 0/1")
            if force_zero:
                return zero_check(point)
            return True

        return check
    if isinstance(constraint, IfThen):
        ant = [positions[a] for a in constraint.antecedents]
        cons = [positions[c] for c in constraint.consequents]

        def check(point):
            if all(point[i] == d_scale for i in ant):
                return all(point[i] == d_scale for i in cons)
            return True

        return check
    if isinstance(constraint, EitherOr):
        alt_checks = [linear_check(alt.expr, alt.sense, alt.rhs) for alt in constraint.alternatives]

        def check(point):
            return any(c(point) for c in alt_checks)

        return check
    raise ToolkitError("Unclassifiable", f"unknown constraint family {type(constraint).__name__}")


def check_equivalence(
    constraint: TypedConstraint,
    rows: Sequence[CanonicalRow],
    auxiliaries: Sequence[Variable],
    box: SampleBox,
    cap: int = DEFAULT_CHECK_CAP,
) -> EquivalenceReport:
    """Exhaustively compare direct semantics against the lowered rows.

    A point agrees when `satisfies(constraint, point)` equals "there is an
    assignment of the auxiliary binaries making every row hold". The walk
    is deterministic (lexicographic in box order, ascending sample order).
    """
    aux_ids = [v.id for v in auxiliaries]
    n_aux = len(aux_ids)
    if n_aux > MAX_AUX:
        raise ToolkitError("BoxTooLarge", f"{n_aux} auxiliaries exceed the cap of {MAX_AUX}")
    points = box.size()
    if points * (2**n_aux) > cap:
        raise ToolkitError("BoxTooLarge", f"{points} points x 2^{n_aux} exceeds the cap of {cap}")
    box_vars = set(box.variables())
    for var in sorted(constraint.variables()):
        if var not in box_vars:
            _missing(var)

    d_scale = _lcm_denominators([v for _, values in box.entries for v in values])
    positions = {var: i for i, (var, _) in enumerate(box.entries)}
    scaled_domains = [tuple(_scale_int(v, d_scale) for v in values) for _, values in box.entries]
    compiled_rows = [_ScaledRow(row, positions, aux_ids, d_scale) for row in rows]
    plain = [r for r in compiled_rows if not r.aux_add]
    gated = [r for r in compiled_rows if r.aux_add]
    combos: list[tuple[int, ...]] = list(product((0, 1), repeat=n_aux)) if gated else []
    semantics = _compile_semantics(constraint, positions, d_scale)

    names = box.variables()
    mismatches: list[Mismatch] = []
    for point in product(*scaled_domains):
        sem = semantics(point)
        low = all(r.holds(r.base(point)) for r in plain)
        if low and gated:
            bases = [r.base(point) for r in gated]
            low = False
            for combo in combos:
                ok = True
                for r, base in zip(gated, bases):
                    lhs = base
                    for j, add in r.aux_add:
                        if combo[j]:
                            lhs += add
                    if not r.holds(lhs):
                        ok = False
                        break
                if ok:
                    low = True
                    break
        if sem != low:
            values = {name: Fraction(v, d_scale) for name, v in zip(names, point)}
            mismatches.append(Mismatch(values, sem, low))
    return EquivalenceReport(points, tuple(mismatches))


def check_model(
    model: Model,
    options=None,
    continuous_samples: int = 3,
    cap: int = DEFAULT_CHECK_CAP,
) -> list[tuple[str, EquivalenceReport]]:
    """Equivalence-check every constraint of a model against its lowering.

    Each constraint gets a box over its own variables built from the model
    bounds. Raises BoxTooLarge when any single constraint would exceed the
    cap, and ValidationFailed when the model has errors.
    """
    from .lowering import LowerOptions, lower_constraint
    from .core import validate
    from .errors import ValidationFailed

    errors = [d for d in validate(model) if d.severity == "error"]
    if errors:
        raise ValidationFailed(errors)
    options = options or LowerOptions()
    bounds = model.bounds()
    out: list[tuple[str, EquivalenceReport]] = []
    for i, constraint in enumerate(model.constraints):
        cid = f"c{i}"
        rows, aux = lower_constraint(constraint, bounds, options, source=cid)
        touched = constraint.variables()
        variables = [v for v in model.variables if v.id in touched]
        box = build_sample_box(variables, continuous_samples)
        out.append((cid, check_equivalence(constraint, rows, aux, box, cap)))
    return out


# --------------------------------------------------------------------------
# Enumeration solving


@dataclass(frozen=True)
class Limits:
    max_points: int = 10**7


@dataclass(frozen=True)
class OptimumReport:
    status: str  # "optimal" | "infeasible"
    objective_value: Fraction | None
    witness: dict[str, Fraction] | None
    points_enumerated: int

    def to_json(self) -> dict:
        from .rationals import to_json

        return {
            "status": self.status,
            "value": None if self.objective_value is None else to_json(self.objective_value),
            "witness": None if self.witness is None else {k: to_json(v) for k, v in self.witness.items()},
            "points_enumerated": self.points_enumerated,
        }


class _LinearState:
    """Incremental sum + optimistic completion interval for one linear row.

    Violation is monotone under assignment (assigned contributions replace
    their own min/max share), so a pruned branch can never recover.
    """

    __slots__ = ("sense", "rhs", "total", "min_un", "max_un", "coeff")

    def __init__(self, sense: Sense, rhs: int):
        self.sense = sense
        self.rhs = rhs
        self.total = 0
        self.min_un = 0
        self.max_un = 0
        self.coeff: dict[int, tuple[int, int, int]] = {}  # pos -> (c, cmin, cmax)

    def watch(self, pos: int, coeff: int, lo: int, hi: int):
        prev = self.coeff.get(pos)
        if prev is not None:
            coeff += prev[0]
        cmin = min(coeff * lo, coeff * hi)
        cmax = max(coeff * lo, coeff * hi)
        if prev is not None:
            self.min_un -= prev[1]
            self.max_un -= prev[2]
        self.coeff[pos] = (coeff, cmin, cmax)
        self.min_un += cmin
        self.max_un += cmax

    def enter(self, pos: int, value: int):
        c, cmin, cmax = self.coeff[pos]
        self.total += c * value
        self.min_un -= cmin
        self.max_un -= cmax

    def leave(self, pos: int, value: int):
        c, cmin, cmax = self.coeff[pos]
        self.total -= c * value
        self.min_un += cmin
        self.max_un += cmax

    def violated(self) -> bool:
        if self.sense is Sense.LE:
            return self.total + self.min_un > self.rhs
        if self.sense is Sense.GE:
            return self.total + self.max_un < self.rhs
        return self.total + self.min_un > self.rhs or self.total + self.max_un < self.rhs


class _Tracker:
    def enter(self, pos: int, value: int) -> None: ...
    def leave(self, pos: int, value: int) -> None: ...
    def violated(self) -> bool: ...
    def watched(self) -> set[int]: ...


class _RowTracker(_Tracker):
    __slots__ = ("state",)

    def __init__(self, state: _LinearState):
        self.state = state

    def enter(self, pos, value):
        self.state.enter(pos, value)

    def leave(self, pos, value):
        self.state.leave(pos, value)

    def violated(self):
        return self.state.violated()

    def watched(self):
        return set(self.state.coeff)


class _ConditionalTracker(_Tracker):
    __slots__ = ("ind_pos", "on_state", "zero_state", "force_zero", "ind_value")

    def __init__(self, ind_pos, on_state, zero_state, force_zero):
        self.ind_pos = ind_pos
        self.on_state = on_state
        self.zero_state = zero_state
        self.force_zero = force_zero
        self.ind_value = -1

    def enter(self, pos, value):
        if pos == self.ind_pos:
            self.ind_value = value
        if pos in self.on_state.coeff:
            self.on_state.enter(pos, value)
        if self.zero_state is not None and pos in self.zero_state.coeff:
            self.zero_state.enter(pos, value)

    def leave(self, pos, value):
        if pos == self.ind_pos:
            self.ind_value = -1
        if pos in self.on_state.coeff:
            self.on_state.leave(pos, value)
        if self.zero_state is not None and pos in self.zero_state.coeff:
            self.zero_state.leave(pos, value)

    def violated(self):
        if self.ind_value == 1:
            return self.on_state.violated()
        if self.ind_value == 0 and self.force_zero:
            return self.zero_state.violated()
        return False

    def watched(self):
        out = {self.ind_pos} | set(self.on_state.coeff)
        if self.zero_state is not None:
            out |= set(self.zero_state.coeff)
        return out


class _IfThenTracker(_Tracker):
    __slots__ = ("ant", "cons", "ant_unassigned", "ant_zero", "cons_zero")

    def __init__(self, ant: list[int], cons: list[int]):
        self.ant = ant
        self.cons = cons
        self.ant_unassigned = len(ant)
        self.ant_zero = 0
        self.cons_zero = 0

    def enter(self, pos, value):
        for p in self.ant:
            if p == pos:
                self.ant_unassigned -= 1
                if value == 0:
                    self.ant_zero += 1
        for p in self.cons:
            if p == pos and value == 0:
                self.cons_zero += 1

    def leave(self, pos, value):
        for p in self.ant:
            if p == pos:
                self.ant_unassigned += 1
                if value == 0:
                    self.ant_zero -= 1
        for p in self.cons:
            if p == pos and value == 0:
                self.cons_zero -= 1

    def violated(self):
        return self.ant_unassigned == 0 and self.ant_zero == 0 and self.cons_zero > 0

    def watched(self):
        return set(self.ant) | set(self.cons)


class _EitherOrTracker(_Tracker):
    __slots__ = ("states",)

    def __init__(self, states: list[_LinearState]):
        self.states = states

    def enter(self, pos, value):
        for s in self.states:
            if pos in s.coeff:
                s.enter(pos, value)

    def leave(self, pos, value):
        for s in self.states:
            if pos in s.coeff:
                s.leave(pos, value)

    def violated(self):
        return all(s.violated() for s in self.states)

    def watched(self):
        out: set[int] = set()
        for s in self.states:
            out |= set(s.coeff)
        return out


def _linear_state(expr: LinearExpr, sense: Sense, rhs: Fraction,
                  positions: dict[str, int], domains: list[tuple[int, ...]]) -> _LinearState:
    c_scale = _lcm_denominators(list(expr.terms.values()) + [expr.constant, rhs])
    state = _LinearState(sense, _scale_int(rhs - expr.constant, c_scale))
    for var, coeff in expr.terms.items():
        pos = positions[var]
        state.watch(pos, _scale_int(coeff, c_scale), domains[pos][0], domains[pos][-1])
    return state


def _build_tracker(constraint: TypedConstraint, positions: dict[str, int],
                   domains: list[tuple[int, ...]]) -> _Tracker:
    if isinstance(constraint, Bound):
        moved = constraint.expr - bound_as_expr(constraint.bound)
        return _RowTracker(_linear_state(moved, constraint.sense, Fraction(0), positions, domains))
    if isinstance(constraint, RawRow):
        return _RowTracker(_linear_state(constraint.expr, constraint.sense, constraint.rhs, positions, domains))
    if isinstance(constraint, Balance):
        return _RowTracker(_linear_state(constraint.lhs - constraint.rhs, Sense.EQ, Fraction(0), positions, domains))
    if isinstance(constraint, _SetFamily):
        expr = LinearExpr.weighted(zip(constraint.members, constraint.effective_weights()))
        return _RowTracker(_linear_state(expr, constraint.row_sense, Fraction(constraint.rhs), positions, domains))
    if isinstance(constraint, VariableFix):
        return _RowTracker(_linear_state(LinearExpr.var(constraint.var), Sense.EQ, constraint.value, positions, domains))
    if isinstance(constraint, ConditionalBound):
        on_state = _linear_state(constraint.expr - bound_as_expr(constraint.bound),
                                 constraint.sense, Fraction(0), positions, domains)
        force_zero = constraint.off_behavior.value == "force_zero"
        zero_state = (
            _linear_state(constraint.expr, Sense.EQ, Fraction(0), positions, domains)
            if force_zero else None
        )
        return _ConditionalTracker(positions[constraint.indicator], on_state, zero_state, force_zero)
    if isinstance(constraint, IfThen):
        return _IfThenTracker([positions[a] for a in constraint.antecedents],
                              [positions[c] for c in constraint.consequents])
    if isinstance(constraint, EitherOr):
        states = [
            _linear_state(alt.expr, alt.sense, alt.rhs, positions, domains)
            for alt in constraint.alternatives
        ]
        return _EitherOrTracker(states)
    raise ToolkitError("Unclassifiable", f"unknown constraint family {type(constraint).__name__}")


@dataclass
class _SearchStats:
    enumerated: int = 0


def _integer_domains(model: Model) -> list[tuple[int, ...]]:
    domains = []
    for var in model.variables:
        if var.kind is VarKind.CONTINUOUS:
            raise ToolkitError("ContinuousUnsupported",
                               f"{var.id!r} is continuous; enumeration needs integer variables", var.id)
        if var.lower is None or var.upper is None:
            raise ToolkitError("TooLarge", f"{var.id!r} is unbounded; the box is infinite", var.id)
        lo = math.ceil(var.lower)
        hi = math.floor(var.upper)
        domains.append(tuple(range(lo, hi + 1)))
    return domains


def _search_leaves(model: Model, limits: Limits, stats: _SearchStats) -> Iterator[tuple[int, ...]]:
    """DFS over the integer box, yielding feasible points as tuples.

    Every skipped subtree contributes its cartesian size to stats, so
    stats.enumerated totals the full box when the walk completes.
    """
    domains = _integer_domains(model)
    n = len(domains)
    size = math.prod(len(d) for d in domains)
    if size > limits.max_points:
        raise ToolkitError("TooLarge", f"box has {size} points (> {limits.max_points})")
    if any(len(d) == 0 for d in domains):
        stats.enumerated = 0
        return

    positions = {var.id: i for i, var in enumerate(model.variables)}
    trackers = [_build_tracker(c, positions, domains) for c in model.constraints]
    watchers: list[list[_Tracker]] = [[] for _ in range(n)]
    for tracker in trackers:
        for pos in tracker.watched():
            watchers[pos].append(tracker)

    suffix = [1] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] * len(domains[k])

    if any(t.violated() for t in trackers):
        stats.enumerated = size
        return

    point = [0] * n

    def walk(k: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            stats.enumerated += 1
            yield tuple(point)
            return
        for value in domains[k]:
            point[k] = value
            pruned = False
            touched = []
            for tracker in watchers[k]:
                tracker.enter(k, value)
                touched.append(tracker)
                if tracker.violated():
                    pruned = True
                    break
            if pruned:
                stats.enumerated += suffix[k + 1]
            else:
                yield from walk(k + 1)
            for tracker in touched:
                tracker.leave(k, value)

    yield from walk(0)


def enumerate_feasible(model: Model, limits: Limits | None = None) -> Iterator[dict[str, Fraction]]:
    """All feasible integer points, in lexicographic variable-order."""
    limits = limits or Limits()
    stats = _SearchStats()
    names = [v.id for v in model.variables]
    for point in _search_leaves(model, limits, stats):
        yield {name: Fraction(value) for name, value in zip(names, point)}


def solve_by_enumeration(model: Model, limits: Limits | None = None) -> OptimumReport:
    """Exact optimum by full enumeration; ties break to the
    lexicographically smallest witness in variable insertion order."""
    limits = limits or Limits()
    stats = _SearchStats()
    names = [v.id for v in model.variables]
    objective = model.objective

    obj_pairs: list[tuple[int, Fraction]] = []
    if objective is not None:
        positions = {var.id: i for i, var in enumerate(model.variables)}
        obj_pairs = [(positions[v], c) for v, c in objective.expr.terms.items()]

    best_value: Fraction | None = None
    best_point: tuple[int, ...] | None = None
    maximize = objective is not None and objective.direction.value == "max"

    for point in _search_leaves(model, limits, stats):
        if objective is None:
            value = Fraction(0)
        else:
            value = objective.expr.constant + sum(c * point[i] for i, c in obj_pairs)
        if best_value is None or (value > best_value if maximize else value < best_value):
            best_value = value
            best_point = point

    if best_point is None:
        return OptimumReport("infeasible", None, None, stats.enumerated)
    witness = {name: Fraction(value) for name, value in zip(names, best_point)}
    return OptimumReport("optimal", best_value, witness, stats.enumerated)
