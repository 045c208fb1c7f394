"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every tolerance and cap is pinned here; nothing is deferred.
"""

import math
import random
import time
from dataclasses import replace
from fractions import Fraction
from itertools import permutations, product

import pytest

import typedmilp as tm
from typedmilp import corpus
from typedmilp.emitters import emit_lp, emit_mps, parse_canonical, parse_model, write_model
from typedmilp.lowering import form_as_raw_model
from typedmilp.oracle import Limits, check_equivalence, enumerate_feasible, row_satisfied

from conftest import FAMILIES, InstanceBuilder, random_model


def report(criterion: str, detail: str) -> None:
    print(f"ACCEPTANCE PASS — {criterion}: {detail}")


class TestCriterion1LoweringEquivalence:
    """>= 50 randomized instances per family, boxes up to 2e4 points,
    auxiliary projection within the 2^16 combined cap: zero mismatches."""

    def test_equivalence_across_all_families(self):
        rng = random.Random(7001)
        budgets = {"either_or": (100, 400, 2000, 8000)}
        default_budgets = (100, 400, 2000, 20000)
        started = time.monotonic()
        total_points = 0
        for family in FAMILIES:
            for k in range(50):
                budget = budgets.get(family, default_budgets)[k % 4]
                builder = InstanceBuilder(rng, max_box_points=budget)
                model, constraint = builder.build(family)
                rows, aux = tm.lower_constraint(constraint, model.bounds(), source="c0")
                box = tm.build_sample_box(model.variables)
                assert box.size() <= 2 * 10**4
                assert box.size() * 2 ** len(aux) <= 2**16 or not aux
                result = check_equivalence(constraint, rows, aux, box)
                assert result.mismatches == (), (family, k, constraint)
                total_points += result.points_checked
        elapsed = time.monotonic() - started
        assert elapsed < 60, f"equivalence sweep took {elapsed:.1f}s"
        report("lowering-semantics equivalence",
               f"10 families x 50 instances, {total_points} points, {elapsed:.1f}s, 0 mismatches")


class TestCriterion2IfThenWeakVsStrong:
    def _satisfied_sets(self, constraint, bounds, literals):
        weak_rows, _ = tm.lower_constraint(constraint, bounds, tm.LowerOptions(if_then_strength="weak"))
        strong_rows, _ = tm.lower_constraint(constraint, bounds, tm.LowerOptions(if_then_strength="strong"))
        weak_set, strong_set, semantic_set = set(), set(), set()
        for values in product((0, 1), repeat=len(literals)):
            point = {v: Fraction(x) for v, x in zip(literals, values)}
            if all(row_satisfied(r, point) for r in weak_rows):
                weak_set.add(values)
            if all(row_satisfied(r, point) for r in strong_rows):
                strong_set.add(values)
            if tm.satisfies(constraint, point):
                semantic_set.add(values)
        return weak_set, strong_set, semantic_set

    def test_integer_equivalence_and_fractional_separation(self):
        # (a) the cited single-antecedent, two-consequent instance over 2^3
        m = tm.Model()
        x, y, z = m.binary("X"), m.binary("Y"), m.binary("Z")
        cited = tm.IfThen((x,), (y, z))
        weak_set, strong_set, semantic_set = self._satisfied_sets(cited, m.bounds(), [x, y, z])
        assert weak_set == strong_set == semantic_set

        # (a) randomized instances with k+m <= 12 distinct literals
        rng = random.Random(7002)
        checked = 0
        for _ in range(30):
            k = rng.randint(1, 6)
            mm = rng.randint(1, 12 - k)
            model = tm.Model()
            literals = [model.binary(f"b{i}") for i in range(k + mm)]
            constraint = tm.IfThen(tuple(literals[:k]), tuple(literals[k:]))
            weak_set, strong_set, semantic_set = self._satisfied_sets(
                constraint, model.bounds(), literals)
            assert weak_set == strong_set == semantic_set
            checked += 2 ** (k + mm)

        # (b) the fractional point satisfies weak but violates strong
        point = {x: Fraction(1, 2), y: Fraction(1), z: Fraction(0)}
        weak_rows, _ = tm.lower_constraint(cited, m.bounds(), tm.LowerOptions(if_then_strength="weak"))
        strong_rows, _ = tm.lower_constraint(cited, m.bounds(), tm.LowerOptions(if_then_strength="strong"))
        assert all(row_satisfied(r, point) for r in weak_rows)
        assert not all(row_satisfied(r, point) for r in strong_rows)

        # the weak row is the sum of the strong rows, so strong dominates
        weak = weak_rows[0]
        summed: dict[str, Fraction] = {}
        rhs = Fraction(0)
        for r in strong_rows:
            rhs += r.rhs
            for var, coeff in r.coefficients.items():
                summed[var] = summed.get(var, Fraction(0)) + coeff
        assert summed == weak.coefficients and rhs == weak.rhs
        report("if-then weak vs strong",
               f"cited instance + 30 randomized (2^(k+m) points, {checked} total); "
               f"fractional witness (1/2, 1, 0) separates the relaxations")


class TestCriterion3BigMTightness:
    def _shrink(self, row, selector_ids):
        """The same row with every selector's relaxation constant reduced by 1."""
        coeffs = dict(row.coefficients)
        rhs = row.rhs
        for sel in selector_ids:
            if sel not in coeffs:
                continue
            if coeffs[sel] > 0:
                coeffs[sel] -= 1
                if row.sense is tm.Sense.LE:
                    rhs -= 1
            else:
                coeffs[sel] += 1
                if row.sense is tm.Sense.GE:
                    rhs += 1
        return replace(row, coefficients={k: v for k, v in coeffs.items() if v != 0}, rhs=rhs)

    def test_derived_constant_is_sufficient_and_tight(self):
        rng = random.Random(7003)
        builder = InstanceBuilder(rng, max_box_points=10**4,
                                  allow_continuous=False, integer_data=True)
        checked = tight = 0
        while checked < 25:
            family = "conditional_bound" if checked % 2 == 0 else "either_or"
            model, constraint = builder.build(family)
            if isinstance(constraint, tm.ConditionalBound):
                constraint = replace(constraint, off_behavior=tm.OffBehavior.FREE)
                selectors = [constraint.indicator]
            rows, aux = tm.lower_constraint(constraint, model.bounds(), source="c0")
            if isinstance(constraint, tm.EitherOr):
                selectors = [v.id for v in aux]
            box = tm.build_sample_box(model.variables)
            assert box.size() <= 10**4
            clean = check_equivalence(constraint, rows, aux, box)
            assert clean.mismatches == (), constraint

            relaxation = max(
                (abs(row.coefficients.get(sel, Fraction(0))) for row in rows for sel in selectors),
                default=Fraction(0))
            assert relaxation.denominator == 1  # integer data -> integer constant
            checked += 1
            if relaxation == 0:
                continue
            shrunk = [self._shrink(row, selectors) for row in rows]
            broken = check_equivalence(constraint, shrunk, aux, box)
            assert broken.mismatches, (constraint, rows)
            tight += 1
        assert tight >= 15  # the sweep must actually exercise nonzero constants
        report("big-M tightness",
               f"25 instances: derived constants equivalent; M-1 broke {tight} (all with M > 0)")


class TestCriterion4CorpusNodeMaps:
    EXPECTED_NODE_SETS = {
        "chemical-scheduling": {11, 3, 9, 14, 7},
        "supply-chain-planning": {12, 13, 2, 8, 3, 9},
        "course-timetabling": {17, 11, 24},
        "vrptw-multitrip": {17, 19, 14, 3, 9, 11, 2},
    }

    def test_default_scale_fidelity(self):
        started = time.monotonic()
        for case in corpus.case_ids():
            ok, got, expected = corpus.verify_node_map(case)
            assert ok, (case, got, expected)
            union = {node for nodes in got.values() for node in nodes}
            assert union == self.EXPECTED_NODE_SETS[case], case
        elapsed = time.monotonic() - started
        assert elapsed < 5
        report("corpus node-map fidelity", f"4 cases at default scales, {elapsed:.2f}s")


class TestCriterion5AtspImplicitMapping:
    # fixed toy distance matrices (diagonal unused)
    DISTANCES = {
        4: [
            [0, 2, 9, 5],
            [4, 0, 3, 7],
            [8, 1, 0, 2],
            [6, 5, 4, 0],
        ],
        5: [
            [0, 3, 8, 2, 7],
            [5, 0, 4, 9, 1],
            [6, 2, 0, 5, 8],
            [3, 7, 1, 0, 4],
            [9, 4, 6, 2, 0],
        ],
        6: [
            [0, 4, 7, 3, 8, 2],
            [6, 0, 5, 9, 1, 7],
            [3, 8, 0, 4, 6, 5],
            [9, 2, 6, 0, 3, 8],
            [5, 7, 1, 6, 0, 4],
            [2, 9, 4, 7, 5, 0],
        ],
    }
    # frozen: computed by the permutation oracle below
    EXPECTED_OPTIMA = {4: 13, 5: 13, 6: 14}

    @staticmethod
    def tour_oracle(n, dist):
        """Independent brute force over all (n-1)! closed tours."""
        best = None
        for perm in permutations(range(1, n)):
            tour = (0,) + perm
            cost = sum(dist[tour[k]][tour[(k + 1) % n]] for k in range(n))
            if best is None or cost < best:
                best = cost
        return best

    @staticmethod
    def decode_circuit(n, point, arcs):
        """The chosen arc set must be one closed tour through all n cities."""
        successor = {}
        for i in range(n):
            outs = [j for j in range(n) if j != i and point[arcs[i][j]] == 1]
            if len(outs) != 1:
                return False
            successor[i] = outs[0]
        seen = [0]
        while True:
            nxt = successor[seen[-1]]
            if nxt == 0:
                break
            if nxt in seen:
                return False
            seen.append(nxt)
        return len(seen) == n

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_expanded_model_solves_to_tour_optimum(self, n):
        dist = self.DISTANCES[n]
        started = time.monotonic()
        model = tm.Model(f"atsp-{n}")
        arcs = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j:
                    arcs[i][j] = model.binary(f"x_{i}_{j}")
        expansion = tm.expand(model, "atsp-tour", {"arcs": arcs})
        for constraint in expansion.constraints:
            model.add_constraint(constraint)
        model.minimize(tm.LinearExpr.weighted(
            (arcs[i][j], Fraction(dist[i][j]))
            for i in range(n) for j in range(n) if i != j))

        solved = tm.solve_by_enumeration(model, Limits(max_points=2**30))
        oracle_best = self.tour_oracle(n, dist)
        assert solved.status == "optimal"
        assert oracle_best == self.EXPECTED_OPTIMA[n]
        assert solved.objective_value == oracle_best

        count = 0
        for point in enumerate_feasible(model, Limits(max_points=2**30)):
            assert self.decode_circuit(n, point, arcs)
            count += 1
        assert count == math.factorial(n - 1)
        elapsed = time.monotonic() - started
        assert elapsed < 120
        report(f"atsp implicit mapping (n={n})",
               f"optimum {solved.objective_value} = tour oracle; "
               f"{count} feasible points, all circuits; {elapsed:.1f}s")


class TestCriterion6EmitterRoundTrips:
    def test_corpus_and_random_round_trips(self):
        models = [corpus.build(case) for case in corpus.case_ids()]
        rng = random.Random(7006)
        models += [random_model(rng) for _ in range(100)]
        for k, model in enumerate(models):
            form = tm.lower_model(model)
            lp_text = emit_lp(form)
            mps_text = emit_mps(form)
            assert parse_canonical(lp_text) == form, k
            assert parse_canonical(mps_text) == form, k
            document = write_model(model)
            assert parse_model(document) == model, k
            assert emit_lp(tm.lower_model(model)) == lp_text, k
            assert emit_mps(tm.lower_model(model)) == mps_text, k
            assert write_model(model) == document, k
        report("emitter round-trips",
               f"{len(models)} models (4 corpus + 100 random): LP, MPS, document identities; "
               f"byte-deterministic across re-emission")


class TestCriterion7CorpusSolvability:
    def test_solves_and_survives_row_shuffle_and_scaling(self):
        rng = random.Random(7007)
        for case in corpus.case_ids():
            model = corpus.build(case)
            started = time.monotonic()
            direct = tm.solve_by_enumeration(model, Limits(max_points=10**13))
            elapsed = time.monotonic() - started
            assert direct.status == "optimal"
            assert elapsed < 60, (case, elapsed)

            form = tm.lower_model(model)
            scales = [Fraction(rng.randint(1, 7), rng.randint(1, 7)) for _ in form.rows]
            raw = form_as_raw_model(form, scales)
            order = list(range(len(raw.constraints)))
            rng.shuffle(order)
            raw.constraints = [raw.constraints[i] for i in order]
            shuffled = tm.solve_by_enumeration(raw, Limits(max_points=10**13))
            assert shuffled.status == "optimal"
            assert shuffled.objective_value == direct.objective_value, case
            assert shuffled.witness == direct.witness, case
            report(f"corpus solvability ({case})",
                   f"optimum {direct.objective_value} in {elapsed:.1f}s; "
                   f"row-shuffled + scaled re-enumeration agrees")
