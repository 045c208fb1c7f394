"""Case-study corpus: node maps, golden documents, feasibility, scales."""

import time
from fractions import Fraction

import pytest

import typedmilp as tm
from typedmilp import corpus
from typedmilp.emitters import parse_model, write_model
from typedmilp.errors import ToolkitError
from typedmilp.oracle import Limits, satisfies, solve_by_enumeration

SOLVE_LIMITS = Limits(max_points=10**13)


class TestBuilders:
    def test_case_ids(self):
        assert corpus.case_ids() == [
            "chemical-scheduling", "supply-chain-planning",
            "course-timetabling", "vrptw-multitrip",
        ]

    def test_unknown_case(self):
        with pytest.raises(ToolkitError) as err:
            corpus.build("nope")
        assert err.value.code == "UnknownCase"

    def test_bad_scale_value(self):
        with pytest.raises(ToolkitError) as err:
            corpus.build("vrptw-multitrip", {"customers": 0})
        assert err.value.code == "BadParams"

    def test_scale_too_large(self):
        with pytest.raises(ToolkitError) as err:
            corpus.build("chemical-scheduling", {"periods": 12})
        assert err.value.code == "ScaleTooLarge"
        with pytest.raises(ToolkitError) as err:
            corpus.build("vrptw-multitrip", {"vehicles": 2})
        assert err.value.code == "ScaleTooLarge"

    def test_unknown_scale_key(self):
        with pytest.raises(ToolkitError) as err:
            corpus.build("chemical-scheduling", {"machines": 2})
        assert err.value.code == "BadParams"

    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_default_build_validates_cleanly(self, case):
        model = corpus.build(case)
        assert [d for d in tm.validate(model) if d.severity == "error"] == []

    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_every_constraint_is_tagged(self, case):
        model = corpus.build(case)
        for constraint in model.constraints:
            assert constraint.omt_node is not None
            assert constraint.label.startswith("set")


class TestNodeMaps:
    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_default_scale_fidelity(self, case):
        ok, got, expected = corpus.verify_node_map(case)
        assert ok, (got, expected)

    def test_supply_chain_table_matches_published_mapping(self):
        table = corpus.expected_node_map("supply-chain-planning")
        assert table == {
            "set1": [12], "set2": [13], "set3": [2, 8],
            "set4": [3, 9], "set5": [13], "set6": [2, 8],
        }

    def test_timetabling_packing_sets(self):
        table = corpus.expected_node_map("course-timetabling")
        for label in ("set4", "set5", "set6", "set7", "set8", "set9"):
            assert table[label] == [11]

    def test_alternate_scales_keep_fidelity(self):
        ok, got, expected = corpus.verify_node_map("chemical-scheduling",
                                                   {"units": 1, "tasks": 2, "periods": 3})
        assert ok, (got, expected)
        ok, got, expected = corpus.verify_node_map("course-timetabling",
                                                   {"courses": 3, "professors": 3, "slots": 3})
        assert ok, (got, expected)
        ok, got, expected = corpus.verify_node_map("vrptw-multitrip", {"customers": 2})
        assert ok, (got, expected)


class TestGoldenFiles:
    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_build_matches_golden_document(self, case):
        assert write_model(corpus.build(case)) == corpus.golden_document(case)

    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_golden_document_parses_back(self, case):
        assert parse_model(corpus.golden_document(case)) == corpus.build(case)

    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_fixture_witness_is_feasible(self, case):
        model = corpus.build(case)
        fixture = corpus.fixture(case)
        witness = {v.id: Fraction(fixture["witness"].get(v.id, 0)) for v in model.variables}
        for i, constraint in enumerate(model.constraints):
            assert satisfies(constraint, witness), f"c{i} ({constraint.label})"

    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_fixture_tables_match_module(self, case):
        fixture = corpus.fixture(case)
        assert fixture["expected_node_map"] == corpus.expected_node_map(case)
        assert fixture["default_scale"] == corpus.default_scale(case)


class TestSolvability:
    @pytest.mark.parametrize("case", corpus.case_ids())
    def test_default_scale_solves_fast_and_feasible(self, case):
        model = corpus.build(case)
        started = time.monotonic()
        report = solve_by_enumeration(model, SOLVE_LIMITS)
        elapsed = time.monotonic() - started
        assert report.status == "optimal"
        assert elapsed < 60
        for constraint in model.constraints:
            assert satisfies(constraint, report.witness)
        assert tm.evaluate_expr(model.objective.expr, report.witness) == report.objective_value
