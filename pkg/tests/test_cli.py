"""Command-line interface: subcommands, exit codes, output contracts."""

import json
from fractions import Fraction

import pytest

import typedmilp as tm
from typedmilp.cli import main
from typedmilp.emitters import write_model
from typedmilp.emitters.lp import emit_lp
from typedmilp.tree import canonical_tree_json


@pytest.fixture
def knapsack_path(tmp_path):
    m = tm.Model("knapsack")
    x1, x2 = m.binary("x1"), m.binary("x2")
    m.add_constraint(tm.Bound(
        tm.LinearExpr.weighted([(x1, 1), (x2, 2)]), tm.Sense.LE, Fraction(2), label="cap"))
    m.maximize(tm.LinearExpr.weighted([(x1, 3), (x2, 4)]))
    path = tmp_path / "knapsack.json"
    path.write_text(write_model(m), encoding="utf-8")
    return m, path


class TestSolve:
    def test_json_value(self, knapsack_path, capsys):
        _, path = knapsack_path
        assert main(["solve", str(path), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == {"num": 4, "den": 1}
        assert payload["status"] == "optimal"

    def test_human_output(self, knapsack_path, capsys):
        _, path = knapsack_path
        assert main(["solve", str(path)]) == 0
        out = capsys.readouterr().out
        assert "status: optimal" in out
        assert "value: 4" in out

    def test_missing_file_is_domain_error(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "missing.json")]) == 1
        err = capsys.readouterr().err
        assert "error[IoError]" in err


class TestCompile:
    def test_golden_lp_bytes(self, knapsack_path, tmp_path, capsys):
        model, path = knapsack_path
        out_path = tmp_path / "out.lp"
        assert main(["compile", str(path), "--format", "lp", "-o", str(out_path)]) == 0
        assert out_path.read_text("utf-8") == emit_lp(tm.lower_model(model))

    def test_stdout_when_no_output_file(self, knapsack_path, capsys):
        model, path = knapsack_path
        assert main(["compile", str(path), "--format", "mps"]) == 0
        from typedmilp.emitters.mps import emit_mps

        assert capsys.readouterr().out == emit_mps(tm.lower_model(model))

    def test_weak_if_then_flag(self, tmp_path, capsys):
        m = tm.Model("logic")
        x, y, z = m.binary("X"), m.binary("Y"), m.binary("Z")
        m.add_constraint(tm.IfThen((x,), (y, z)))
        m.maximize(tm.LinearExpr.var(x))
        path = tmp_path / "logic.json"
        path.write_text(write_model(m), encoding="utf-8")
        assert main(["compile", str(path), "--if-then", "weak"]) == 0
        weak_text = capsys.readouterr().out
        assert " c0: 2 X - Y - Z <= 0" in weak_text
        assert main(["compile", str(path), "--if-then", "strong"]) == 0
        strong_text = capsys.readouterr().out
        assert " c0: X - Y <= 0" in strong_text
        assert " c1: X - Z <= 0" in strong_text

    def test_missing_file(self, tmp_path, capsys):
        assert main(["compile", str(tmp_path / "nope.json")]) == 1
        assert "error[" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self, knapsack_path, capsys):
        _, path = knapsack_path
        with pytest.raises(SystemExit) as exit_info:
            main(["compile", str(path), "--bogus"])
        assert exit_info.value.code == 2
        assert "usage" in capsys.readouterr().err


class TestCheck:
    def test_clean_model(self, knapsack_path, capsys):
        _, path = knapsack_path
        assert main(["check", str(path), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"] is True

    def test_box_cap_exceeded(self, tmp_path, capsys):
        m = tm.Model()
        x = m.integer("x", 0, 10**6)
        m.add_constraint(tm.Bound(tm.LinearExpr.var(x), tm.Sense.LE, Fraction(5)))
        path = tmp_path / "big.json"
        path.write_text(write_model(m), encoding="utf-8")
        assert main(["check", str(path)]) == 1
        assert "BoxTooLarge" in capsys.readouterr().err


class TestTree:
    def test_json_matches_canonical_document(self, capsys):
        assert main(["tree", "--json"]) == 0
        assert capsys.readouterr().out == canonical_tree_json()

    def test_human_outline_covers_anchored_leaves(self, capsys):
        assert main(["tree"]) == 0
        out = capsys.readouterr().out
        for needle in ("[11] set-packing", "[17] set-partitioning", "[24] if-then-multi"):
            assert needle in out


class TestCorpus:
    def test_build_writes_golden_document(self, tmp_path, capsys):
        from typedmilp import corpus

        out = tmp_path / "case.json"
        assert main(["corpus", "build", "course-timetabling", "-o", str(out)]) == 0
        assert out.read_text("utf-8") == corpus.golden_document("course-timetabling")

    def test_build_with_scale(self, tmp_path, capsys):
        out = tmp_path / "case.json"
        assert main(["corpus", "build", "chemical-scheduling",
                     "--scale", "periods=1", "-o", str(out)]) == 0
        document = json.loads(out.read_text("utf-8"))
        assert all("t1" not in v["name"] for v in document["variables"])

    def test_bad_scale_pair(self, capsys):
        assert main(["corpus", "build", "chemical-scheduling", "--scale", "periods"]) == 1
        assert "BadParams" in capsys.readouterr().err

    def test_verify_all_cases(self, capsys):
        assert main(["corpus", "verify", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"] is True
        assert set(payload["cases"]) == {
            "chemical-scheduling", "supply-chain-planning",
            "course-timetabling", "vrptw-multitrip",
        }


class TestJsonRoundTrip:
    def test_solve_json_parses_back_to_report(self, knapsack_path, capsys):
        from typedmilp.rationals import from_json

        _, path = knapsack_path
        main(["solve", str(path), "--json"])
        payload = json.loads(capsys.readouterr().out)
        value = from_json(payload["value"])
        witness = {k: from_json(v) for k, v in payload["witness"].items()}
        report = tm.solve_by_enumeration(tm.Model("empty"))  # shape only
        assert value == 4
        assert witness["x2"] == 1
        assert set(payload) == set(report.to_json())
