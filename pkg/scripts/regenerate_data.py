"""Regenerate the shipped data files (tree document, corpus goldens).

Run from the repository root after changing the tree data or a corpus
builder:

    python scripts/regenerate_data.py

Every witness is verified against the direct constraint semantics before
it is written, so a stale fixture cannot ship.
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fractions import Fraction

from typedmilp import corpus, oracle
from typedmilp.emitters import write_model
from typedmilp.tree import canonical_tree_json

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "typedmilp" / "data"

WITNESSES: dict[str, dict[str, int]] = {
    "chemical-scheduling": {"inv_k1_t0": 1},
    "supply-chain-planning": {"carry_p0_t0": 1, "carry_p0_t1": 1, "end_p0": 1},
    "course-timetabling": {
        "assign_c0_p0_s0": 1, "assign_c1_p1_s1": 1,
        "lab_s0": 1, "proj_s0": 1, "lab_s1": 1, "proj_s1": 1,
    },
    "vrptw-multitrip": {
        "x_0_1": 1, "x_1_2": 1, "x_2_3": 1, "x_3_0": 1,
        "t_1": 1, "t_2": 2, "t_3": 4, "budget": 5,
    },
}

NOTES: dict[str, list[str]] = {
    "chemical-scheduling": [
        "batch quantities use an integer grid (unit = smallest batch increment) so exact enumeration applies",
        "all capacities, demands and the initial inventory are invented toy integers",
    ],
    "supply-chain-planning": [
        "capacity, reservation and safety levels are decision variables so the variable-bound sets 3/6 are exercised",
    ],
    "course-timetabling": [
        "sets 1, 10 and 14 of the source model are never characterized and are omitted",
        "sets 4-9 pack over reconstructed variable groups; only the set-to-node mapping is anchored",
        "if-then sets lower to the aggregated (weak) row by default; pass the strong option to compare relaxations",
    ],
    "vrptw-multitrip": [
        "single-vehicle reconstruction; multi-vehicle scales exceed desk-scale enumeration in v1",
        "time-window propagation uses expression-valued conditional bounds (big-M lowering path)",
    ],
}


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "corpus").mkdir(exist_ok=True)

    (DATA / "omt_tree.json").write_text(canonical_tree_json(), encoding="utf-8")
    print("wrote data/omt_tree.json")

    for case in corpus.case_ids():
        model = corpus.build(case)
        witness_ints = WITNESSES[case]
        witness = {v.id: Fraction(witness_ints.get(v.id, 0)) for v in model.variables}
        for i, constraint in enumerate(model.constraints):
            if not oracle.satisfies(constraint, witness):
                raise SystemExit(f"{case}: witness violates c{i} ({constraint.label})")
        (DATA / "corpus" / f"{case}.model.json").write_text(write_model(model), encoding="utf-8")
        fixture = {
            "case": case,
            "default_scale": corpus.default_scale(case),
            "expected_node_map": corpus.expected_node_map(case),
            "witness": witness_ints,
            "notes": NOTES[case],
        }
        (DATA / "corpus" / f"{case}.fixture.json").write_text(
            json.dumps(fixture, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        print(f"wrote data/corpus/{case}.model.json (+fixture)")


if __name__ == "__main__":
    main()
