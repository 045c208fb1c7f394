"""Command-line front door.

Subcommands: compile, solve, check, tree, corpus build/verify, serve.
Exit codes: 0 success, 1 domain error (validation failures, parse errors,
infeasibility is NOT an error), 2 usage error (argparse). With ``--json``
all output is machine-readable; errors then print the error envelope as
JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import corpus as corpus_module
from . import oracle
from .emitters import parse_model, write_model
from .emitters.lp import emit_lp
from .emitters.mps import emit_mps
from .errors import ToolkitError, ValidationFailed
from .lowering import LowerOptions, lower_model
from .tree import canonical_tree_json, load_tree


def _read_model(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ToolkitError("IoError", f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_model(text)


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise ToolkitError("IoError", f"cannot write {out_path}: {exc.strerror or exc}") from exc


def _cmd_compile(args) -> int:
    model = _read_model(args.model)
    options = LowerOptions(if_then_strength=args.if_then)
    form = lower_model(model, options)
    text = emit_lp(form) if args.format == "lp" else emit_mps(form)
    _write_output(text, args.output)
    return 0


def _cmd_solve(args) -> int:
    model = _read_model(args.model)
    report = oracle.solve_by_enumeration(model, oracle.Limits(max_points=args.max_points))
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(f"status: {report.status}")
        if report.status == "optimal":
            print(f"value: {report.objective_value}")
            witness = " ".join(f"{k}={v}" for k, v in report.witness.items())
            print(f"witness: {witness}")
        print(f"points enumerated: {report.points_enumerated}")
    return 0


def _cmd_check(args) -> int:
    model = _read_model(args.model)
    reports = oracle.check_model(
        model, LowerOptions(if_then_strength=args.if_then),
        continuous_samples=args.continuous_samples, cap=args.box_cap)
    ok = all(r.equivalent for _, r in reports)
    if args.json:
        payload = {
            "ok": ok,
            "constraints": [
                {
                    "id": cid,
                    "points_checked": r.points_checked,
                    "mismatch_count": len(r.mismatches),
                }
                for cid, r in reports
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for cid, r in reports:
            verdict = "ok" if r.equivalent else f"{len(r.mismatches)} mismatches"
            print(f"{cid}: {r.points_checked} points, {verdict}")
        print("ok" if ok else "MISMATCHES FOUND")
    if not ok:
        raise ToolkitError("EquivalenceMismatch", "lowered rows disagree with constraint semantics")
    return 0


def _cmd_tree(args) -> int:
    tree = load_tree()
    if args.json:
        sys.stdout.write(canonical_tree_json(tree))
        return 0
    def walk(node_id: int, depth: int) -> None:
        node = tree.node(node_id)
        pad = "  " * depth
        if node.kind == "internal":
            print(f"{pad}[{node.id}] {node.label}: {node.question}")
            for answer, child in node.children:
                print(f'{pad}  answer "{answer}":')
                walk(child, depth + 2)
        else:
            anchored = ", anchored" if node.anchored else ""
            slots = ", ".join(f"{s.name} ({s.kind.value})" for s in node.template.slots)
            print(f"{pad}[{node.id}] {node.label} (leaf{anchored}) -> {node.template.family}; slots: {slots}")
    walk(tree.root, 0)
    return 0


def _parse_scale(pairs: Sequence[str]) -> dict:
    scale = {}
    for pair in pairs:
        if "=" not in pair:
            raise ToolkitError("BadParams", f"scale must be key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        try:
            scale[key] = int(value)
        except ValueError:
            raise ToolkitError("BadParams", f"scale value for {key!r} must be an integer") from None
    return scale


def _cmd_corpus_build(args) -> int:
    model = corpus_module.build(args.case, _parse_scale(args.scale))
    _write_output(write_model(model), args.output)
    return 0


def _cmd_corpus_verify(args) -> int:
    results = {}
    ok = True
    for case in corpus_module.case_ids():
        case_ok, got, expected = corpus_module.verify_node_map(case)
        ok = ok and case_ok
        results[case] = {"ok": case_ok, "got": got, "expected": expected}
        if not args.json:
            print(f"{case}: {'ok' if case_ok else 'NODE MAP MISMATCH'}")
            if not case_ok:
                print(f"  expected: {expected}")
                print(f"  got:      {got}")
    if args.json:
        print(json.dumps({"ok": ok, "cases": results}, indent=2))
    if not ok:
        raise ToolkitError("NodeMapMismatch", "a case study classifies off its expected node map")
    return 0


def _cmd_serve(args) -> int:
    from .service import run

    run(port=args.port, host=args.host)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typedmilp",
        description="Typed MILP modeling toolkit: compile, solve, check, inspect the tree, run the corpus, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="lower a model document and emit LP or MPS")
    p_compile.add_argument("model", help="path to a model document (JSON)")
    p_compile.add_argument("--format", choices=["lp", "mps"], default="lp")
    p_compile.add_argument("--if-then", choices=["weak", "strong"], default="strong")
    p_compile.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p_compile.set_defaults(func=_cmd_compile)

    p_solve = sub.add_parser("solve", help="solve a pure-integer model by exact enumeration")
    p_solve.add_argument("model")
    p_solve.add_argument("--max-points", type=int, default=oracle.Limits().max_points)
    p_solve.add_argument("--json", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_check = sub.add_parser("check", help="verify lowering against constraint semantics")
    p_check.add_argument("model")
    p_check.add_argument("--box-cap", type=int, default=oracle.DEFAULT_CHECK_CAP)
    p_check.add_argument("--continuous-samples", type=int, default=3)
    p_check.add_argument("--if-then", choices=["weak", "strong"], default="strong")
    p_check.add_argument("--json", action="store_true")
    p_check.set_defaults(func=_cmd_check)

    p_tree = sub.add_parser("tree", help="print the modelling tree")
    p_tree.add_argument("--json", action="store_true")
    p_tree.set_defaults(func=_cmd_tree)

    p_corpus = sub.add_parser("corpus", help="case-study corpus")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)
    p_build = corpus_sub.add_parser("build", help="build a case study model document")
    p_build.add_argument("case", choices=corpus_module.case_ids())
    p_build.add_argument("--scale", action="append", default=[], metavar="KEY=VALUE")
    p_build.add_argument("-o", "--output", default=None)
    p_build.set_defaults(func=_cmd_corpus_build)
    p_verify = corpus_sub.add_parser("verify", help="check node-map fidelity for all cases")
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=_cmd_corpus_verify)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=int(os.environ.get("PORT", "8000")))
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailed as exc:
        _print_error(exc, getattr(args, "json", False))
        return 1
    except ToolkitError as exc:
        _print_error(exc, getattr(args, "json", False))
        return 1


def _print_error(exc: ToolkitError, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"error": exc.envelope()}), file=sys.stderr)
    else:
        subject = f" ({exc.subject})" if exc.subject else ""
        print(f"error[{exc.code}]: {exc.message}{subject}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
