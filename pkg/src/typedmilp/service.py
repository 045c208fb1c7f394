"""HTTP facade over the toolkit (JSON API under /api/v1).

Sessions are in-memory elicitation workspaces: a model under construction
plus a cursor into the modelling tree. Mutations on one session are
serialized behind a per-session lock; everything else is stateless and
delegates to the library, so service responses equal direct library
results byte-for-byte modulo the response envelope.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from . import implicit as implicit_module
from . import oracle
from .core import Model
from .emitters import expr_from_json, model_to_document
from .emitters.document import document_to_model
from .emitters.lp import emit_lp
from .emitters.mps import emit_mps
from .errors import ToolkitError, ValidationFailed
from .lowering import LowerOptions, lower_model
from .rationals import from_json
from .tree import SlotKind, canonical_tree_json, instantiate, load_tree, tree_to_document

DEFAULT_SESSION_CAPACITY = 1024
DEFAULT_SESSION_TTL = 24 * 3600.0
# large enough for every shipped corpus case (the pruned walk stays small)
MAX_SOLVE_POINTS = 10**12

_NOT_FOUND_CODES = {"SessionNotFound", "UnknownCase", "UnknownMapping", "UnknownNode", "UnknownConstraint"}


@dataclass
class Session:
    id: str
    model: Model
    cursor: int
    history: list[dict] = field(default_factory=list)
    created_at: float = 0.0
    updated_at: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    def __init__(self, capacity: int, ttl: float, clock=time.time):
        self._sessions: dict[str, Session] = {}
        self._capacity = capacity
        self._ttl = ttl
        self._clock = clock
        self._lock = threading.Lock()

    def _purge(self, now: float) -> None:
        expired = [sid for sid, s in self._sessions.items() if now - s.updated_at > self._ttl]
        for sid in expired:
            del self._sessions[sid]

    def create(self, root: int, model_name: str | None = None) -> Session:
        now = self._clock()
        with self._lock:
            self._purge(now)
            if len(self._sessions) >= self._capacity:
                raise ToolkitError("CapacityExceeded", f"session capacity {self._capacity} reached")
            sid = uuid.uuid4().hex
            session = Session(id=sid, model=Model(model_name or f"session-{sid[:8]}"),
                              cursor=root, created_at=now, updated_at=now)
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Session:
        now = self._clock()
        with self._lock:
            self._purge(now)
            if sid not in self._sessions:
                raise ToolkitError("SessionNotFound", f"no session {sid!r}", sid)
            return self._sessions[sid]


def _session_view(session: Session, tree) -> dict:
    node = tree.node(session.cursor)
    template = None
    question = None
    answers = None
    if node.kind == "leaf":
        template = {
            "family": node.template.family,
            "fixed": node.template.fixed,
            "slots": [{"name": s.name, "kind": s.kind.value} for s in node.template.slots],
        }
    else:
        question = node.question
        answers = [a for a, _ in node.children]
    return {
        "id": session.id,
        "cursor": session.cursor,
        "node_kind": node.kind,
        "question": question,
        "answers": answers,
        "template": template,
        "history": list(session.history),
        "model": model_to_document(session.model),
        "created_at": session.created_at,
        "updated_at": session.updated_at,
    }


def _convert_bindings(tree, leaf_id: int, raw: Any) -> dict:
    """JSON binding values -> Python values, per the leaf's slot kinds."""
    node = tree.node(leaf_id)
    if node.kind != "leaf" or node.template is None:
        raise ToolkitError("NotLeaf", f"node {leaf_id} is internal", str(leaf_id))
    if not isinstance(raw, dict):
        raise ToolkitError("KindMismatch", "bindings must be an object")
    kinds = {s.name: s.kind for s in node.template.slots}
    out: dict[str, Any] = {}
    for name, value in raw.items():
        kind = kinds.get(name)
        if kind is SlotKind.EXPRESSION and isinstance(value, dict):
            out[name] = expr_from_json(value)
        elif kind is SlotKind.RATIONAL and isinstance(value, (dict, int)):
            out[name] = from_json(value)
        else:
            out[name] = value
    return out


def _require_field(body: Any, name: str):
    if not isinstance(body, dict) or name not in body:
        raise ToolkitError("BadParams", f"request body misses {name!r}", name)
    return body[name]


def create_app(
    session_capacity: int = DEFAULT_SESSION_CAPACITY,
    session_ttl: float = DEFAULT_SESSION_TTL,
    clock=time.time,
) -> FastAPI:
    app = FastAPI(title="typedmilp", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    tree = load_tree()
    store = SessionStore(session_capacity, session_ttl, clock)

    @app.exception_handler(ToolkitError)
    async def _toolkit_error(_request: Request, exc: ToolkitError):
        if exc.code == "CapacityExceeded":
            status = 503
        elif exc.code in _NOT_FOUND_CODES:
            status = 404
        else:
            status = 400
        return JSONResponse(status_code=status, content=exc.envelope())

    @app.get("/api/v1/omt/tree")
    def get_tree():
        return Response(content=canonical_tree_json(tree), media_type="application/json")

    @app.get("/api/v1/mappings")
    def get_mappings():
        return [m.to_json() for m in implicit_module.list_mappings()]

    @app.post("/api/v1/sessions", status_code=201)
    def create_session(body: dict | None = None):
        name = (body or {}).get("name")
        if name is not None and not isinstance(name, str):
            raise ToolkitError("BadParams", "session model name must be a string", "name")
        session = store.create(tree.root, name)
        return _session_view(session, tree)

    @app.get("/api/v1/sessions/{sid}")
    def get_session(sid: str):
        session = store.get(sid)
        with session.lock:
            return _session_view(session, tree)

    @app.post("/api/v1/sessions/{sid}/variables")
    def declare_variable(sid: str, body: dict):
        session = store.get(sid)
        name = _require_field(body, "name")
        kind = _require_field(body, "kind")
        lower = body.get("lower")
        upper = body.get("upper")
        with session.lock:
            session.model.add_variable(
                name, kind,
                None if lower is None else from_json(lower),
                None if upper is None else from_json(upper),
            )
            session.history.append({
                "kind": "variable", "name": name, "var_kind": kind,
                "lower": lower, "upper": upper,
            })
            session.updated_at = clock()
            return _session_view(session, tree)

    @app.post("/api/v1/sessions/{sid}/answers")
    def answer(sid: str, body: dict):
        session = store.get(sid)
        label = _require_field(body, "answer")
        with session.lock:
            node = tree.node(session.cursor)
            if node.kind != "internal":
                raise ToolkitError("AtLeaf", f"cursor is at leaf {node.id}; attach a constraint instead", str(node.id))
            child = node.child_for(label)
            if child is None:
                raise ToolkitError("UnknownAnswer", f"node {node.id} has no answer {label!r}", str(node.id))
            session.history.append({"kind": "answer", "node": node.id, "answer": label})
            session.cursor = child
            session.updated_at = clock()
            return _session_view(session, tree)

    @app.post("/api/v1/sessions/{sid}/constraints")
    def attach(sid: str, body: dict):
        session = store.get(sid)
        leaf = _require_field(body, "leaf")
        raw_bindings = _require_field(body, "bindings")
        label = body.get("label", "")
        with session.lock:
            bindings = _convert_bindings(tree, leaf, raw_bindings)
            constraint = instantiate(tree, leaf, bindings, label=label)
            session.model.add_constraint(constraint)
            session.history.append({
                "kind": "constraint", "leaf": leaf, "bindings": raw_bindings, "label": label,
            })
            session.cursor = tree.root
            session.updated_at = clock()
            return _session_view(session, tree)

    @app.post("/api/v1/sessions/{sid}/implicit")
    def attach_implicit(sid: str, body: dict):
        session = store.get(sid)
        mapping_id = _require_field(body, "mapping")
        params = body.get("params", {})
        with session.lock:
            result = implicit_module.expand(session.model, mapping_id, params)
            for variable in result.new_variables:
                session.model.add_variable(variable.name, variable.kind, variable.lower, variable.upper)
            for constraint in result.constraints:
                session.model.add_constraint(constraint)
            session.history.append({"kind": "implicit", "mapping": mapping_id, "params": params})
            session.cursor = tree.root
            session.updated_at = clock()
            return _session_view(session, tree)

    @app.get("/api/v1/sessions/{sid}/model")
    def session_model(sid: str):
        session = store.get(sid)
        with session.lock:
            return model_to_document(session.model)

    @app.post("/api/v1/sessions/{sid}/objective")
    def set_objective(sid: str, body: dict):
        session = store.get(sid)
        direction = _require_field(body, "direction")
        expr = expr_from_json(_require_field(body, "expr"))
        with session.lock:
            session.model.set_objective(direction, expr)
            session.history.append({"kind": "objective", "direction": direction,
                                    "expr": _require_field(body, "expr")})
            session.updated_at = clock()
            return _session_view(session, tree)

    def _model_from_body(body: dict) -> Model:
        return document_to_model(_require_field(body, "model"))

    @app.post("/api/v1/models/compile")
    def compile_model(body: dict):
        model = _model_from_body(body)
        fmt = body.get("format", "lp")
        options = LowerOptions(if_then_strength=body.get("if_then_strength", "strong"))
        form = lower_model(model, options)
        if fmt == "lp":
            return PlainTextResponse(emit_lp(form))
        if fmt == "mps":
            return PlainTextResponse(emit_mps(form))
        raise ToolkitError("BadParams", f"unknown format {fmt!r}", "format")

    @app.post("/api/v1/models/solve")
    def solve_model(body: dict):
        model = _model_from_body(body)
        raw_limits = body.get("limits") or {}
        max_points = raw_limits.get("max_points", oracle.Limits().max_points)
        if not isinstance(max_points, int) or max_points < 1 or max_points > MAX_SOLVE_POINTS:
            raise ToolkitError("BadParams", f"max_points must be in [1, {MAX_SOLVE_POINTS}]", "limits")
        report = oracle.solve_by_enumeration(model, oracle.Limits(max_points=max_points))
        return report.to_json()

    @app.post("/api/v1/models/check")
    def check_model(body: dict):
        model = _model_from_body(body)
        raw_box = body.get("box") or {}
        cap = raw_box.get("cap", oracle.DEFAULT_CHECK_CAP)
        samples = raw_box.get("continuous_samples", 3)
        if not isinstance(cap, int) or cap < 1 or cap > 10 * oracle.DEFAULT_CHECK_CAP:
            raise ToolkitError("BadParams", "box cap out of range", "box")
        options = LowerOptions(if_then_strength=body.get("if_then_strength", "strong"))
        reports = oracle.check_model(model, options, continuous_samples=samples, cap=cap)
        return {
            "ok": all(r.equivalent for _, r in reports),
            "points_checked": sum(r.points_checked for _, r in reports),
            "constraints": [
                {
                    "id": cid,
                    "points_checked": r.points_checked,
                    "mismatches": [
                        {
                            "assignment": {k: {"num": v.numerator, "den": v.denominator}
                                           for k, v in m.assignment.items()},
                            "semantics": m.semantics,
                            "lowered": m.lowered,
                        }
                        for m in r.mismatches
                    ],
                }
                for cid, r in reports
            ],
        }

    return app


def run(port: int = 8000, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
