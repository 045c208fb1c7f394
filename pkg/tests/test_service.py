"""HTTP facade: endpoints, facade transparency, replay, isolation."""

import json
import threading
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

import typedmilp as tm
from typedmilp import corpus
from typedmilp.emitters import model_to_document, write_model
from typedmilp.emitters.lp import emit_lp
from typedmilp.oracle import Limits, solve_by_enumeration
from typedmilp.service import create_app
from typedmilp.tree import canonical_tree_json


@pytest.fixture
def client():
    return TestClient(create_app())


def knapsack_document():
    m = tm.Model("knapsack")
    x1, x2 = m.binary("x1"), m.binary("x2")
    m.add_constraint(tm.Bound(
        tm.LinearExpr.weighted([(x1, 1), (x2, 2)]), tm.Sense.LE, Fraction(2), label="cap"))
    m.maximize(tm.LinearExpr.weighted([(x1, 3), (x2, 4)]))
    return m, model_to_document(m)


class TestStaticEndpoints:
    def test_tree_document_bytes(self, client):
        response = client.get("/api/v1/omt/tree")
        assert response.status_code == 200
        assert response.text == canonical_tree_json()

    def test_mappings(self, client):
        response = client.get("/api/v1/mappings")
        assert response.status_code == 200
        ids = [m["id"] for m in response.json()]
        assert ids == ["atsp-tour", "routing-flow-balance"]


class TestSessions:
    def test_create_fresh_session(self, client):
        created = client.post("/api/v1/sessions")
        assert created.status_code == 201
        view = created.json()
        assert view["history"] == []
        assert view["node_kind"] == "internal"
        assert view["question"]
        assert view["model"]["constraints"] == []

    def test_two_sessions_distinct(self, client):
        a = client.post("/api/v1/sessions").json()["id"]
        b = client.post("/api/v1/sessions").json()["id"]
        assert a != b

    def test_answer_walk_to_partitioning_leaf(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        for answer in ("a choice among yes/no options", "exactly one"):
            view = client.post(f"/api/v1/sessions/{sid}/answers", json={"answer": answer}).json()
        assert view["cursor"] == 17
        assert view["node_kind"] == "leaf"
        assert view["template"]["family"] == "set_partitioning"

    def test_answer_at_leaf_errors(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        client.post(f"/api/v1/sessions/{sid}/answers", json={"answer": "a decision already fixed in advance"})
        response = client.post(f"/api/v1/sessions/{sid}/answers", json={"answer": "x"})
        assert response.status_code == 400
        assert response.json()["code"] == "AtLeaf"

    def test_bad_answer_keeps_cursor(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        response = client.post(f"/api/v1/sessions/{sid}/answers", json={"answer": "bogus"})
        assert response.status_code == 400
        assert response.json()["code"] == "UnknownAnswer"
        assert client.get(f"/api/v1/sessions/{sid}").json()["cursor"] == tm.load_tree().root

    def test_attach_constraint_resets_cursor(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        for name in ("x1", "x2"):
            client.post(f"/api/v1/sessions/{sid}/variables",
                        json={"name": name, "kind": "binary", "lower": 0, "upper": 1})
        view = client.post(f"/api/v1/sessions/{sid}/constraints", json={
            "leaf": 11, "bindings": {"members": ["x1", "x2"]}, "label": "pick",
        }).json()
        assert view["cursor"] == tm.load_tree().root
        constraints = view["model"]["constraints"]
        assert len(constraints) == 1
        assert constraints[0]["family"] == "set_packing"
        assert constraints[0]["omt_node"] == 11

    def test_attach_missing_slot_leaves_model_unchanged(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        response = client.post(f"/api/v1/sessions/{sid}/constraints", json={
            "leaf": 11, "bindings": {},
        })
        assert response.status_code == 400
        assert response.json()["code"] == "MissingSlot"
        assert client.get(f"/api/v1/sessions/{sid}/model").json()["constraints"] == []

    def test_attach_implicit_tour(self, client):
        sid = client.post("/api/v1/sessions").json()["id"]
        arcs = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    name = f"x_{i}_{j}"
                    arcs[i][j] = name
                    client.post(f"/api/v1/sessions/{sid}/variables",
                                json={"name": name, "kind": "binary"})
        view = client.post(f"/api/v1/sessions/{sid}/implicit", json={
            "mapping": "atsp-tour", "params": {"arcs": arcs},
        }).json()
        assert len(view["model"]["constraints"]) == 9

    def test_unknown_session_404(self, client):
        response = client.get("/api/v1/sessions/deadbeef")
        assert response.status_code == 404
        body = response.json()
        assert set(body) == {"code", "message", "subject"}
        assert body["code"] == "SessionNotFound"

    def test_capacity_exceeded(self):
        client = TestClient(create_app(session_capacity=2))
        client.post("/api/v1/sessions")
        client.post("/api/v1/sessions")
        response = client.post("/api/v1/sessions")
        assert response.status_code == 503
        assert response.json()["code"] == "CapacityExceeded"

    def test_expiry(self):
        now = [0.0]
        client = TestClient(create_app(session_ttl=10.0, clock=lambda: now[0]))
        sid = client.post("/api/v1/sessions").json()["id"]
        now[0] = 5.0
        assert client.get(f"/api/v1/sessions/{sid}").status_code == 200
        now[0] = 20.0
        assert client.get(f"/api/v1/sessions/{sid}").status_code == 404


class TestModelEndpoints:
    def test_solve_matches_library(self, client):
        model, document = knapsack_document()
        response = client.post("/api/v1/models/solve", json={"model": document})
        assert response.status_code == 200
        assert response.json() == solve_by_enumeration(model).to_json()
        assert response.json()["value"] == {"num": 4, "den": 1}

    def test_compile_matches_library(self, client):
        model, document = knapsack_document()
        response = client.post("/api/v1/models/compile", json={"model": document, "format": "lp"})
        assert response.status_code == 200
        assert response.text == emit_lp(tm.lower_model(model))

    def test_check_clean_model(self, client):
        _, document = knapsack_document()
        response = client.post("/api/v1/models/check", json={"model": document})
        assert response.status_code == 200
        body = response.json()
        assert body["ok"] is True
        assert body["constraints"][0]["mismatches"] == []

    def test_check_box_cap(self, client):
        m = tm.Model()
        x = m.integer("x", 0, 10**6)
        m.add_constraint(tm.Bound(tm.LinearExpr.var(x), tm.Sense.LE, Fraction(5)))
        response = client.post("/api/v1/models/check", json={
            "model": model_to_document(m), "box": {"cap": 100},
        })
        assert response.status_code == 400
        assert response.json()["code"] == "BoxTooLarge"

    def test_solve_corpus_case_matches_library(self, client):
        model = corpus.build("course-timetabling")
        document = json.loads(write_model(model))
        response = client.post("/api/v1/models/solve", json={
            "model": document, "limits": {"max_points": 10**7},
        })
        assert response.json() == solve_by_enumeration(model, Limits(10**7)).to_json()

    def test_malformed_model(self, client):
        response = client.post("/api/v1/models/solve", json={"model": {"schema_version": "1"}})
        assert response.status_code == 400
        assert response.json()["code"] == "MalformedDocument"


def _drive_knapsack(client) -> str:
    sid = client.post("/api/v1/sessions").json()["id"]
    for name in ("x1", "x2"):
        client.post(f"/api/v1/sessions/{sid}/variables",
                    json={"name": name, "kind": "binary"})
    client.post(f"/api/v1/sessions/{sid}/answers",
                json={"answer": "a limit or requirement on a quantity"})
    client.post(f"/api/v1/sessions/{sid}/answers", json={"answer": "capped from above"})
    client.post(f"/api/v1/sessions/{sid}/answers",
                json={"answer": "a fixed number over a weighted total"})
    client.post(f"/api/v1/sessions/{sid}/constraints", json={
        "leaf": 1,
        "bindings": {
            "total": {"terms": {"x1": {"num": 1, "den": 1}, "x2": {"num": 2, "den": 1}},
                      "constant": {"num": 0, "den": 1}},
            "limit": {"num": 2, "den": 1},
        },
        "label": "cap",
    })
    client.post(f"/api/v1/sessions/{sid}/objective", json={
        "direction": "max",
        "expr": {"terms": {"x1": {"num": 3, "den": 1}, "x2": {"num": 4, "den": 1}},
                 "constant": {"num": 0, "den": 1}},
    })
    return sid


class TestReplayAndIsolation:
    def test_session_replay_yields_identical_model(self, client):
        sid = _drive_knapsack(client)
        view = client.get(f"/api/v1/sessions/{sid}").json()
        replay_sid = client.post("/api/v1/sessions").json()["id"]
        for event in view["history"]:
            if event["kind"] == "variable":
                client.post(f"/api/v1/sessions/{replay_sid}/variables", json={
                    "name": event["name"], "kind": event["var_kind"],
                    "lower": event["lower"], "upper": event["upper"]})
            elif event["kind"] == "answer":
                client.post(f"/api/v1/sessions/{replay_sid}/answers",
                            json={"answer": event["answer"]})
            elif event["kind"] == "constraint":
                client.post(f"/api/v1/sessions/{replay_sid}/constraints", json={
                    "leaf": event["leaf"], "bindings": event["bindings"],
                    "label": event["label"]})
            elif event["kind"] == "objective":
                client.post(f"/api/v1/sessions/{replay_sid}/objective", json={
                    "direction": event["direction"], "expr": event["expr"]})
        original = client.get(f"/api/v1/sessions/{sid}/model").json()
        replayed = client.get(f"/api/v1/sessions/{replay_sid}/model").json()
        original["name"] = replayed["name"] = "normalized"
        assert original == replayed

    def test_session_solve_value_matches_cli_semantics(self, client):
        sid = _drive_knapsack(client)
        document = client.get(f"/api/v1/sessions/{sid}/model").json()
        response = client.post("/api/v1/models/solve", json={"model": document})
        assert response.json()["value"] == {"num": 4, "den": 1}
        assert response.json()["witness"]["x2"] == {"num": 1, "den": 1}

    def test_concurrent_sessions_stay_isolated(self, client):
        sids = [client.post("/api/v1/sessions").json()["id"] for _ in range(2)]
        errors = []

        def hammer(sid, prefix):
            try:
                for k in range(20):
                    response = client.post(f"/api/v1/sessions/{sid}/variables",
                                           json={"name": f"{prefix}{k}", "kind": "binary"})
                    assert response.status_code == 200
            except Exception as exc:  # noqa: BLE001 - surfaced below
                errors.append(exc)

        threads = [threading.Thread(target=hammer, args=(sid, f"v{i}_")) for i, sid in enumerate(sids)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert errors == []
        for i, sid in enumerate(sids):
            names = [v["name"] for v in client.get(f"/api/v1/sessions/{sid}/model").json()["variables"]]
            assert names == [f"v{i}_{k}" for k in range(20)]
