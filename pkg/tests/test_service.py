import json

import pytest
from fastapi.testclient import TestClient

from slotforge.service import create_app

from .conftest import DATA_DIR, SYNTHETIC_SCALE

CONFIG = {
    "k": 4,
    "seed": 1,
    "method": "ai-only+bl+sc",
    "scale": SYNTHETIC_SCALE,
}


@pytest.fixture()
def client(tmp_path):
    app = create_app(store_dir=tmp_path / "sessions")
    with TestClient(app) as client:
        yield client


def create_session(client, config=None):
    response = client.post("/sessions", json={
        "corpus_path": str(DATA_DIR / "synthetic_corpus.jsonl"),
        "config": config or CONFIG,
    })
    assert response.status_code == 201, response.text
    return response.json()


class TestCreateSession:
    def test_valid_corpus_created(self, client):
        body = create_session(client)
        assert body["revision"] == 1
        assert body["documents"] == 12
        assert body["slots"] == ["Assessment", "Cause", "Timing", "Treatment"]
        assert body["evaluation"]["micro"]["f1"] == 1.0

    def test_bad_k_is_400(self, client):
        response = client.post("/sessions", json={
            "corpus_path": str(DATA_DIR / "synthetic_corpus.jsonl"),
            "config": {**CONFIG, "k": 100},
        })
        assert response.status_code == 400
        assert response.json()["code"] == "bad_k"

    def test_same_corpus_and_seed_identical_evaluations(self, client):
        a = create_session(client)
        b = create_session(client)
        assert a["session_id"] != b["session_id"]
        assert a["evaluation"] == b["evaluation"]

    def test_inline_records(self, client):
        records = [
            {"id": "d1", "text": "Aspirin relieves headaches.",
             "gold": [{"slot": "Remedy", "answers": ["Aspirin"]}],
             "entities": [{"surface": "Aspirin", "start": 0, "end": 7, "label": "DRUG"}]},
            {"id": "d2", "text": "Ibuprofen relieves swelling.",
             "gold": [{"slot": "Remedy", "answers": ["Ibuprofen"]}],
             "entities": [{"surface": "Ibuprofen", "start": 0, "end": 9, "label": "DRUG"}]},
        ]
        response = client.post("/sessions", json={"records": records, "config": {"k": 1}})
        assert response.status_code == 201

    def test_pipeline_failure_is_422_with_stage(self, client):
        records = [{"id": "d1", "text": "Nothing interesting here.", "gold": []}]
        response = client.post("/sessions", json={"records": records, "config": {"k": 1}})
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "pipeline_failure"
        assert body["details"]["stage"] == "qgen"


class TestViews:
    def test_clusters_view_shape(self, client):
        session = create_session(client)
        response = client.get(f"/sessions/{session['session_id']}/clusters")
        assert response.status_code == 200
        body = response.json()
        assert body["k"] == 4
        assert len(body["clusters"]) == 4
        for cluster in body["clusters"]:
            assert set(cluster) >= {"id", "slot", "representative", "non_representative",
                                    "global_representatives"}
            assert cluster["slot"] in {"Assessment", "Cause", "Timing", "Treatment"}
            assert cluster["representative"]

    def test_document_view_highlights(self, client):
        session = create_session(client)
        response = client.get(f"/sessions/{session['session_id']}/documents/doc01")
        assert response.status_code == 200
        body = response.json()
        assert body["doc_id"] == "doc01"
        assert len(body["highlights"]) == 4  # one per question of the doc
        for highlight in body["highlights"]:
            surface = body["text"][highlight["start"]:highlight["end"]]
            assert surface == highlight["surface"]
            assert highlight["slot"] in {"Assessment", "Cause", "Timing", "Treatment"}

    def test_unknown_session_404(self, client):
        response = client.get("/sessions/snope/clusters")
        assert response.status_code == 404
        assert response.json()["code"] == "session_not_found"

    def test_unknown_document_404(self, client):
        session = create_session(client)
        response = client.get(f"/sessions/{session['session_id']}/documents/zzz")
        assert response.status_code == 404
        assert response.json()["code"] == "document_not_found"

    def test_evaluation_and_events_views(self, client):
        session = create_session(client)
        sid = session["session_id"]
        evaluation = client.get(f"/sessions/{sid}/evaluation").json()
        assert evaluation["report"]["micro"]["f1"] == 1.0
        events = client.get(f"/sessions/{sid}/events").json()
        assert events["events"] == []

    def test_get_is_side_effect_free(self, client):
        session = create_session(client)
        sid = session["session_id"]
        first = client.get(f"/sessions/{sid}/clusters").json()
        second = client.get(f"/sessions/{sid}/clusters").json()
        assert first == second
        assert second["revision"] == 1


class TestOperations:
    def test_merge_bumps_revision(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1,
            "op": {"type": "merge_clusters", "ids": [0, 1]},
        })
        assert response.status_code == 200, response.text
        body = response.json()
        assert body["revision"] == 2
        assert body["digest"]["clusters_after"] == 3

    def test_stale_revision_409_with_current(self, client):
        session = create_session(client)
        sid = session["session_id"]
        ok = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "merge_clusters", "ids": [0, 1]},
        })
        assert ok.status_code == 200
        stale = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "merge_clusters", "ids": [0, 1]},
        })
        assert stale.status_code == 409
        body = stale.json()
        assert body["code"] == "stale_revision"
        assert body["details"]["current_revision"] == 2

    def test_invalid_op_400(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "merge_clusters", "ids": [0]},
        })
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_op"

    def test_unknown_question_404(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "move_question", "qid": "zzz", "to_cluster": 0},
        })
        assert response.status_code == 404
        assert response.json()["code"] == "unknown_id"

    def test_add_without_relevant_docs_422(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "add_question", "text": "what about zebras?"},
        })
        assert response.status_code == 422
        assert response.json()["code"] == "no_relevant_document"

    def test_failed_op_leaves_state_unchanged(self, client):
        session = create_session(client)
        sid = session["session_id"]
        before = client.get(f"/sessions/{sid}/clusters").json()
        bad = client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "add_question", "text": "what about zebras?"},
        })
        assert bad.status_code == 422
        after = client.get(f"/sessions/{sid}/clusters").json()
        assert before == after

    def test_operation_persists_snapshot(self, client, tmp_path):
        session = create_session(client)
        sid = session["session_id"]
        client.post(f"/sessions/{sid}/operations", json={
            "revision": 1, "op": {"type": "merge_clusters", "ids": [0, 1]},
        })
        store = client.app.state.store
        snapshot_path = store.root / f"{sid}.json"
        assert snapshot_path.exists()
        data = json.loads(snapshot_path.read_text("utf-8"))
        assert data["revision"] == 2
        events_path = store.root / f"{sid}.events.jsonl"
        assert len(events_path.read_text("utf-8").splitlines()) == 1


class TestProxyEpisodes:
    def test_gold_episode_returns_trajectory(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/proxy-episodes", json={
            "agent": {"kind": "gold"},
            "budgets": [0, 5],
            "policy": "recluster_only",
        })
        assert response.status_code == 200, response.text
        body = response.json()
        assert body["committed"] is False
        points = body["trajectory"]["points"]
        assert points[0]["action_count"] == 0
        assert len(points) == 2

    def test_uncommitted_episode_leaves_revision(self, client):
        session = create_session(client)
        sid = session["session_id"]
        client.post(f"/sessions/{sid}/proxy-episodes", json={
            "agent": {"kind": "random", "seed": 1}, "budgets": [0, 5],
        })
        evaluation = client.get(f"/sessions/{sid}/evaluation").json()
        assert evaluation["revision"] == 1

    def test_committed_episode_advances_revision(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/proxy-episodes", json={
            "agent": {"kind": "random", "seed": 1}, "budgets": [0, 3], "commit": True,
        })
        assert response.status_code == 200
        evaluation = client.get(f"/sessions/{sid}/evaluation").json()
        assert evaluation["revision"] >= 1

    def test_bad_policy_400(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/proxy-episodes", json={"policy": "zzz"})
        assert response.status_code == 400

    def test_live_agent_down_502(self, client):
        session = create_session(client)
        sid = session["session_id"]
        response = client.post(f"/sessions/{sid}/proxy-episodes", json={
            "agent": {"kind": "http", "url": "http://127.0.0.1:1", "timeout": 0.2,
                      "max_attempts": 2},
            "budgets": [0, 2],
        })
        assert response.status_code == 502
        assert response.json()["code"] == "agent_failure"
