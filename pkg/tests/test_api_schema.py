"""Live service payloads must validate against the shipped API schema."""

import json
from importlib import resources

import jsonschema
import pytest
from fastapi.testclient import TestClient

from slotforge.service import create_app

from .conftest import DATA_DIR, SYNTHETIC_SCALE

CONFIG = {"k": 4, "seed": 1, "method": "ai-only+bl+sc", "scale": SYNTHETIC_SCALE}


@pytest.fixture(scope="module")
def schema():
    text = resources.files("slotforge.schemas").joinpath("api_v1.json").read_text("utf-8")
    return json.loads(text)


@pytest.fixture()
def client(tmp_path):
    app = create_app(store_dir=tmp_path / "sessions")
    with TestClient(app) as client:
        yield client


def validate(payload, schema, def_name):
    jsonschema.validate(
        payload,
        {"$ref": f"#/$defs/{def_name}", "$defs": schema["$defs"]},
    )


def test_schema_is_versioned(schema):
    assert schema["version"] == "1"


def test_all_payloads_validate(client, schema):
    created = client.post("/sessions", json={
        "corpus_path": str(DATA_DIR / "synthetic_corpus.jsonl"), "config": CONFIG,
    }).json()
    validate(created, schema, "session_created")
    sid = created["session_id"]

    validate(client.get(f"/sessions/{sid}/clusters").json(), schema, "clusters_view")
    validate(client.get(f"/sessions/{sid}/documents/doc01").json(), schema, "document_view")
    validate(client.get(f"/sessions/{sid}/evaluation").json(), schema, "evaluation_view")
    validate(client.get(f"/sessions/{sid}/events").json(), schema, "events_view")

    result = client.post(f"/sessions/{sid}/operations", json={
        "revision": 1, "op": {"type": "merge_clusters", "ids": [0, 1]},
    }).json()
    validate(result, schema, "operation_result")
    validate(client.get(f"/sessions/{sid}/events").json(), schema, "events_view")

    episode = client.post(f"/sessions/{sid}/proxy-episodes", json={
        "agent": {"kind": "gold"}, "budgets": [0, 3],
    }).json()
    validate(episode, schema, "proxy_episode_result")

    error = client.get("/sessions/zzz/clusters")
    assert error.status_code == 404
    validate(error.json(), schema, "error")

    stale = client.post(f"/sessions/{sid}/operations", json={
        "revision": 1, "op": {"type": "merge_clusters", "ids": [0, 1]},
    })
    assert stale.status_code == 409
    validate(stale.json(), schema, "error")


def test_operation_schema_accepts_all_op_shapes(schema):
    ops = [
        {"type": "upweight_words", "words": ["increase"], "factor": 10},
        {"type": "merge_clusters", "ids": [0, 1]},
        {"type": "move_question", "qid": "q1", "to_cluster": 2},
        {"type": "delete_question", "qid": "q1"},
        {"type": "demote_question", "qid": "q1"},
        {"type": "promote_question", "qid": "q1"},
        {"type": "edit_question", "qid": "q1", "new_text": "what now?"},
        {"type": "add_question", "text": "what else?", "target_cluster": None},
    ]
    for op in ops:
        validate(op, schema, "operation")
    with pytest.raises(jsonschema.ValidationError):
        validate({"type": "merge_clusters", "ids": [0]}, schema, "operation")
    with pytest.raises(jsonschema.ValidationError):
        validate({"type": "upweight_words", "words": [], "factor": 10}, schema, "operation")
