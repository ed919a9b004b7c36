"""HTTP facade over sessions: induction, views, operations, proxy episodes.

Single-process FastAPI app. Sessions live in memory and persist as one
snapshot file plus an append-only event-log file per session; snapshot writes
are atomic (write-temp-then-rename). Mutations are optimistic: every response
carries the session revision, a mutation must quote the revision it saw, and
a mismatch yields 409 with the current revision so the client refetches.

Mutations are applied to a clone and swapped in only on success, so a failed
call never changes observable state. Errors are {code, message, details}.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .config import InductionConfig
from .corpus import Corpus, load_corpus
from .errors import (
    BadKError,
    EmptyCorpusError,
    FormatError,
    InvalidOpError,
    IoError,
    NoRelevantDocumentError,
    PipelineError,
    SlotforgeError,
    StaleStateError,
    UnknownIdError,
)
from .pipeline import run_induction
from .proxy import POLICIES, make_agent, run_episode
from .session import SessionState, op_from_dict
from .slotmap import UNMAPPED_SLOT


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}
        super().__init__(message)


def _error_response(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


class SessionStore:
    """In-memory session registry with per-session write locks and on-disk
    snapshot + event-log persistence."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._serial = 0

    def new_id(self) -> str:
        with self._registry_lock:
            self._serial += 1
            return f"s{self._serial:06d}"

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def get(self, session_id: str) -> SessionState:
        session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "session_not_found", f"unknown session {session_id!r}")
        return session

    def put(self, session_id: str, session: SessionState) -> None:
        self._persist(session_id, session)
        self._sessions[session_id] = session

    def _persist(self, session_id: str, session: SessionState) -> None:
        snapshot_path = self.root / f"{session_id}.json"
        tmp_path = self.root / f"{session_id}.json.tmp"
        tmp_path.write_text(session.snapshot_json(), "utf-8")
        os.replace(tmp_path, snapshot_path)
        events_path = self.root / f"{session_id}.events.jsonl"
        with events_path.open("w", encoding="utf-8") as f:
            for event in session.event_log:
                f.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")


def _question_payload(q) -> dict:
    return {
        "id": q.id,
        "doc_id": q.doc_id,
        "text": q.text,
        "answer": q.answer_text,
        "cluster_id": q.cluster_id,
        "representative": q.representative,
    }


def clusters_view(session_id: str, session: SessionState) -> dict:
    clusters = []
    for cid in range(session.clusters.k):
        members = [q for q in session.questions.values() if q.cluster_id == cid]
        clusters.append({
            "id": cid,
            "slot": session.mapping.cluster_to_slot.get(cid, UNMAPPED_SLOT),
            "score": session.mapping.scores.get(cid, 0.0),
            "size": len(members),
            "representative": [_question_payload(q) for q in members if q.representative],
            "non_representative": [_question_payload(q) for q in members if not q.representative],
            "global_representatives": session.reps.global_reps.get(cid, []),
        })
    return {
        "session_id": session_id,
        "revision": session.revision,
        "k": session.clusters.k,
        "clusters": clusters,
    }


def document_view(session_id: str, session: SessionState, doc_id: str) -> dict:
    try:
        doc = session.corpus.document(doc_id)
    except KeyError:
        raise ApiError(404, "document_not_found", f"unknown document {doc_id!r}")
    highlights = []
    questions = []
    for q in session.questions.values():
        if q.doc_id != doc_id:
            continue
        slot = session.mapping.cluster_to_slot.get(q.cluster_id, UNMAPPED_SLOT)
        questions.append({**_question_payload(q), "slot": slot})
        highlights.append({
            "start": q.pivot.start,
            "end": q.pivot.end,
            "surface": q.pivot.surface,
            "question_id": q.id,
            "cluster_id": q.cluster_id,
            "slot": slot,
            "representative": q.representative,
        })
    highlights.sort(key=lambda h: (h["start"], h["end"], h["question_id"]))
    return {
        "session_id": session_id,
        "revision": session.revision,
        "doc_id": doc_id,
        "text": doc.text,
        "gold": [{"slot": f.slot, "answers": list(f.answers)} for f in doc.gold_fills],
        "highlights": highlights,
        "questions": questions,
    }


def evaluation_view(session_id: str, session: SessionState) -> dict:
    return {
        "session_id": session_id,
        "revision": session.revision,
        "report": session.report.to_dict(),
        "mapping": session.mapping.to_dict(),
        "action_count": session.action_count,
    }


def events_view(session_id: str, session: SessionState) -> dict:
    return {"session_id": session_id, "revision": session.revision, "events": session.event_log}


def _clone(session: SessionState) -> SessionState:
    return SessionState.from_dict(json.loads(session.snapshot_json()))


def _resolve_corpus(body: dict) -> Corpus:
    if "records" in body:
        from .corpus import _document_from_record, Corpus as _Corpus  # noqa: PLC0415

        documents = []
        seen = set()
        for i, record in enumerate(body["records"], start=1):
            doc = _document_from_record(record, i)
            if doc.id in seen:
                raise ApiError(400, "duplicate_id", f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            documents.append(doc)
        return _Corpus.from_documents(documents)
    if "corpus_path" in body:
        return load_corpus(body["corpus_path"], body.get("format", "jsonl"))
    raise ApiError(400, "invalid_config", "request needs 'records' or 'corpus_path'")


def create_app(store_dir: str | Path = "sessions") -> FastAPI:
    app = FastAPI(title="slotforge", version=__version__)
    store = SessionStore(store_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.details)

    @app.exception_handler(SlotforgeError)
    async def _engine_error(_request: Request, exc: SlotforgeError):
        status, code = _map_engine_error(exc)
        details = {}
        if isinstance(exc, StaleStateError):
            details = {"current_revision": exc.current}
        if isinstance(exc, PipelineError) or hasattr(exc, "stage"):
            details = {"stage": getattr(exc, "stage", None)}
        return _error_response(status, code, str(exc), details)

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        corpus = _resolve_corpus(body)
        try:
            config = InductionConfig.from_dict(body.get("config", {}))
        except (TypeError, ValueError) as exc:
            raise ApiError(400, "invalid_config", str(exc))
        session = run_induction(corpus, config)
        session_id = store.new_id()
        store.put(session_id, session)
        return {
            "session_id": session_id,
            "revision": session.revision,
            "documents": len(corpus.documents),
            "slots": sorted(corpus.slot_inventory),
            "k": session.clusters.k,
            "evaluation": session.report.to_dict(),
        }

    @app.get("/sessions/{session_id}/clusters")
    async def get_clusters(session_id: str):
        return clusters_view(session_id, store.get(session_id))

    @app.get("/sessions/{session_id}/documents/{doc_id}")
    async def get_document(session_id: str, doc_id: str):
        return document_view(session_id, store.get(session_id), doc_id)

    @app.get("/sessions/{session_id}/evaluation")
    async def get_evaluation(session_id: str):
        return evaluation_view(session_id, store.get(session_id))

    @app.get("/sessions/{session_id}/events")
    async def get_events(session_id: str):
        return events_view(session_id, store.get(session_id))

    @app.post("/sessions/{session_id}/operations")
    async def post_operation(session_id: str, request: Request):
        body = await request.json()
        if "op" not in body or "revision" not in body:
            raise ApiError(400, "invalid_op", "request needs 'revision' and 'op'")
        with store.lock(session_id):
            session = store.get(session_id)
            op = op_from_dict(body["op"])
            working = _clone(session)
            digest = working.apply(op, expected_revision=int(body["revision"]))
            store.put(session_id, working)
            return {
                "session_id": session_id,
                "revision": working.revision,
                "digest": digest.to_dict(),
                "evaluation": working.report.to_dict(),
            }

    @app.post("/sessions/{session_id}/proxy-episodes")
    async def post_proxy_episode(session_id: str, request: Request):
        body = await request.json()
        budgets = body.get("budgets", [0, 5, 10, 15, 20])
        policy = body.get("policy", "recluster_only")
        if policy not in POLICIES:
            raise ApiError(400, "invalid_config", f"unknown policy {policy!r}")
        commit = bool(body.get("commit", False))
        with store.lock(session_id):
            session = store.get(session_id)
            working = _clone(session)
            try:
                agent = make_agent(body.get("agent", {"kind": "gold"}), working.corpus)
            except (ValueError, KeyError, OSError) as exc:
                raise ApiError(400, "invalid_config", f"bad agent config: {exc}")
            try:
                trajectory = run_episode(
                    working, agent, budgets=budgets, policy=policy,
                    rho=float(body.get("rho", 0.5)),
                )
            except ValueError as exc:
                raise ApiError(400, "invalid_config", str(exc))
            if trajectory.aborted and body.get("agent", {}).get("kind") == "http":
                raise ApiError(502, "agent_failure", "live agent failed after retries")
            if commit:
                store.put(session_id, working)
            return {
                "session_id": session_id,
                "revision": store.get(session_id).revision,
                "committed": commit,
                "trajectory": trajectory.to_dict(),
            }

    static_dir = Path(__file__).parent / "static"
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def _map_engine_error(exc: SlotforgeError) -> tuple[int, str]:
    if isinstance(exc, StaleStateError):
        return 409, "stale_revision"
    if isinstance(exc, UnknownIdError):
        return 404, "unknown_id"
    if isinstance(exc, InvalidOpError):
        return 400, "invalid_op"
    if isinstance(exc, NoRelevantDocumentError):
        return 422, "no_relevant_document"
    if isinstance(exc, BadKError):
        return 400, "bad_k"
    if isinstance(exc, (FormatError, EmptyCorpusError)):
        return 400, "invalid_corpus"
    if isinstance(exc, IoError):
        return 400, "io_error"
    if isinstance(exc, PipelineError):
        return 422, "pipeline_failure"
    return 500, "internal_error"
