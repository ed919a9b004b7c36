"""Interactive session state and the operation vocabulary.

A session holds the live clustering plus everything needed to re-run the
feedback pipeline after each user action: recluster (only for upweighting),
recompute representatives, remap clusters to slots, re-evaluate. Every apply
appends one event to an append-only log; replaying the log against the
initial snapshot reproduces the final state exactly (timestamps are logical
ticks, never wall-clock, so whole sessions are byte-reproducible).

User moves pin a question to its cluster so a later recluster cannot silently
undo the human's decision; demote/promote pin the representative flag the
same way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .cluster import (
    ClusterModel,
    RepresentativeSet,
    document_representative_flags,
    global_representatives,
    kmeans,
    recompute_centroids,
)
from .config import DEFAULT_SCALE_FACTOR, InductionConfig
from .corpus import Corpus, Document, EntityHint, GoldFill, segment
from .errors import (
    CorruptSnapshotError,
    InvalidOpError,
    IoError,
    NoRelevantDocumentError,
    StaleStateError,
    UnknownIdError,
    VersionError,
)
from .providers import (
    EntityMention,
    GeneratedQuestion,
    Providers,
    make_providers,
)
from .slotmap import EvaluationReport, SlotMapping, evaluate, map_clusters
from .vectorize import TfIdfModel, bleach, cosine, embed

SNAPSHOT_VERSION = "1"


# -- operation vocabulary --

@dataclass(frozen=True)
class UpweightWords:
    words: tuple[str, ...]
    factor: float = DEFAULT_SCALE_FACTOR


@dataclass(frozen=True)
class MergeClusters:
    ids: tuple[int, ...]


@dataclass(frozen=True)
class MoveQuestion:
    qid: str
    to_cluster: int


@dataclass(frozen=True)
class DeleteQuestion:
    qid: str


@dataclass(frozen=True)
class DemoteQuestion:
    qid: str


@dataclass(frozen=True)
class PromoteQuestion:
    qid: str


@dataclass(frozen=True)
class EditQuestion:
    qid: str
    new_text: str


@dataclass(frozen=True)
class AddQuestion:
    text: str
    target_cluster: int | None = None


Operation = (
    UpweightWords | MergeClusters | MoveQuestion | DeleteQuestion
    | DemoteQuestion | PromoteQuestion | EditQuestion | AddQuestion
)

_OP_TYPES: dict[str, type] = {
    "upweight_words": UpweightWords,
    "merge_clusters": MergeClusters,
    "move_question": MoveQuestion,
    "delete_question": DeleteQuestion,
    "demote_question": DemoteQuestion,
    "promote_question": PromoteQuestion,
    "edit_question": EditQuestion,
    "add_question": AddQuestion,
}
_OP_NAMES = {cls: name for name, cls in _OP_TYPES.items()}


def op_to_dict(op: Operation) -> dict:
    d: dict[str, Any] = {"type": _OP_NAMES[type(op)]}
    if isinstance(op, UpweightWords):
        d.update(words=list(op.words), factor=op.factor)
    elif isinstance(op, MergeClusters):
        d.update(ids=list(op.ids))
    elif isinstance(op, MoveQuestion):
        d.update(qid=op.qid, to_cluster=op.to_cluster)
    elif isinstance(op, (DeleteQuestion, DemoteQuestion, PromoteQuestion)):
        d.update(qid=op.qid)
    elif isinstance(op, EditQuestion):
        d.update(qid=op.qid, new_text=op.new_text)
    elif isinstance(op, AddQuestion):
        d.update(text=op.text, target_cluster=op.target_cluster)
    return d


def op_from_dict(d: dict) -> Operation:
    kind = d.get("type")
    if kind not in _OP_TYPES:
        raise InvalidOpError(f"unknown operation type {kind!r}")
    body = {k: v for k, v in d.items() if k != "type"}
    if kind == "upweight_words":
        body["words"] = tuple(body["words"])
    if kind == "merge_clusters":
        body["ids"] = tuple(body["ids"])
    try:
        return _OP_TYPES[kind](**body)
    except TypeError as exc:
        raise InvalidOpError(f"bad fields for {kind}: {exc}") from None


@dataclass
class OutcomeDigest:
    op_type: str
    clusters_before: int
    clusters_after: int
    added: list[str] = field(default_factory=list)
    removed: list[str] = field(default_factory=list)
    skipped_docs: int = 0
    micro_f1: float = 0.0
    mapping: dict[int, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "op_type": self.op_type,
            "clusters_before": self.clusters_before,
            "clusters_after": self.clusters_after,
            "added": self.added,
            "removed": self.removed,
            "skipped_docs": self.skipped_docs,
            "micro_f1": self.micro_f1,
            "mapping": {str(c): s for c, s in sorted(self.mapping.items())},
            "notes": self.notes,
        }


@dataclass
class SessionState:
    corpus: Corpus
    questions: dict[str, GeneratedQuestion]
    mentions: dict[str, list[EntityMention]]
    tfidf: TfIdfModel
    clusters: ClusterModel
    reps: RepresentativeSet
    mapping: SlotMapping
    report: EvaluationReport
    config: InductionConfig
    event_log: list[dict] = field(default_factory=list)
    pinned_cluster: dict[str, int] = field(default_factory=dict)
    rep_pins: dict[str, bool] = field(default_factory=dict)
    revision: int = 1
    clock: int = 0
    next_qid: int = 1
    stage_counts: dict[str, int] = field(default_factory=dict)
    _provider: Providers | None = field(default=None, repr=False, compare=False)

    # -- plumbing --

    def tick(self) -> int:
        self.clock += 1
        return self.clock

    @property
    def provider(self) -> Providers:
        if self._provider is None:
            self._provider = make_providers(self.config.providers)
        return self._provider

    @property
    def action_count(self) -> int:
        return len(self.event_log)

    def vectors_by_id(self) -> dict[str, np.ndarray]:
        return {qid: q.embedding for qid, q in self.questions.items()}

    def question(self, qid: str) -> GeneratedQuestion:
        q = self.questions.get(qid)
        if q is None:
            raise UnknownIdError(f"unknown question id {qid!r}")
        return q

    def embed_text(self, q: GeneratedQuestion) -> str:
        """Text fed to the vector model: bleached when the method bleaches."""
        if self.config.use_bleach:
            surfaces = [m.surface for m in self.mentions.get(q.doc_id, [])]
            return bleach(q.text, surfaces)
        return " ".join(q.text.lower().split())

    # -- feedback pipeline pieces --

    def _renumber_dense(self) -> None:
        """Collapse empty clusters so assignment ids are dense in [0, k')."""
        used = sorted({q.cluster_id for q in self.questions.values() if q.cluster_id is not None})
        remap = {old: new for new, old in enumerate(used)}
        if not self.questions:
            self.clusters.k = 0
            self.clusters.centroids = np.zeros((0, self.tfidf.dim))
            self.clusters.assignment = {}
            self.pinned_cluster = {}
            return
        if len(used) == self.clusters.k and all(old == new for old, new in remap.items()):
            return
        for q in self.questions.values():
            q.cluster_id = remap[q.cluster_id]
        self.clusters.assignment = {qid: q.cluster_id for qid, q in self.questions.items()}
        self.clusters.k = len(used)
        self.clusters.centroids = self.clusters.centroids[used]
        self.pinned_cluster = {
            qid: remap[cid] for qid, cid in self.pinned_cluster.items() if cid in remap and qid in self.questions
        }

    def _sync_assignment(self) -> None:
        self.clusters.assignment = {qid: q.cluster_id for qid, q in self.questions.items()}

    def refresh_representatives(self) -> None:
        vectors = self.vectors_by_id()
        members_by_cluster: dict[int, list[str]] = {cid: [] for cid in range(self.clusters.k)}
        for qid, q in self.questions.items():
            members_by_cluster[q.cluster_id].append(qid)

        global_reps = {
            cid: global_representatives(sorted(members), vectors, self.config.top_k)
            for cid, members in members_by_cluster.items()
        }

        doc_reps: dict[tuple[str, int], list[str]] = {}
        for cid, members in members_by_cluster.items():
            centroid = self.clusters.centroids[cid]
            by_doc: dict[str, list[str]] = {}
            for qid in members:
                by_doc.setdefault(self.questions[qid].doc_id, []).append(qid)
            for doc_id, qids in by_doc.items():
                flags = document_representative_flags(qids, vectors, centroid, self.config.tau)
                for qid in qids:
                    pin = self.rep_pins.get(qid)
                    self.questions[qid].representative = flags[qid] if pin is None else pin
                chosen = [qid for qid in qids if self.questions[qid].representative]
                chosen.sort(key=lambda qid: (-cosine(vectors[qid], centroid), qid))
                if chosen:
                    doc_reps[(doc_id, cid)] = chosen
        self.reps = RepresentativeSet(
            global_reps=global_reps, doc_reps=doc_reps,
            tau=self.config.tau, top_k=self.config.top_k,
        )

    def remap(self) -> None:
        self.mapping = map_clusters(
            self.questions.values(), list(range(self.clusters.k)), self.corpus
        )

    def reevaluate(self, action_count: int | None = None) -> None:
        self.report = evaluate(
            self.questions.values(), self.mapping, self.corpus,
            theta=self.config.theta,
            timestamp=self.tick(),
            action_count=self.action_count if action_count is None else action_count,
        )

    def _finish(self, action_count: int) -> None:
        self._sync_assignment()
        self.refresh_representatives()
        self.remap()
        self.reevaluate(action_count)

    def reembed_all(self) -> None:
        for q in self.questions.values():
            q.bleached = self.embed_text(q)
            q.embedding = embed(self.tfidf, q.bleached)

    def feedback(self) -> None:
        """Recluster with the session seed, keeping pinned questions in place,
        then refresh representatives, remap and re-evaluate."""
        ids = list(self.questions.keys())
        vectors = np.stack([self.questions[qid].embedding for qid in ids])
        k = self.clusters.k
        model = kmeans(ids, vectors, k, self.config.seed)
        relabel = self._overlap_relabel(model)
        for qid in ids:
            self.questions[qid].cluster_id = relabel[model.assignment[qid]]
        for qid, cid in self.pinned_cluster.items():
            if qid in self.questions:
                self.questions[qid].cluster_id = cid
        self.clusters = ClusterModel(
            k=k,
            centroids=model.centroids[_inverse_permutation(relabel, k)],
            assignment={qid: self.questions[qid].cluster_id for qid in ids},
            inertia=model.inertia,
            seed=self.config.seed,
        )
        self._renumber_dense()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(self.action_count)

    def _overlap_relabel(self, model: ClusterModel) -> dict[int, int]:
        """Match fresh cluster ids to the previous numbering by membership
        overlap, so cluster identity is stable across recluster runs."""
        k = model.k
        overlap = [[0] * k for _ in range(k)]
        for qid, new_cid in model.assignment.items():
            old_q = self.questions.get(qid)
            if old_q is not None and old_q.cluster_id is not None and old_q.cluster_id < k:
                overlap[old_q.cluster_id][new_cid] += 1
        relabel: dict[int, int] = {}
        used_old: set[int] = set()
        pairs = sorted(
            ((-overlap[o][n], o, n) for o in range(k) for n in range(k)),
        )
        for neg, old, new in pairs:
            if new in relabel or old in used_old:
                continue
            relabel[new] = old
            used_old.add(old)
        spare = [o for o in range(k) if o not in used_old]
        for new in range(k):
            if new not in relabel:
                relabel[new] = spare.pop(0)
        return relabel

    # -- operations --

    def apply(self, op: Operation, expected_revision: int | None = None) -> OutcomeDigest:
        """Validate and apply one user operation, then run the feedback steps
        and append one event. Raises StaleStateError on a revision mismatch."""
        if expected_revision is not None and expected_revision != self.revision:
            raise StaleStateError(expected_revision, self.revision)
        clusters_before = self.clusters.k
        action_count = self.action_count + 1
        digest = OutcomeDigest(
            op_type=_OP_NAMES[type(op)],
            clusters_before=clusters_before,
            clusters_after=clusters_before,
        )

        if isinstance(op, UpweightWords):
            self._apply_upweight(op, action_count)
        elif isinstance(op, MergeClusters):
            self._apply_merge(op, action_count)
        elif isinstance(op, MoveQuestion):
            self._apply_move(op, action_count)
        elif isinstance(op, DeleteQuestion):
            self._apply_delete(op, action_count, digest)
        elif isinstance(op, DemoteQuestion):
            self._apply_rep_pin(op.qid, False, action_count)
        elif isinstance(op, PromoteQuestion):
            self._apply_rep_pin(op.qid, True, action_count)
        elif isinstance(op, EditQuestion):
            self._apply_edit(op, action_count)
        elif isinstance(op, AddQuestion):
            self._apply_add(op, action_count, digest)
        else:
            raise InvalidOpError(f"unsupported operation {op!r}")

        digest.clusters_after = self.clusters.k
        digest.micro_f1 = self.report.micro.f1
        digest.mapping = dict(self.mapping.cluster_to_slot)
        self.event_log.append(
            {"seq": len(self.event_log) + 1, "ts": self.tick(),
             "op": op_to_dict(op), "digest": digest.to_dict()}
        )
        self.report.action_count = self.action_count
        self.revision += 1
        return digest

    def _apply_upweight(self, op: UpweightWords, action_count: int) -> None:
        if op.factor <= 0:
            raise InvalidOpError("upweight factor must be > 0")
        if not op.words:
            raise InvalidOpError("upweight needs at least one word")
        for word in op.words:
            self.config.scale[word.lower()] = op.factor
        self.tfidf = self.tfidf.with_scale(self.config.scale)
        self.reembed_all()
        self.feedback()

    def _apply_merge(self, op: MergeClusters, action_count: int) -> None:
        ids = sorted(set(op.ids))
        if len(ids) < 2:
            raise InvalidOpError("merge needs at least 2 distinct cluster ids")
        for cid in ids:
            if not (0 <= cid < self.clusters.k):
                raise UnknownIdError(f"unknown cluster id {cid}")
        target = ids[0]
        for q in self.questions.values():
            if q.cluster_id in ids:
                q.cluster_id = target
        for qid, cid in list(self.pinned_cluster.items()):
            if cid in ids:
                self.pinned_cluster[qid] = target
        self._sync_assignment()
        self._renumber_dense()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(action_count)

    def _apply_move(self, op: MoveQuestion, action_count: int) -> None:
        q = self.question(op.qid)
        if not (0 <= op.to_cluster < self.clusters.k):
            raise UnknownIdError(f"unknown cluster id {op.to_cluster}")
        q.cluster_id = op.to_cluster
        self.pinned_cluster[op.qid] = op.to_cluster
        self._sync_assignment()
        self._renumber_dense()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(action_count)

    def _apply_delete(self, op: DeleteQuestion, action_count: int, digest: OutcomeDigest) -> None:
        self.question(op.qid)
        del self.questions[op.qid]
        self.pinned_cluster.pop(op.qid, None)
        self.rep_pins.pop(op.qid, None)
        digest.removed.append(op.qid)
        self._sync_assignment()
        self._renumber_dense()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(action_count)

    def _apply_rep_pin(self, qid: str, representative: bool, action_count: int) -> None:
        q = self.question(qid)
        if representative and q.representative:
            raise InvalidOpError(f"question {qid!r} is already representative")
        if not representative and not q.representative:
            raise InvalidOpError(f"question {qid!r} is already non-representative")
        self.rep_pins[qid] = representative
        self._finish(action_count)

    def _apply_edit(self, op: EditQuestion, action_count: int) -> None:
        q = self.question(op.qid)
        if not op.new_text.strip() or not op.new_text.endswith("?"):
            raise InvalidOpError("edited question must be non-empty and end with '?'")
        q.text = op.new_text
        q.bleached = self.embed_text(q)
        q.embedding = embed(self.tfidf, q.bleached)
        if op.qid not in self.pinned_cluster:
            q.cluster_id = self._nearest_centroid(q.embedding)
        self._sync_assignment()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(action_count)

    def _nearest_centroid(self, vector: np.ndarray) -> int:
        d2 = ((self.clusters.centroids - vector[None, :]) ** 2).sum(axis=1)
        return int(np.argmin(d2))

    def _apply_add(self, op: AddQuestion, action_count: int, digest: OutcomeDigest) -> None:
        self.add_question(op.text, op.target_cluster, digest)
        self._sync_assignment()
        recompute_centroids(self.clusters, self.vectors_by_id())
        self._finish(action_count)

    def add_question(self, text: str, target_cluster: int | None,
                     digest: OutcomeDigest | None = None) -> list[str]:
        """Answer a user question in every relevant document and append the
        resulting question/answer tuples as representative questions.

        A document is relevant when at least one of its entity mentions occurs
        in the question text; relevant documents the reader cannot answer are
        skipped and counted.
        """
        if not text.strip():
            raise InvalidOpError("question text must be non-empty")
        if not text.endswith("?"):
            raise InvalidOpError("question text must end with '?'")
        if target_cluster is not None and not (0 <= target_cluster < self.clusters.k):
            raise UnknownIdError(f"unknown cluster id {target_cluster}")
        text_lower = text.lower()
        relevant = [
            doc for doc in self.corpus.documents
            if any(m.surface.lower() in text_lower for m in self.mentions.get(doc.id, []))
        ]
        if not relevant:
            raise NoRelevantDocumentError(f"no document shares an entity with {text!r}")
        added: list[str] = []
        skipped = 0
        for doc in relevant:
            span = self.provider.reader(
                doc, self.mentions.get(doc.id, []), text, self.config.reader_threshold
            )
            if span is None:
                skipped += 1
                continue
            surface, (start, end), _score = span
            pivot = next(
                (m for m in self.mentions.get(doc.id, []) if m.start == start and m.end == end),
                EntityMention(surface=surface, start=start, end=end, label="ENTITY", source="external"),
            )
            while f"q{self.next_qid:06d}" in self.questions:
                self.next_qid += 1
            qid = f"q{self.next_qid:06d}"
            self.next_qid += 1
            question = GeneratedQuestion(
                id=qid, doc_id=doc.id, text=text, pivot=pivot, answer_text=surface,
            )
            question.bleached = self.embed_text(question)
            question.embedding = embed(self.tfidf, question.bleached)
            question.cluster_id = (
                target_cluster if target_cluster is not None
                else self._nearest_centroid(question.embedding)
            )
            self.questions[qid] = question
            self.rep_pins[qid] = True
            added.append(qid)
        if digest is not None:
            digest.added.extend(added)
            digest.skipped_docs = skipped
            if skipped:
                digest.notes.append(f"{skipped} relevant document(s) unanswerable")
        return added

    # -- snapshot / restore --

    def to_dict(self, include_embeddings: bool = True) -> dict:
        questions = []
        for q in self.questions.values():
            item = {
                "id": q.id,
                "doc_id": q.doc_id,
                "text": q.text,
                "answer_text": q.answer_text,
                "bleached": q.bleached,
                "pivot": _mention_to_dict(q.pivot),
                "cluster_id": q.cluster_id,
                "representative": q.representative,
            }
            if include_embeddings and q.embedding is not None:
                item["embedding"] = [float(x) for x in q.embedding]
            questions.append(item)
        return {
            "version": SNAPSHOT_VERSION,
            "config": self.config.to_dict(),
            "corpus": _corpus_to_dict(self.corpus),
            "mentions": {
                doc_id: [_mention_to_dict(m) for m in ms]
                for doc_id, ms in sorted(self.mentions.items())
            },
            "questions": questions,
            "tfidf": self.tfidf.to_dict(),
            "clusters": self.clusters.to_dict(),
            "reps": self.reps.to_dict(),
            "mapping": self.mapping.to_dict(),
            "report": self.report.to_dict(),
            "event_log": self.event_log,
            "pinned_cluster": self.pinned_cluster,
            "rep_pins": self.rep_pins,
            "revision": self.revision,
            "clock": self.clock,
            "next_qid": self.next_qid,
            "stage_counts": self.stage_counts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionState":
        version = data.get("version")
        if version != SNAPSHOT_VERSION:
            raise VersionError(str(version), SNAPSHOT_VERSION)
        try:
            config = InductionConfig.from_dict(data["config"])
            corpus = _corpus_from_dict(data["corpus"])
            tfidf = TfIdfModel.from_dict(data["tfidf"])
            clusters = ClusterModel.from_dict(data["clusters"])
            questions: dict[str, GeneratedQuestion] = {}
            for item in data["questions"]:
                q = GeneratedQuestion(
                    id=item["id"],
                    doc_id=item["doc_id"],
                    text=item["text"],
                    pivot=_mention_from_dict(item["pivot"]),
                    answer_text=item["answer_text"],
                    bleached=item.get("bleached", ""),
                    cluster_id=item.get("cluster_id"),
                    representative=item.get("representative", False),
                )
                if "embedding" in item:
                    q.embedding = np.asarray(item["embedding"], dtype=float)
                else:
                    q.embedding = embed(tfidf, q.bleached)
                questions[q.id] = q
            session = cls(
                corpus=corpus,
                questions=questions,
                mentions={
                    doc_id: [_mention_from_dict(m) for m in ms]
                    for doc_id, ms in data.get("mentions", {}).items()
                },
                tfidf=tfidf,
                clusters=clusters,
                reps=RepresentativeSet.from_dict(data["reps"]),
                mapping=SlotMapping.from_dict(data["mapping"]),
                report=EvaluationReport.from_dict(data["report"]),
                config=config,
                event_log=list(data.get("event_log", [])),
                pinned_cluster={k: int(v) for k, v in data.get("pinned_cluster", {}).items()},
                rep_pins={k: bool(v) for k, v in data.get("rep_pins", {}).items()},
                revision=int(data.get("revision", 1)),
                clock=int(data.get("clock", 0)),
                next_qid=int(data.get("next_qid", 1)),
                stage_counts={k: int(v) for k, v in data.get("stage_counts", {}).items()},
            )
        except VersionError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptSnapshotError(f"snapshot is structurally invalid: {exc}") from exc
        _validate_session(session)
        return session

    def snapshot_json(self, include_embeddings: bool = True) -> str:
        return json.dumps(
            self.to_dict(include_embeddings=include_embeddings),
            sort_keys=True, ensure_ascii=False, indent=2,
        ) + "\n"


def _inverse_permutation(relabel: dict[int, int], k: int) -> list[int]:
    """Row order such that new_centroids[old_label] = centroids[new_label]."""
    inv = [0] * k
    for new, old in relabel.items():
        inv[old] = new
    return inv


def _mention_to_dict(m: EntityMention) -> dict:
    return {"surface": m.surface, "start": m.start, "end": m.end, "label": m.label, "source": m.source}


def _mention_from_dict(d: dict) -> EntityMention:
    return EntityMention(
        surface=d["surface"], start=int(d["start"]), end=int(d["end"]),
        label=d.get("label", "ENTITY"), source=d.get("source", "external"),
    )


def _corpus_to_dict(corpus: Corpus) -> dict:
    docs = []
    for doc in corpus.documents:
        docs.append({
            "id": doc.id,
            "text": doc.text,
            "gold": [{"slot": f.slot, "answers": list(f.answers)} for f in doc.gold_fills],
            "entities": [
                {"surface": h.surface, "start": h.start, "end": h.end, "label": h.label}
                for h in doc.entity_hints
            ],
        })
    return {"documents": docs}


def _corpus_from_dict(data: dict) -> Corpus:
    docs = []
    for item in data["documents"]:
        docs.append(
            Document(
                id=item["id"],
                text=item["text"],
                sentences=tuple(segment(item["text"])),
                gold_fills=tuple(
                    GoldFill(slot=f["slot"], answers=tuple(f["answers"])) for f in item.get("gold", [])
                ),
                entity_hints=tuple(
                    EntityHint(surface=e["surface"], start=e["start"], end=e["end"],
                               label=e.get("label", "ENTITY"))
                    for e in item.get("entities", [])
                ),
            )
        )
    return Corpus.from_documents(docs)


def _validate_session(session: SessionState) -> None:
    k = session.clusters.k
    for qid, q in session.questions.items():
        if q.cluster_id is None or not (0 <= q.cluster_id < k):
            raise CorruptSnapshotError(f"question {qid!r} has cluster id {q.cluster_id} outside [0,{k})")
        if session.clusters.assignment.get(qid) != q.cluster_id:
            raise CorruptSnapshotError(f"assignment mismatch for question {qid!r}")
    seqs = [event.get("seq") for event in session.event_log]
    if seqs != sorted(seqs) or len(set(seqs)) != len(seqs):
        raise CorruptSnapshotError("event log sequence numbers are not strictly increasing")


def snapshot(session: SessionState, path: str | Path, include_embeddings: bool = True) -> None:
    try:
        Path(path).write_text(session.snapshot_json(include_embeddings), "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write snapshot: {exc}") from exc


def restore(path: str | Path) -> SessionState:
    try:
        raw = Path(path).read_text("utf-8")
    except OSError as exc:
        raise IoError(f"cannot read snapshot: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorruptSnapshotError(f"snapshot is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise CorruptSnapshotError("snapshot root must be an object")
    return SessionState.from_dict(data)


def replay_events(initial: SessionState, events: Iterable[dict]) -> SessionState:
    """Re-apply logged operations to a restored initial state.

    Operations are deterministic, so the replayed session (including logical
    timestamps) deep-equals the live one.
    """
    for event in events:
        initial.apply(op_from_dict(event["op"]))
    return initial
