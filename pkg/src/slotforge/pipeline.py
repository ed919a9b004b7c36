"""End-to-end induction: identify entities, generate questions, bleach,
embed, cluster, select representatives, map slots, evaluate.

The stages run in a fixed order and every stage failure is tagged with the
stage name. Given one seed and deterministic providers (builtin or fixture),
two runs over the same corpus produce byte-identical sessions.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from .cluster import ClusterModel, RepresentativeSet, kmeans, random_clustering, recompute_centroids
from .config import InductionConfig
from .corpus import Corpus
from .errors import BadKError, PipelineError, SlotforgeError
from .providers import (
    EntityMention,
    GeneratedQuestion,
    Providers,
    collect_mentions,
    generate_questions,
    make_providers,
)
from .session import SessionState
from .slotmap import EvaluationReport, SlotMapping
from .vectorize import TfIdfModel, embed, fit_tfidf


@contextmanager
def _stage(name: str):
    try:
        yield
    except SlotforgeError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name  # type: ignore[attr-defined]
        raise


def hint_gazetteer(corpus: Corpus) -> frozenset[tuple[str, str]]:
    """Corpus-wide gazetteer built from per-document entity hints, so a seed
    entity declared in one document is also found in the others."""
    return frozenset((h.surface, h.label) for doc in corpus.documents for h in doc.entity_hints)


def run_induction(
    corpus: Corpus,
    config: InductionConfig,
    provider: Providers | None = None,
) -> SessionState:
    """Run the full AI-only pipeline and return a live session."""
    if not corpus.documents:
        raise PipelineError("entities", "corpus has no documents")
    if provider is None:
        provider = make_providers(config.providers)

    counts: dict[str, int] = {"documents": len(corpus.documents)}

    with _stage("entities"):
        gazetteer = hint_gazetteer(corpus)
        mentions: dict[str, list[EntityMention]] = {
            doc.id: collect_mentions(doc, provider, gazetteer) for doc in corpus.documents
        }
        counts["mentions"] = sum(len(v) for v in mentions.values())

    with _stage("qgen"):
        questions: dict[str, GeneratedQuestion] = {}
        skipped = 0
        serial = 1
        for doc in corpus.documents:
            generated, doc_skipped = generate_questions(doc, mentions[doc.id], provider)
            skipped += doc_skipped
            for q in generated:
                q.id = f"q{serial:06d}"
                serial += 1
                questions[q.id] = q
        counts["questions"] = len(questions)
        counts["qgen_skipped"] = skipped
        if not questions:
            raise PipelineError("qgen", "no questions generated")

    session = SessionState(
        corpus=corpus,
        questions=questions,
        mentions=mentions,
        tfidf=TfIdfModel(vocabulary={}, doc_freq=np.zeros(0), n_docs=0),
        clusters=ClusterModel(k=0, centroids=np.zeros((0, 0)), assignment={}, inertia=0.0, seed=config.seed),
        reps=RepresentativeSet(global_reps={}, doc_reps={}, tau=config.tau, top_k=config.top_k),
        mapping=SlotMapping(cluster_to_slot={}, scores={}),
        report=EvaluationReport(per_slot={}),
        config=config,
        next_qid=len(questions) + 1,
        stage_counts=counts,
        _provider=provider,
    )

    with _stage("bleach"):
        for q in questions.values():
            q.bleached = session.embed_text(q)

    with _stage("embed"):
        session.tfidf = fit_tfidf(
            [q.bleached for q in questions.values()], scale=config.effective_scale()
        )
        for q in questions.values():
            q.embedding = embed(session.tfidf, q.bleached)
        counts["vocabulary"] = session.tfidf.dim

    with _stage("cluster"):
        k = config.k if config.k is not None else len(corpus.slot_inventory)
        if k < 1:
            raise BadKError("k not set and corpus has no gold slots to default from")
        ids = list(questions.keys())
        vectors = np.stack([questions[qid].embedding for qid in ids])
        if config.use_random_clustering:
            model = random_clustering(ids, vectors, k, config.seed)
        else:
            model = kmeans(ids, vectors, k, config.seed)
        session.clusters = model
        for qid, cid in model.assignment.items():
            questions[qid].cluster_id = cid
        session._renumber_dense()
        recompute_centroids(session.clusters, session.vectors_by_id())
        counts["clusters"] = session.clusters.k

    with _stage("representatives"):
        session.refresh_representatives()

    with _stage("slotmap"):
        session.remap()

    with _stage("evaluate"):
        session.reevaluate(action_count=0)

    return session


def bootstrap_session(
    corpus: Corpus,
    question_specs: list[dict],
    config: InductionConfig,
    assignment: dict[str, int] | None = None,
) -> SessionState:
    """Build a session from pre-authored questions (fixtures, tests, tools).

    Each spec needs {id, doc_id, text, answer_text} plus optional pivot
    fields. Clustering either runs k-means as usual or honours a forced
    `assignment` (question id -> cluster id), which fixtures use to stage
    deliberate misplacements.
    """
    provider = make_providers(config.providers)
    gazetteer = hint_gazetteer(corpus)
    mentions = {doc.id: collect_mentions(doc, provider, gazetteer) for doc in corpus.documents}

    questions: dict[str, GeneratedQuestion] = {}
    for spec in question_specs:
        pivot = spec.get("pivot")
        if pivot is None:
            doc = corpus.document(spec["doc_id"])
            answer = spec["answer_text"]
            idx = doc.text.lower().find(answer.lower())
            start = max(idx, 0)
            pivot = EntityMention(
                surface=doc.text[start:start + len(answer)] if idx >= 0 else answer,
                start=start, end=start + len(answer), label=spec.get("label", "ENTITY"),
                source="gold_hint",
            )
        q = GeneratedQuestion(
            id=spec["id"], doc_id=spec["doc_id"], text=spec["text"],
            pivot=pivot, answer_text=spec["answer_text"],
        )
        questions[q.id] = q

    session = SessionState(
        corpus=corpus,
        questions=questions,
        mentions=mentions,
        tfidf=TfIdfModel(vocabulary={}, doc_freq=np.zeros(0), n_docs=0),
        clusters=ClusterModel(k=0, centroids=np.zeros((0, 0)), assignment={}, inertia=0.0, seed=config.seed),
        reps=RepresentativeSet(global_reps={}, doc_reps={}, tau=config.tau, top_k=config.top_k),
        mapping=SlotMapping(cluster_to_slot={}, scores={}),
        report=EvaluationReport(per_slot={}),
        config=config,
        next_qid=len(questions) + 1,
        stage_counts={"documents": len(corpus.documents), "questions": len(questions)},
        _provider=provider,
    )

    for q in questions.values():
        q.bleached = session.embed_text(q)
    session.tfidf = fit_tfidf([q.bleached for q in questions.values()], scale=config.effective_scale())
    for q in questions.values():
        q.embedding = embed(session.tfidf, q.bleached)

    ids = list(questions.keys())
    vectors = np.stack([questions[qid].embedding for qid in ids])
    if assignment is not None:
        k = max(assignment.values()) + 1
        model = ClusterModel(
            k=k, centroids=np.zeros((k, session.tfidf.dim)),
            assignment={qid: assignment[qid] for qid in ids},
            inertia=0.0, seed=config.seed,
        )
    else:
        k = config.k if config.k is not None else max(len(corpus.slot_inventory), 1)
        model = kmeans(ids, vectors, k, config.seed)
    session.clusters = model
    for qid, cid in model.assignment.items():
        questions[qid].cluster_id = cid
    session._renumber_dense()
    recompute_centroids(session.clusters, session.vectors_by_id())
    session.refresh_representatives()
    session.remap()
    session.reevaluate(action_count=0)
    return session
