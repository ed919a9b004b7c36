"""Cluster-to-slot mapping and precision/recall/F1 evaluation.

Clusters are mapped to gold slot types by fuzzy-matching the answers of their
representative questions against gold slot fillers (normalized Levenshtein
ratio); predictions are then scored per document and per slot with a greedy
one-to-one matching at threshold theta. Several clusters may map to one slot;
clusters with no representative answers map to the reserved "∅" slot and
produce no predictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import UnmappedError
from .providers import GeneratedQuestion

UNMAPPED_SLOT = "∅"


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cur[j] = min(
                prev[j] + 1,          # deletion
                cur[j - 1] + 1,       # insertion
                prev[j - 1] + (ca != cb),
            )
        prev = cur
    return prev[-1]


def fuzzy_score(a: str, b: str) -> float:
    """Similarity in [0,1]: 1 - normalized edit distance over case/whitespace
    normalized strings. Two empty strings score 1."""
    na, nb = _normalize(a), _normalize(b)
    if not na and not nb:
        return 1.0
    return 1.0 - levenshtein(na, nb) / max(len(na), len(nb))


@dataclass
class SlotScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if (self.tp + self.fp) else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if (self.tp + self.fn) else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if (p + r) else 0.0

    def to_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
        }


@dataclass
class SlotMapping:
    cluster_to_slot: dict[int, str]
    scores: dict[int, float]

    def to_dict(self) -> dict:
        return {
            "cluster_to_slot": {str(c): s for c, s in sorted(self.cluster_to_slot.items())},
            "scores": {str(c): v for c, v in sorted(self.scores.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SlotMapping":
        return cls(
            cluster_to_slot={int(c): s for c, s in d["cluster_to_slot"].items()},
            scores={int(c): float(v) for c, v in d["scores"].items()},
        )


@dataclass
class EvaluationReport:
    per_slot: dict[str, SlotScore]
    timestamp: int = 0
    action_count: int = 0

    @property
    def micro(self) -> SlotScore:
        total = SlotScore()
        for score in self.per_slot.values():
            total.tp += score.tp
            total.fp += score.fp
            total.fn += score.fn
        return total

    @property
    def macro_precision(self) -> float:
        return _mean([s.precision for s in self.per_slot.values()])

    @property
    def macro_recall(self) -> float:
        return _mean([s.recall for s in self.per_slot.values()])

    @property
    def macro_f1(self) -> float:
        return _mean([s.f1 for s in self.per_slot.values()])

    def to_dict(self) -> dict:
        return {
            "per_slot": {slot: s.to_dict() for slot, s in sorted(self.per_slot.items())},
            "micro": self.micro.to_dict(),
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "timestamp": self.timestamp,
            "action_count": self.action_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        per_slot = {
            slot: SlotScore(tp=s["tp"], fp=s["fp"], fn=s["fn"])
            for slot, s in d["per_slot"].items()
        }
        return cls(per_slot=per_slot, timestamp=d.get("timestamp", 0),
                   action_count=d.get("action_count", 0))


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _representative_answers(questions: Iterable[GeneratedQuestion], cluster_id: int) -> list[tuple[str, str]]:
    """(answer_text, doc_id) pairs of the cluster's representative questions."""
    return [
        (q.answer_text, q.doc_id)
        for q in questions
        if q.cluster_id == cluster_id and q.representative
    ]


def _best_gold_match(candidate: str, doc_id: str, slot: str, corpus: Corpus) -> float:
    golds = corpus.gold_answers(slot, doc_id)
    if not golds:
        golds = corpus.gold_answers(slot)
    if not golds:
        return 0.0
    return max(fuzzy_score(candidate, g) for g in golds)


def map_clusters(
    questions: Iterable[GeneratedQuestion],
    cluster_ids: Sequence[int],
    corpus: Corpus,
) -> SlotMapping:
    """Assign every cluster to the gold slot whose fillers best match the
    cluster's representative answers (same-document gold preferred, falling
    back to corpus-wide gold); ties break lexicographically by slot name."""
    questions = list(questions)
    slots = sorted(corpus.slot_inventory)
    mapping: dict[int, str] = {}
    scores: dict[int, float] = {}
    for cid in cluster_ids:
        candidates = _representative_answers(questions, cid)
        if not candidates or not slots:
            mapping[cid] = UNMAPPED_SLOT
            scores[cid] = 0.0
            continue
        best_slot = None
        best_score = -1.0
        for slot in slots:
            score = _mean([_best_gold_match(ans, doc, slot, corpus) for ans, doc in candidates])
            if score > best_score:
                best_slot, best_score = slot, score
        mapping[cid] = best_slot if best_slot is not None else UNMAPPED_SLOT
        scores[cid] = max(best_score, 0.0)
    return SlotMapping(cluster_to_slot=mapping, scores=scores)


def greedy_match_count(predictions: Sequence[str], golds: Sequence[str], theta: float) -> int:
    """Greedy one-to-one matching by descending fuzzy score at threshold theta."""
    pairs = []
    for pi, pred in enumerate(predictions):
        for gi, gold in enumerate(golds):
            score = fuzzy_score(pred, gold)
            if score >= theta:
                pairs.append((-score, pi, gi))
    pairs.sort()
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matched = 0
    for _, pi, gi in pairs:
        if pi in used_pred or gi in used_gold:
            continue
        used_pred.add(pi)
        used_gold.add(gi)
        matched += 1
    return matched


def collect_predictions(
    questions: Iterable[GeneratedQuestion], mapping: SlotMapping
) -> dict[tuple[str, str], list[str]]:
    """Representative answers grouped per (doc, mapped slot); ∅ clusters are skipped."""
    out: dict[tuple[str, str], list[str]] = {}
    for q in sorted(questions, key=lambda q: q.id):
        if not q.representative or q.cluster_id is None:
            continue
        slot = mapping.cluster_to_slot.get(q.cluster_id, UNMAPPED_SLOT)
        if slot == UNMAPPED_SLOT:
            continue
        out.setdefault((q.doc_id, slot), []).append(q.answer_text)
    return out


def evaluate(
    questions: Iterable[GeneratedQuestion],
    mapping: SlotMapping | None,
    corpus: Corpus,
    theta: float = 0.8,
    doc_ids: Sequence[str] | None = None,
    timestamp: int = 0,
    action_count: int = 0,
) -> EvaluationReport:
    """Score predictions against gold fills.

    Per (document, slot): predictions are the representative answers of every
    cluster mapped to the slot; each gold answer is consumable once; a
    prediction matching an unconsumed gold at >= theta is a TP (greedy by
    descending score), leftovers are FP, unconsumed golds are FN. The document
    universe defaults to the whole corpus.
    """
    if mapping is None:
        raise UnmappedError("slot mapping has not been computed")
    predictions = collect_predictions(questions, mapping)
    return _score_predictions(predictions, corpus, theta, doc_ids, timestamp, action_count)


def _score_predictions(
    predictions: dict[tuple[str, str], list[str]],
    corpus: Corpus,
    theta: float,
    doc_ids: Sequence[str] | None,
    timestamp: int,
    action_count: int,
) -> EvaluationReport:
    universe = [d.id for d in corpus.documents] if doc_ids is None else list(doc_ids)
    per_slot = {slot: SlotScore() for slot in sorted(corpus.slot_inventory)}
    for doc_id in universe:
        for slot, score in per_slot.items():
            preds = predictions.get((doc_id, slot), [])
            golds = list(corpus.gold_answers(slot, doc_id))
            matched = greedy_match_count(preds, golds, theta)
            score.tp += matched
            score.fp += len(preds) - matched
            score.fn += len(golds) - matched
    return EvaluationReport(per_slot=per_slot, timestamp=timestamp, action_count=action_count)


def map_triples(
    triples: Sequence[tuple[str, str, str, str]],
    corpus: Corpus,
    theta: float = 0.8,
) -> EvaluationReport:
    """Score (doc_id, subject, relation, object) triples against gold fills.

    Each triple's relation is fuzzily matched to the nearest slot name and its
    object becomes that slot's prediction; scoring then follows evaluate()'s
    matching rule over the documents that carry at least one triple.
    """
    slots = sorted(corpus.slot_inventory)
    predictions: dict[tuple[str, str], list[str]] = {}
    doc_ids: list[str] = []
    for doc_id, _subject, relation, obj in triples:
        if doc_id not in doc_ids:
            doc_ids.append(doc_id)
        if not slots:
            continue
        best_score = max(fuzzy_score(relation, s) for s in slots)
        best_slot = next(s for s in slots if fuzzy_score(relation, s) == best_score)
        predictions.setdefault((doc_id, best_slot), []).append(obj)
    return _score_predictions(predictions, corpus, theta, doc_ids, timestamp=0, action_count=0)


def render_f1_table(rows: dict[str, dict[str, float]], slots: Sequence[str]) -> str:
    """Aligned plain-text table: one row per label, slots as columns, F1 cells.

    Row values may also carry "micro-F1" / "macro-F1" pseudo-slot entries."""
    headers = ["method"] + list(slots) + ["micro-F1", "macro-F1"]
    body = []
    for label, values in rows.items():
        cells = [label]
        for key in list(slots) + ["micro-F1", "macro-F1"]:
            value = values.get(key)
            cells.append(f"{value:.3f}" if value is not None else "-")
        body.append(cells)
    widths = [max(len(r[i]) for r in [headers] + body) for i in range(len(headers))]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)


def render_report_table(
    reports: dict[str, EvaluationReport], slots: Sequence[str] | None = None
) -> str:
    """Aligned plain-text table: methods as rows, slots as columns, F1 cells."""
    if not reports:
        return "(no reports)"
    if slots is None:
        slot_set: set[str] = set()
        for report in reports.values():
            slot_set.update(report.per_slot)
        slots = sorted(slot_set)
    rows = {}
    for label, report in reports.items():
        values = {slot: report.per_slot[slot].f1 for slot in slots if slot in report.per_slot}
        values["micro-F1"] = report.micro.f1
        values["macro-F1"] = report.macro_f1
        rows[label] = values
    return render_f1_table(rows, slots)
