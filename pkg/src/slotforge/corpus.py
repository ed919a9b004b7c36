"""Corpus model and loaders.

Documents carry raw text, rule-segmented sentence spans, gold slot fills and
optional pre-declared entity spans. Two on-disk formats are supported:

* ``jsonl``   — one object per line:
  ``{id, text, gold:[{slot, answers:[...]}], entities?:[{surface,start,end,label}]}``
  where each answer is a string or a ``[start, end)`` character range.
* ``triples`` — one object per line: ``{subject, relation, object, text}``;
  one document per distinct text, the relation becomes the slot, the object
  the gold answer, and the subject is kept as a seed entity hint.

Everything is immutable after load; a Corpus is safe to share across threads.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DuplicateIdError, FormatError, IoError, MissingSpanError

log = logging.getLogger(__name__)

_TERMINATORS = ".?!"


def _load_abbreviations() -> frozenset[str]:
    text = resources.files("slotforge.data").joinpath("abbreviations.txt").read_text("utf-8")
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


ABBREVIATIONS = _load_abbreviations()


@dataclass(frozen=True)
class GoldFill:
    """One gold slot fill: slot-type name plus one or more answer strings."""

    slot: str
    answers: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.slot:
            raise ValueError("GoldFill.slot must be non-empty")
        if not self.answers:
            raise ValueError(f"GoldFill for slot {self.slot!r} has no answers")


@dataclass(frozen=True)
class EntityHint:
    """Pre-declared entity span (from the jsonl `entities` field or a triple subject)."""

    surface: str
    start: int
    end: int
    label: str = "ENTITY"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    sentences: tuple[tuple[int, int], ...]
    gold_fills: tuple[GoldFill, ...] = ()
    entity_hints: tuple[EntityHint, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("Document.id must be non-empty")
        prev_end = 0
        for start, end in self.sentences:
            if not (0 <= start < end <= len(self.text)):
                raise ValueError(f"sentence range [{start},{end}) out of bounds in doc {self.id!r}")
            if start < prev_end:
                raise ValueError(f"overlapping sentence ranges in doc {self.id!r}")
            prev_end = end

    def sentence_at(self, pos: int) -> tuple[int, int] | None:
        """Sentence range containing character position `pos`, if any."""
        for start, end in self.sentences:
            if start <= pos < end:
                return (start, end)
        return None


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    slot_inventory: frozenset[str] = field(default=frozenset())

    @classmethod
    def from_documents(cls, documents: list[Document] | tuple[Document, ...]) -> "Corpus":
        slots = frozenset(fill.slot for doc in documents for fill in doc.gold_fills)
        return cls(documents=tuple(documents), slot_inventory=slots)

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)

    def gold_answers(self, slot: str, doc_id: str | None = None) -> tuple[str, ...]:
        """Gold answers for `slot`, restricted to one document when given."""
        out: list[str] = []
        for doc in self.documents:
            if doc_id is not None and doc.id != doc_id:
                continue
            for fill in doc.gold_fills:
                if fill.slot == slot:
                    out.extend(fill.answers)
        return tuple(out)


def segment(text: str) -> list[tuple[int, int]]:
    """Split text into sentence ranges.

    Splits after '.', '?' or '!' followed by whitespace or end of text, unless
    the token before a '.' is a known abbreviation. Each range is trimmed of
    surrounding whitespace; together the ranges cover all non-whitespace
    content, so re-joining them with the inter-range gaps reproduces the text.
    """
    ranges: list[tuple[int, int]] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _TERMINATORS and (i + 1 == n or text[i + 1].isspace()):
            if ch == "." and _is_abbreviation(text, i):
                i += 1
                continue
            _append_trimmed(ranges, text, start, i + 1)
            start = i + 1
        i += 1
    _append_trimmed(ranges, text, start, n)
    return ranges


def _is_abbreviation(text: str, dot_pos: int) -> bool:
    j = dot_pos
    while j > 0 and (text[j - 1].isalnum() or text[j - 1] == "."):
        j -= 1
    token = text[j:dot_pos].lower()
    return token in ABBREVIATIONS


def _append_trimmed(ranges: list[tuple[int, int]], text: str, start: int, end: int) -> None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if end > start:
        ranges.append((start, end))


def _normalize_answer(answer: object, text: str, line: int | None) -> str:
    if isinstance(answer, str):
        return answer
    if (
        isinstance(answer, (list, tuple))
        and len(answer) == 2
        and all(isinstance(x, int) for x in answer)
    ):
        start, end = answer
        if not (0 <= start < end <= len(text)):
            raise FormatError(f"answer range [{start},{end}) out of document bounds", line)
        return text[start:end]
    raise FormatError(f"answer must be a string or [start,end) pair, got {answer!r}", line)


def _document_from_record(record: dict, line: int | None) -> Document:
    try:
        doc_id = record["id"]
        text = record["text"]
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}", line) from None
    if not isinstance(doc_id, str) or not doc_id:
        raise FormatError("id must be a non-empty string", line)
    if not isinstance(text, str):
        raise FormatError("text must be a string", line)

    fills: list[GoldFill] = []
    for fill in record.get("gold", []):
        try:
            slot = fill["slot"]
            answers = fill["answers"]
        except (TypeError, KeyError):
            raise FormatError(f"malformed gold fill {fill!r}", line) from None
        if not answers:
            raise FormatError(f"gold fill for slot {slot!r} has no answers", line)
        fills.append(
            GoldFill(slot=slot, answers=tuple(_normalize_answer(a, text, line) for a in answers))
        )

    hints: list[EntityHint] = []
    for ent in record.get("entities", []):
        try:
            surface = ent["surface"]
            start, end = ent["start"], ent["end"]
        except (TypeError, KeyError):
            raise FormatError(f"malformed entity {ent!r}", line) from None
        if text[start:end] != surface:
            raise FormatError(
                f"entity surface {surface!r} does not match text slice [{start},{end})", line
            )
        hints.append(EntityHint(surface=surface, start=start, end=end, label=ent.get("label", "ENTITY")))

    return Document(
        id=doc_id,
        text=text,
        sentences=tuple(segment(text)),
        gold_fills=tuple(fills),
        entity_hints=tuple(hints),
    )


def load_corpus(path: str | Path, format_id: str = "jsonl") -> Corpus:
    """Load a corpus from disk. Deterministic for identical input bytes."""
    path = Path(path)
    if format_id not in ("jsonl", "triples"):
        raise ValueError(f"unknown corpus format {format_id!r}")
    try:
        raw = path.read_text("utf-8")
    except OSError as exc:
        raise IoError(f"cannot read corpus: {exc}") from exc

    if format_id == "triples":
        records = []
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid json: {exc.msg}", lineno) from None
            try:
                records.append((rec["subject"], rec["relation"], rec["object"], rec["text"]))
            except (TypeError, KeyError) as exc:
                raise FormatError(f"triple record missing field {exc}", lineno) from None
        corpus, skipped = convert_triples(records)
        if skipped:
            log.warning("convert_triples: skipped %d record(s) with missing spans", skipped)
        return corpus

    documents: list[Document] = []
    seen: set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid json: {exc.msg}", lineno) from None
        doc = _document_from_record(record, lineno)
        if doc.id in seen:
            raise DuplicateIdError(doc.id)
        seen.add(doc.id)
        documents.append(doc)
    return Corpus.from_documents(documents)


def convert_triples(
    records: list[tuple[str, str, str, str]],
) -> tuple[Corpus, int]:
    """Build a corpus from (subject, relation, object, text) records.

    One document per distinct text (first-appearance order); the relation
    becomes the gold slot, the object the gold answer, and the subject is kept
    as an entity hint. Records whose subject or object is not a substring of
    the text (case-insensitive) are skipped; the skip count is returned.
    """
    by_text: dict[str, dict] = {}
    order: list[str] = []
    skipped = 0
    for subject, relation, obj, text in records:
        if not text:
            skipped += 1
            continue
        lower = text.lower()
        if subject.lower() not in lower or obj.lower() not in lower:
            skipped += 1
            continue
        if text not in by_text:
            by_text[text] = {"fills": [], "hints": []}
            order.append(text)
        entry = by_text[text]
        entry["fills"].append(GoldFill(slot=relation, answers=(obj,)))
        start = lower.find(subject.lower())
        surface = text[start:start + len(subject)]
        hint = EntityHint(surface=surface, start=start, end=start + len(subject))
        if hint not in entry["hints"]:
            entry["hints"].append(hint)

    documents = []
    for idx, text in enumerate(order, start=1):
        entry = by_text[text]
        documents.append(
            Document(
                id=f"t{idx:04d}",
                text=text,
                sentences=tuple(segment(text)),
                gold_fills=tuple(entry["fills"]),
                entity_hints=tuple(entry["hints"]),
            )
        )
    return Corpus.from_documents(documents), skipped


def corpus_to_jsonl(corpus: Corpus) -> str:
    """Serialize a corpus to the jsonl format accepted by load_corpus."""
    lines = []
    for doc in corpus.documents:
        record = {
            "id": doc.id,
            "text": doc.text,
            "gold": [{"slot": f.slot, "answers": list(f.answers)} for f in doc.gold_fills],
        }
        if doc.entity_hints:
            record["entities"] = [
                {"surface": h.surface, "start": h.start, "end": h.end, "label": h.label}
                for h in doc.entity_hints
            ]
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    try:
        Path(path).write_text(corpus_to_jsonl(corpus), "utf-8")
    except OSError as exc:
        raise IoError(f"cannot write corpus: {exc}") from exc
