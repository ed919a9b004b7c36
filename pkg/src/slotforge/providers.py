"""Entity, question-generation and reader providers.

Three model roles are pluggable behind one interface: entity recognition,
answer-conditioned question generation, and extractive reading. The built-in
implementations are deterministic rule-based stand-ins (gazetteer/pattern NER,
wh-template question generator, lexical-overlap reader); the same roles can be
served by recorded fixtures or a live HTTP endpoint, so swapping models never
changes the pipeline code.

Wire format (fixture and HTTP modes), one request/response pair per call:
  request  {role: "ner"|"qg"|"reader", doc_id, text, answer?, question?}
  response {mentions?: [{surface,start,end,label}], question?: str,
            answer?: str|null, start?: int, end?: int, score?: float}
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import httpx
import numpy as np

from .config import ProviderSpec
from .corpus import Document
from .errors import (
    BadResponseError,
    ProviderError,
    TimeoutError,
    TransportError,
)

MENTION_SOURCES = ("gazetteer", "pattern", "external", "gold_hint")

_MONTH = "(?:January|February|March|April|May|June|July|August|September|October|November|December)"

# Shipped default patterns; the month-name date regex backs the DATE examples.
DEFAULT_PATTERNS: tuple[tuple[str, str], ...] = (
    (rf"{_MONTH}\s+\d{{1,2}},\s+\d{{4}}", "DATE"),
    (r"\b\d{4}-\d{2}-\d{2}\b", "DATE"),
)

AUXILIARIES = frozenset(
    "is are was were has have had can could will would may might must shall should do does did".split()
)


def load_stopwords() -> frozenset[str]:
    text = resources.files("slotforge.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_wh_templates() -> dict[str, str]:
    text = resources.files("slotforge.data").joinpath("wh_templates.json").read_text("utf-8")
    return json.loads(text)


STOPWORDS = load_stopwords()
WH_TEMPLATES = load_wh_templates()

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class EntityMention:
    surface: str
    start: int
    end: int
    label: str = "ENTITY"
    source: str = "gazetteer"

    def __post_init__(self) -> None:
        if self.source not in MENTION_SOURCES:
            raise ValueError(f"unknown mention source {self.source!r}")

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class GeneratedQuestion:
    """A factoid question pivoting on one entity mention.

    `bleached` and `embedding` are filled by the induction stages;
    `cluster_id` / `representative` are kept in sync by the session.
    """

    id: str
    doc_id: str
    text: str
    pivot: EntityMention
    answer_text: str
    bleached: str = ""
    embedding: np.ndarray | None = None
    cluster_id: int | None = None
    representative: bool = False

    def __post_init__(self) -> None:
        if not self.text.endswith("?"):
            raise ValueError(f"question text must end with '?': {self.text!r}")
        if not self.answer_text:
            raise ValueError("answer_text must be non-empty")


@dataclass(frozen=True)
class ProviderEndpoint:
    url: str
    timeout: float = 10.0
    auth_token: str | None = None
    max_attempts: int = 3
    backoff: float = 0.1

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def resolve_overlaps(candidates: list[EntityMention]) -> list[EntityMention]:
    """Longest-match, left-to-right, non-overlapping selection."""
    ordered = sorted(candidates, key=lambda m: (m.start, -(m.end - m.start), m.label, m.source))
    out: list[EntityMention] = []
    last_end = -1
    for m in ordered:
        if m.start >= last_end:
            out.append(m)
            last_end = m.end
    return out


def _whole_token_occurrences(text_lower: str, surface_lower: str) -> list[int]:
    """Start offsets where `surface_lower` occurs bounded by non-alphanumerics."""
    out = []
    start = 0
    while True:
        idx = text_lower.find(surface_lower, start)
        if idx < 0:
            return out
        before_ok = idx == 0 or not text_lower[idx - 1].isalnum()
        after = idx + len(surface_lower)
        after_ok = after == len(text_lower) or not text_lower[after].isalnum()
        if before_ok and after_ok:
            out.append(idx)
        start = idx + 1


def identify_entities(
    doc: Document,
    gazetteer: set[tuple[str, str]] | frozenset[tuple[str, str]] = frozenset(),
    patterns: tuple[tuple[str, str], ...] = DEFAULT_PATTERNS,
) -> list[EntityMention]:
    """Rule-based NER: case-insensitive whole-token gazetteer hits plus regex
    pattern hits, resolved longest-match left-to-right."""
    text_lower = doc.text.lower()
    candidates: list[EntityMention] = []
    for surface, label in sorted(gazetteer, key=lambda e: (e[0].lower(), e[1])):
        if not surface:
            raise ValueError("gazetteer surfaces must be non-empty")
        for idx in _whole_token_occurrences(text_lower, surface.lower()):
            end = idx + len(surface)
            candidates.append(
                EntityMention(surface=doc.text[idx:end], start=idx, end=end, label=label, source="gazetteer")
            )
    for pattern, label in patterns:
        for match in re.finditer(pattern, doc.text):
            candidates.append(
                EntityMention(
                    surface=match.group(0), start=match.start(), end=match.end(),
                    label=label, source="pattern",
                )
            )
    return resolve_overlaps(candidates)


def collect_mentions(
    doc: Document,
    provider: "Providers",
    extra_gazetteer: frozenset[tuple[str, str]] = frozenset(),
) -> list[EntityMention]:
    """Document-declared entity hints plus provider NER, overlap-resolved."""
    candidates = [
        EntityMention(surface=h.surface, start=h.start, end=h.end, label=h.label, source="gold_hint")
        for h in doc.entity_hints
    ]
    candidates.extend(provider.ner(doc, extra_gazetteer))
    return resolve_overlaps(candidates)


def _strip_edge_punct(text: str) -> str:
    return text.strip().strip(".?!,;:").strip()


def build_question_text(sentence: str, pivot_start: int, pivot_end: int, label: str,
                        templates: dict[str, str] | None = None) -> str:
    """Template question: drop the pivot span, front the first auxiliary verb,
    prepend the label's wh-phrase, lowercase, append '?'."""
    templates = templates or WH_TEMPLATES
    wh = templates.get(label, templates.get("default", "what"))
    remainder = sentence[:pivot_start] + " " + sentence[pivot_end:]
    remainder = re.sub(r"\s+", " ", remainder)
    remainder = re.sub(r"\s+([,;:.!?])", r"\1", remainder)
    remainder = _strip_edge_punct(remainder)
    parts = remainder.split()
    for i, token in enumerate(parts):
        if token.lower().strip(",;:") in AUXILIARIES:
            parts = [parts[i]] + parts[:i] + parts[i + 1:]
            break
    body = " ".join([wh] + parts).lower().strip()
    return body + "?"


def generate_questions(
    doc: Document,
    mentions: list[EntityMention],
    provider: "Providers | None" = None,
) -> tuple[list[GeneratedQuestion], int]:
    """One question per mention over its sentence. Mentions whose sentence
    cannot be located are skipped; returns (questions, skipped_count).
    Question ids are provisional (`doc_id#index`); the pipeline reassigns."""
    out: list[GeneratedQuestion] = []
    skipped = 0
    for idx, mention in enumerate(mentions):
        sent = doc.sentence_at(mention.start)
        if sent is None or mention.end > sent[1]:
            skipped += 1
            continue
        start, end = sent
        sentence = doc.text[start:end]
        if provider is not None and not isinstance(provider, BuiltinProviders):
            text = provider.qg(doc, sentence, mention)
        else:
            text = build_question_text(sentence, mention.start - start, mention.end - start, mention.label)
        out.append(
            GeneratedQuestion(
                id=f"{doc.id}#{idx}",
                doc_id=doc.id,
                text=text,
                pivot=mention,
                answer_text=mention.surface,
            )
        )
    return out, skipped


def answer_question(
    question: str,
    doc: Document,
    mentions: list[EntityMention],
    threshold: float = 0.2,
    stopwords: frozenset[str] = STOPWORDS,
) -> tuple[str, tuple[int, int], float] | None:
    """Lexical-overlap reader. Scores each candidate mention by the fraction
    of the question's content tokens found in the mention's sentence; mentions
    whose surface already appears in the question are excluded."""
    if not question:
        raise ValueError("question must be non-empty")
    q_tokens = [t for t in tokens(question) if t not in stopwords]
    if not q_tokens:
        return None
    q_set = set(q_tokens)
    question_lower = question.lower()
    best: tuple[float, int, int, str] | None = None
    for m in mentions:
        if m.surface.lower() in question_lower:
            continue
        sent = doc.sentence_at(m.start)
        if sent is None:
            continue
        sent_tokens = set(tokens(doc.text[sent[0]:sent[1]]))
        score = len(q_set & sent_tokens) / len(q_set)
        key = (-score, m.start, m.end, m.surface)
        if best is None or key < (-best[0], best[1], best[2], best[3]):
            best = (score, m.start, m.end, m.surface)
    if best is None or best[0] < threshold:
        return None
    score, start, end, surface = best
    return (surface, (start, end), score)


def canonical_payload(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def call_external(endpoint: ProviderEndpoint, payload: dict) -> dict:
    """POST a canonical-form JSON payload, retrying on transport errors and
    5xx responses per the endpoint's retry policy."""
    body = canonical_payload(payload)
    headers = {"content-type": "application/json"}
    if endpoint.auth_token:
        headers["authorization"] = f"Bearer {endpoint.auth_token}"
    last_error: Exception | None = None
    attempts = 0
    for attempt in range(endpoint.max_attempts):
        attempts = attempt + 1
        if attempt > 0:
            time.sleep(endpoint.backoff * (2 ** (attempt - 1)))
        try:
            response = httpx.post(endpoint.url, content=body, headers=headers, timeout=endpoint.timeout)
        except httpx.TimeoutException as exc:
            last_error = TimeoutError(f"timeout calling {endpoint.url}", attempts)
            continue
        except httpx.HTTPError as exc:
            last_error = TransportError(f"transport failure calling {endpoint.url}: {exc}", attempts)
            continue
        if response.status_code >= 500:
            last_error = TransportError(f"server error {response.status_code} from {endpoint.url}", attempts)
            continue
        if response.status_code >= 400:
            raise BadResponseError(f"client error {response.status_code} from {endpoint.url}", attempts)
        try:
            return response.json()
        except (json.JSONDecodeError, ValueError):
            raise BadResponseError(f"non-JSON body from {endpoint.url}", attempts)
    assert last_error is not None
    raise last_error


class Providers:
    """Role interface. Subclasses implement the three model roles."""

    def ner(self, doc: Document, extra_gazetteer: frozenset[tuple[str, str]] = frozenset()) -> list[EntityMention]:
        raise NotImplementedError

    def qg(self, doc: Document, sentence: str, mention: EntityMention) -> str:
        raise NotImplementedError

    def reader(self, doc: Document, mentions: list[EntityMention], question: str,
               threshold: float = 0.2) -> tuple[str, tuple[int, int], float] | None:
        raise NotImplementedError


class BuiltinProviders(Providers):
    def __init__(
        self,
        gazetteer: frozenset[tuple[str, str]] = frozenset(),
        patterns: tuple[tuple[str, str], ...] = DEFAULT_PATTERNS,
    ):
        self.gazetteer = frozenset(gazetteer)
        self.patterns = patterns

    def ner(self, doc, extra_gazetteer=frozenset()):
        return identify_entities(doc, self.gazetteer | extra_gazetteer, self.patterns)

    def qg(self, doc, sentence, mention):
        offset = doc.text.find(sentence)
        return build_question_text(
            sentence, mention.start - offset, mention.end - offset, mention.label
        )

    def reader(self, doc, mentions, question, threshold=0.2):
        return answer_question(question, doc, mentions, threshold)


class FixtureProviders(Providers):
    """Replays recorded request/response pairs from a jsonl file, or from
    every *.jsonl file inside a directory.

    A request with no recorded response raises ProviderError, making missing
    coverage loud instead of silently falling back.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        files = sorted(self.path.glob("*.jsonl")) if self.path.is_dir() else [self.path]
        self._responses: dict[str, dict] = {}
        for file in files:
            for line in file.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                self._responses[canonical_payload(record["request"])] = record["response"]

    def _lookup(self, request: dict) -> dict:
        key = canonical_payload(request)
        if key not in self._responses:
            raise ProviderError(f"no recorded fixture for request: {key}")
        return self._responses[key]

    def ner(self, doc, extra_gazetteer=frozenset()):
        response = self._lookup({"role": "ner", "doc_id": doc.id, "text": doc.text})
        out = []
        for m in response.get("mentions", []):
            out.append(
                EntityMention(
                    surface=m["surface"], start=m["start"], end=m["end"],
                    label=m.get("label", "ENTITY"), source="external",
                )
            )
        return resolve_overlaps(out)

    def qg(self, doc, sentence, mention):
        response = self._lookup(
            {"role": "qg", "doc_id": doc.id, "text": sentence, "answer": mention.surface}
        )
        return response["question"]

    def reader(self, doc, mentions, question, threshold=0.2):
        response = self._lookup({"role": "reader", "doc_id": doc.id, "text": doc.text, "question": question})
        return _reader_response_to_span(response, doc)


class HttpProviders(Providers):
    """Live-endpoint providers; at most `max_in_flight` concurrent requests."""

    def __init__(self, endpoint: ProviderEndpoint, max_in_flight: int = 4):
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        self.endpoint = endpoint
        self._gate = threading.BoundedSemaphore(max_in_flight)

    def _call(self, payload: dict) -> dict:
        with self._gate:
            return call_external(self.endpoint, payload)

    def ner(self, doc, extra_gazetteer=frozenset()):
        response = self._call({"role": "ner", "doc_id": doc.id, "text": doc.text})
        out = [
            EntityMention(surface=m["surface"], start=m["start"], end=m["end"],
                          label=m.get("label", "ENTITY"), source="external")
            for m in response.get("mentions", [])
        ]
        return resolve_overlaps(out)

    def qg(self, doc, sentence, mention):
        response = self._call(
            {"role": "qg", "doc_id": doc.id, "text": sentence, "answer": mention.surface}
        )
        return response["question"]

    def reader(self, doc, mentions, question, threshold=0.2):
        response = self._call(
            {"role": "reader", "doc_id": doc.id, "text": doc.text, "question": question}
        )
        return _reader_response_to_span(response, doc)


def _reader_response_to_span(response: dict, doc: Document) -> tuple[str, tuple[int, int], float] | None:
    answer = response.get("answer")
    if not answer:
        return None
    score = float(response.get("score", 1.0))
    if "start" in response and "end" in response:
        return (answer, (response["start"], response["end"]), score)
    idx = doc.text.lower().find(answer.lower())
    if idx < 0:
        return (answer, (0, 0), score)
    return (doc.text[idx:idx + len(answer)], (idx, idx + len(answer)), score)


def make_providers(spec: ProviderSpec) -> Providers:
    if spec.mode == "builtin":
        return BuiltinProviders()
    if spec.mode == "fixture":
        if not spec.path:
            raise ValueError("fixture provider mode requires a path")
        return FixtureProviders(spec.path)
    if spec.mode == "http":
        if not spec.url:
            raise ValueError("http provider mode requires a url")
        return HttpProviders(
            ProviderEndpoint(url=spec.url, timeout=spec.timeout, max_attempts=spec.max_attempts),
            max_in_flight=spec.max_in_flight,
        )
    raise ValueError(f"unknown provider mode {spec.mode!r}")
