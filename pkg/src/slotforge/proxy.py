"""Proxy-human agents and budgeted refinement episodes.

A proxy agent stands in for the human operator: it receives the same expert
prompts a human-facing LLM would (recluster verdicts, new-question proposals),
answers with JSON, and its verdicts are converted into ordinary session
operations. Scripted agents (gold oracle, random, noisy) make episodes fully
deterministic; fixture and HTTP agents share the same single-method interface
so live LLM calls never leak into tests.

Wire format: request {prompt}; response {text}. Scripted agents additionally
receive a structured context alongside the prompt and may ignore the prose.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .errors import AgentError, NoJsonError, NoSlotKeyError, ProviderError, SlotforgeError
from .providers import ProviderEndpoint, build_question_text, call_external
from .session import AddQuestion, DemoteQuestion, MoveQuestion, PromoteQuestion, SessionState
from .slotmap import EvaluationReport, fuzzy_score

log = logging.getLogger(__name__)

RECLUSTER_PROMPT_TEMPLATE = (
    "Below are the clusters:{examples}. "
    'What is the closest cluster in which there are questions like : "{question}" should belong to? '
    "Answer should be in json format and the key of the json should be within one of the keys among: "
    "{slot_names}, also include the confidence score"
)

ADDQ_PROMPT_TEMPLATE = (
    "Can you ask questions from the context {context} such that each salient mention is present "
    "in one question and another salient mention is the answer? "
    "Answer should be in the JSON Format {{Question:Answer}}. "
    "Answer should only be the salient mention. Do not include an entire sentence. "
    "Here are a few examples of question-answer pairs generated : {examples}"
)

POLICIES = ("recluster_only", "recluster_plus_add")


@dataclass(frozen=True)
class InContextExample:
    slot: str
    question: str
    answer: str
    doc_id: str


@dataclass(frozen=True)
class ExpertVerdict:
    slot: str
    confidence: float
    raw_response: str


@dataclass
class Trajectory:
    budgets: list[int]
    points: list[tuple[int, EvaluationReport]] = field(default_factory=list)
    aborted: bool = False

    def micro_f1_curve(self) -> list[tuple[int, float]]:
        return [(count, report.micro.f1) for count, report in self.points]

    def to_csv(self) -> str:
        lines = ["action_count,slot,precision,recall,f1"]
        for count, report in self.points:
            for slot, score in sorted(report.per_slot.items()):
                lines.append(
                    f"{count},{slot},{score.precision:.6f},{score.recall:.6f},{score.f1:.6f}"
                )
            micro = report.micro
            lines.append(f"{count},micro,{micro.precision:.6f},{micro.recall:.6f},{micro.f1:.6f}")
            lines.append(
                f"{count},macro,{report.macro_precision:.6f},{report.macro_recall:.6f},{report.macro_f1:.6f}"
            )
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "budgets": self.budgets,
            "aborted": self.aborted,
            "points": [
                {"action_count": count, "report": report.to_dict()} for count, report in self.points
            ],
        }


# -- in-context example sampling --

def _slot_of_answer(answer: str, doc_id: str, corpus: Corpus, theta: float) -> str | None:
    best_slot = None
    best = 0.0
    for slot in sorted(corpus.slot_inventory):
        golds = corpus.gold_answers(slot, doc_id) or corpus.gold_answers(slot)
        score = max((fuzzy_score(answer, g) for g in golds), default=0.0)
        if score > best:
            best, best_slot = score, slot
    if best_slot is not None and best >= theta:
        return best_slot
    return None


def _sample_per_slot(
    candidates: list[InContextExample], per_slot: int, seed: int
) -> list[InContextExample]:
    rng = random.Random(seed)
    by_slot: dict[str, list[InContextExample]] = {}
    for example in candidates:
        by_slot.setdefault(example.slot, []).append(example)
    out: list[InContextExample] = []
    for slot in sorted(by_slot):
        pool = sorted(by_slot[slot], key=lambda e: (e.doc_id, e.question))
        if len(pool) < per_slot:
            log.warning("slot %r has only %d in-context examples (wanted %d)", slot, len(pool), per_slot)
            out.extend(pool)
        else:
            out.extend(rng.sample(pool, per_slot))
    return out


def sample_incontext(
    train_corpus: Corpus,
    per_slot: int = 10,
    seed: int = 0,
    theta: float = 0.8,
) -> list[InContextExample]:
    """Generate questions over the train corpus and sample `per_slot` per slot
    among those whose answers match a gold fill; slots with fewer examples
    contribute everything they have (with a warning)."""
    from .pipeline import hint_gazetteer  # local import to avoid a cycle
    from .providers import BuiltinProviders, collect_mentions, generate_questions

    provider = BuiltinProviders()
    gazetteer = hint_gazetteer(train_corpus)
    candidates: list[InContextExample] = []
    for doc in train_corpus.documents:
        mentions = collect_mentions(doc, provider, gazetteer)
        questions, _skipped = generate_questions(doc, mentions, provider)
        for q in questions:
            slot = _slot_of_answer(q.answer_text, doc.id, train_corpus, theta)
            if slot is not None:
                candidates.append(
                    InContextExample(slot=slot, question=q.text, answer=q.answer_text, doc_id=doc.id)
                )
    return _sample_per_slot(candidates, per_slot, seed)


def incontext_from_session(session: SessionState, per_slot: int = 10) -> list[InContextExample]:
    """In-context examples drawn from the session's own questions (the
    scaled-down analogue of sampling a train split)."""
    candidates = []
    for q in session.questions.values():
        slot = _slot_of_answer(q.answer_text, q.doc_id, session.corpus, session.config.theta)
        if slot is not None:
            candidates.append(
                InContextExample(slot=slot, question=q.text, answer=q.answer_text, doc_id=q.doc_id)
            )
    return _sample_per_slot(candidates, per_slot, session.config.seed)


# -- prompt builders --

def _examples_block(examples: list[InContextExample]) -> str:
    if not examples:
        log.warning("building expert prompt with an empty examples block")
        return " (no examples)"
    lines = []
    by_slot: dict[str, list[InContextExample]] = {}
    for example in examples:
        by_slot.setdefault(example.slot, []).append(example)
    for slot in sorted(by_slot):
        lines.append(f'\nCluster "{slot}":')
        for example in by_slot[slot]:
            lines.append(f'  Q: {example.question} A: {example.answer}')
    return "\n".join(lines) + "\n"


def build_recluster_prompt(
    examples: list[InContextExample], question: str, slot_names: list[str]
) -> str:
    if not slot_names:
        raise ValueError("slot_names must be non-empty")
    return RECLUSTER_PROMPT_TEMPLATE.format(
        examples=_examples_block(examples),
        question=question,
        slot_names=", ".join(slot_names),
    )


def build_addq_prompt(context_passage: str, examples: list[InContextExample]) -> str:
    if not context_passage:
        raise ValueError("context passage must be non-empty")
    if examples:
        pairs = "\n" + "\n".join(f"  Q: {e.question} A: {e.answer}" for e in examples) + "\n"
    else:
        pairs = " (no examples)"
    return ADDQ_PROMPT_TEMPLATE.format(context=context_passage, examples=pairs)


# -- verdict parsing --

def _iter_balanced_objects(text: str):
    depth = 0
    start = None
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if depth > 0 and ch == '"':
            in_string = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}" and depth > 0:
            depth -= 1
            if depth == 0:
                yield text[start:i + 1]


def _first_json_object(response: str) -> dict:
    for candidate in _iter_balanced_objects(response):
        try:
            obj = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    raise NoJsonError(f"no JSON object found in response: {response[:80]!r}")


def parse_expert_json(response: str, allowed_slots: list[str]) -> ExpertVerdict:
    """Extract the first balanced JSON object and read the verdict: the first
    key matching an allowed slot (case-insensitive) wins; confidence defaults
    to 0.5 and is clamped into [0,1]."""
    obj = _first_json_object(response)
    canonical = {slot.lower(): slot for slot in allowed_slots}
    slot = None
    for key in obj:
        if isinstance(key, str) and key.lower() in canonical:
            slot = canonical[key.lower()]
            break
    if slot is None:
        raise NoSlotKeyError(
            f"JSON object has no key among allowed slots {sorted(allowed_slots)}"
        )
    confidence = 0.5
    raw_conf = obj.get("confidence")
    if isinstance(raw_conf, (int, float)):
        confidence = min(1.0, max(0.0, float(raw_conf)))
    return ExpertVerdict(slot=slot, confidence=confidence, raw_response=response)


def parse_qa_pairs(response: str) -> list[tuple[str, str]]:
    """Question->answer pairs from the first JSON object (addq expert)."""
    obj = _first_json_object(response)
    pairs = []
    for key, value in obj.items():
        if key == "confidence" or not isinstance(key, str) or not isinstance(value, str):
            continue
        question = key.strip()
        if not question.endswith("?"):
            question += "?"
        pairs.append((question, value.strip()))
    return pairs


# -- agents --

class Agent:
    """Synchronous prompt->text interface shared by scripted, fixture and
    live agents. `context` carries machine-readable details scripted agents
    use instead of parsing the prose prompt; wire agents ignore it."""

    name = "agent"

    def complete(self, prompt: str, context: dict | None = None) -> str:
        raise NotImplementedError


class ScriptedGoldAgent(Agent):
    """Always answers with the gold slot at confidence 1.0; proposes
    questions for every uncovered gold answer in the addq role."""

    name = "gold"

    def __init__(self, corpus: Corpus, theta: float = 0.8):
        self.corpus = corpus
        self.theta = theta

    def _gold_slot(self, answer: str, doc_id: str) -> str | None:
        return _slot_of_answer(answer, doc_id, self.corpus, theta=0.0)

    def complete(self, prompt: str, context: dict | None = None) -> str:
        context = context or {}
        if context.get("kind") == "addq":
            return self._complete_addq(context)
        answer = context.get("answer", "")
        doc_id = context.get("doc_id", "")
        slot = self._gold_slot(answer, doc_id)
        if slot is None:
            slots = context.get("allowed_slots") or sorted(self.corpus.slot_inventory)
            slot = slots[0]
        return json.dumps({slot: answer, "confidence": 1.0})

    def _complete_addq(self, context: dict) -> str:
        doc = self.corpus.document(context["doc_id"])
        covered = [c.lower() for c in context.get("covered_answers", [])]
        pairs: dict[str, str] = {}
        for fill in doc.gold_fills:
            for answer in fill.answers:
                if answer.lower() in covered:
                    continue
                idx = doc.text.lower().find(answer.lower())
                if idx < 0:
                    continue
                sent = doc.sentence_at(idx)
                if sent is None:
                    continue
                sentence = doc.text[sent[0]:sent[1]]
                question = build_question_text(
                    sentence, idx - sent[0], idx - sent[0] + len(answer), label="ENTITY"
                )
                pairs[question] = answer
        return json.dumps(pairs)


class RandomAgent(Agent):
    """Uniform random slot verdicts with random confidence; never adds."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def complete(self, prompt: str, context: dict | None = None) -> str:
        context = context or {}
        if context.get("kind") == "addq":
            return json.dumps({})
        slots = sorted(context.get("allowed_slots", []))
        if not slots:
            return json.dumps({})
        slot = self.rng.choice(slots)
        return json.dumps({slot: context.get("answer", ""), "confidence": round(self.rng.random(), 3)})


class NoisyGoldAgent(ScriptedGoldAgent):
    """Gold verdicts flipped to a random wrong slot with probability epsilon."""

    name = "noisy"

    def __init__(self, corpus: Corpus, epsilon: float = 0.2, seed: int = 0, theta: float = 0.8):
        super().__init__(corpus, theta)
        self.epsilon = epsilon
        self.rng = random.Random(seed)

    def complete(self, prompt: str, context: dict | None = None) -> str:
        context = context or {}
        if context.get("kind") != "addq" and self.rng.random() < self.epsilon:
            slots = sorted(context.get("allowed_slots") or self.corpus.slot_inventory)
            wrong = [s for s in slots if s != self._gold_slot(context.get("answer", ""), context.get("doc_id", ""))]
            if wrong:
                return json.dumps({self.rng.choice(wrong): context.get("answer", ""),
                                   "confidence": round(self.rng.random(), 3)})
        return super().complete(prompt, context)


class FixtureAgent(Agent):
    """Replays recorded {request:{prompt}, response:{text}} pairs."""

    name = "fixture"

    def __init__(self, path: str | Path):
        self._responses: dict[str, str] = {}
        for line in Path(path).read_text("utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            self._responses[record["request"]["prompt"]] = record["response"]["text"]

    def complete(self, prompt: str, context: dict | None = None) -> str:
        if prompt not in self._responses:
            raise AgentError("no recorded response for prompt")
        return self._responses[prompt]


class HttpAgent(Agent):
    name = "http"

    def __init__(self, endpoint: ProviderEndpoint):
        self.endpoint = endpoint

    def complete(self, prompt: str, context: dict | None = None) -> str:
        try:
            response = call_external(self.endpoint, {"prompt": prompt})
        except ProviderError as exc:
            raise AgentError(str(exc)) from exc
        if "text" not in response:
            raise AgentError("agent response missing 'text' field")
        return response["text"]


def make_agent(spec: dict, corpus: Corpus) -> Agent:
    kind = spec.get("kind", "gold")
    if kind == "gold":
        return ScriptedGoldAgent(corpus, theta=spec.get("theta", 0.8))
    if kind == "random":
        return RandomAgent(seed=int(spec.get("seed", 0)))
    if kind == "noisy":
        return NoisyGoldAgent(
            corpus, epsilon=float(spec.get("epsilon", 0.2)), seed=int(spec.get("seed", 0))
        )
    if kind == "fixture":
        return FixtureAgent(spec["path"])
    if kind == "http":
        return HttpAgent(ProviderEndpoint(
            url=spec["url"], timeout=float(spec.get("timeout", 10.0)),
            max_attempts=int(spec.get("max_attempts", 3)),
        ))
    raise ValueError(f"unknown agent kind {kind!r}")


# -- episode runner --

def _call_with_retries(agent: Agent, prompt: str, context: dict, allowed_slots: list[str],
                       retries: int = 2) -> ExpertVerdict:
    last: Exception | None = None
    for _ in range(retries + 1):
        try:
            response = agent.complete(prompt, context)
            return parse_expert_json(response, allowed_slots)
        except (AgentError, NoJsonError, NoSlotKeyError) as exc:
            last = exc
    raise AgentError(f"agent failed after {retries + 1} attempts: {last}")


def _cluster_for_slot(session: SessionState, slot: str) -> int | None:
    best = None
    best_score = -1.0
    for cid, mapped in session.mapping.cluster_to_slot.items():
        if mapped == slot and session.mapping.scores.get(cid, 0.0) > best_score:
            best, best_score = cid, session.mapping.scores.get(cid, 0.0)
    return best


def run_episode(
    session: SessionState,
    agent: Agent,
    budgets: list[int],
    policy: str = "recluster_only",
    rho: float = 0.5,
    per_slot: int = 10,
    retries: int = 2,
) -> Trajectory:
    """Drive the agent through the session's questions under a policy,
    recording the evaluation report at every action budget.

    recluster_only: ask the §-recluster expert for each question's slot,
    moving/promoting/demoting as verdicts dictate. recluster_plus_add: the
    same pass, then ask the add-questions expert for every document and append
    the proposed questions. Each applied operation costs one action.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if not budgets or budgets[0] != 0 or budgets != sorted(budgets):
        raise ValueError("budgets must be ascending and start at 0")

    trajectory = Trajectory(budgets=list(budgets))
    trajectory.points.append((0, session.report))
    max_budget = budgets[-1]
    pending = [b for b in budgets if b > 0]
    actions = 0
    slot_names = sorted(session.corpus.slot_inventory)
    examples = incontext_from_session(session, per_slot=per_slot)

    def record_after_action() -> None:
        while pending and actions >= pending[0]:
            trajectory.points.append((pending.pop(0), session.report))

    def spend(op) -> bool:
        nonlocal actions
        session.apply(op)
        actions += 1
        record_after_action()
        return actions >= max_budget

    try:
        done = actions >= max_budget
        for qid in sorted(session.questions):
            if done:
                break
            q = session.questions.get(qid)
            if q is None:
                continue
            prompt = build_recluster_prompt(examples, q.text, slot_names)
            context = {
                "kind": "recluster", "qid": qid, "doc_id": q.doc_id,
                "question": q.text, "answer": q.answer_text, "allowed_slots": slot_names,
            }
            verdict = _call_with_retries(agent, prompt, context, slot_names, retries)
            target = _cluster_for_slot(session, verdict.slot)
            if target is None:
                continue
            desired_rep = verdict.confidence >= rho
            if q.cluster_id != target:
                done = spend(MoveQuestion(qid=qid, to_cluster=target))
                q = session.questions[qid]
            if not done and q.representative != desired_rep:
                op = PromoteQuestion(qid=qid) if desired_rep else DemoteQuestion(qid=qid)
                done = spend(op)

        if policy == "recluster_plus_add" and not done:
            for doc in session.corpus.documents:
                if done:
                    break
                covered = [
                    q.answer_text for q in session.questions.values() if q.doc_id == doc.id
                ]
                prompt = build_addq_prompt(doc.text, examples)
                context = {"kind": "addq", "doc_id": doc.id, "covered_answers": covered}
                try:
                    response = agent.complete(prompt, context)
                    pairs = parse_qa_pairs(response)
                except (AgentError, NoJsonError):
                    continue
                for question_text, answer in pairs:
                    if done:
                        break
                    verdict_context = {
                        "kind": "recluster", "doc_id": doc.id, "question": question_text,
                        "answer": answer, "allowed_slots": slot_names,
                    }
                    verdict_prompt = build_recluster_prompt(examples, question_text, slot_names)
                    try:
                        verdict = _call_with_retries(agent, verdict_prompt, verdict_context, slot_names, retries)
                    except AgentError:
                        continue
                    target = _cluster_for_slot(session, verdict.slot)
                    try:
                        done = spend(AddQuestion(text=question_text, target_cluster=target))
                    except SlotforgeError:
                        continue
    except AgentError:
        trajectory.aborted = True

    while pending:
        trajectory.points.append((pending.pop(0), session.report))
    return trajectory
