#!/usr/bin/env python3
"""Regenerate the proxy-episode fixtures (tests/data/proxy_*.json*).

Builds a 12-document corpus in the synthetic-corpus style plus:

* proxy_corpus.jsonl     the documents (three of them carry a companion
                         entity inside the withheld answer's sentence, so the
                         add-questions flow can find the document by the
                         companion and read off the withheld answer)
* proxy_fixture.json     48 question specs, the gold cluster assignment, a
                         scramble with 8 deliberate misplacements, and the
                         3 withheld question ids for the add-questions variant

The script replays both acceptance scenarios before writing anything:
gold-agent recluster episodes must reach per-slot F1 = 1.0 within 8 actions,
and recluster+add must beat recluster-only when 3 questions are withheld.
"""

from __future__ import annotations

import json
from pathlib import Path

from slotforge import InductionConfig, load_corpus
from slotforge.pipeline import bootstrap_session
from slotforge.providers import build_question_text
from slotforge.proxy import ScriptedGoldAgent, run_episode

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"
CORPUS_PATH = DATA_DIR / "proxy_corpus.jsonl"
FIXTURE_PATH = DATA_DIR / "proxy_fixture.json"

SLOT_ORDER = ["Cause", "Treatment", "Assessment", "Timing"]
SCALE = {"attributed": 10, "relieve": 10, "assessed": 10, "enrollment": 10}

TEMPLATES = {
    "Cause": [
        ("Investigators attributed the sudden outbreak to {x}.", "CHEMICAL"),
        ("The sudden outbreak was attributed to {x} by investigators.", "CHEMICAL"),
    ],
    "Treatment": [
        ("Clinicians administered {x} to relieve the painful symptoms.", "DRUG"),
        ("{x} was administered to relieve the painful symptoms.", "DRUG"),
    ],
    "Assessment": [
        ("Participants were assessed with {x} during the trial.", "TASK"),
        ("The trial assessed every participant with {x}.", "TASK"),
    ],
    "Timing": [
        ("Enrollment for the cohort began on {x}.", "DATE"),
        ("The cohort enrollment was scheduled on {x}.", "DATE"),
    ],
}

ANSWERS = {
    "Cause": [
        "zanathex", "morvalin", "picronol", "seltrazine", "quenodril", "varnatol",
        "xylotoxin", "bremalide", "cortizane", "dynaphrene", "ergomycin", "fluxatol",
    ],
    "Treatment": [
        "heparol", "travexin", "mendolac", "ubrantine", "wilfoparin", "zentramab",
        "aplostat", "bevradine", "cilotraze", "dorvicaine", "elupristin", "favomycin",
    ],
    "Assessment": [
        "brontek", "cardexa", "lumitron", "neuroquiz", "optiscan", "psychogram",
        "reflexon", "somnotest", "tactigrid", "vergil", "workmeter", "yarrowscale",
    ],
    "Timing": [
        "January 5, 2020", "February 9, 2020", "March 3, 2021", "April 14, 2021",
        "May 2, 2022", "June 18, 2022", "July 7, 2023", "August 23, 2023",
        "September 1, 2024", "October 30, 2024", "November 11, 2025", "December 12, 2025",
    ],
}

# withheld (doc index, slot) -> companion-carrying sentence template
WITHHELD_SENTENCES = {
    (9, "Cause"): "Investigators attributed the sudden outbreak to {x} during the {companion} review.",
    (10, "Treatment"): "Clinicians administered {x} to relieve the painful symptoms before the {companion} review.",
    (11, "Assessment"): "Participants were assessed with {x} during the {companion} trial.",
}

COMPANIONS = {
    (9, "Cause"): ("vergil", "TASK"),          # doc10's assessment answer
    (10, "Treatment"): ("workmeter", "TASK"),  # doc11's assessment answer
    (11, "Assessment"): ("favomycin", "DRUG"), # doc12's treatment answer
}


def build_corpus_records() -> list[dict]:
    records = []
    for i in range(12):
        doc_id = f"doc{i + 1:02d}"
        parts, entities, gold = [], [], []
        offset = 0
        for slot in SLOT_ORDER:
            answer = ANSWERS[slot][i]
            label = TEMPLATES[slot][i % 2][1]
            if (i, slot) in WITHHELD_SENTENCES:
                companion, companion_label = COMPANIONS[(i, slot)]
                sentence = WITHHELD_SENTENCES[(i, slot)].format(x=answer, companion=companion)
                c_start = offset + sentence.index(companion)
                entities.append({"surface": companion, "start": c_start,
                                 "end": c_start + len(companion), "label": companion_label})
            else:
                sentence = TEMPLATES[slot][i % 2][0].format(x=answer)
            start = offset + sentence.index(answer)
            entities.append({"surface": answer, "start": start,
                             "end": start + len(answer), "label": label})
            gold.append({"slot": slot, "answers": [answer]})
            parts.append(sentence)
            offset += len(sentence) + 1
        entities.sort(key=lambda e: e["start"])
        records.append({"id": doc_id, "text": " ".join(parts), "gold": gold, "entities": entities})
    return records


def build_question_specs(corpus) -> tuple[list[dict], dict[str, int], list[str]]:
    """One question per gold answer, built with the template generator over
    the answer's own sentence. Returns (specs, gold assignment, withheld ids)."""
    specs: list[dict] = []
    gold_assignment: dict[str, int] = {}
    withheld: list[str] = []
    serial = 0
    for i, doc in enumerate(corpus.documents):
        for slot_idx, slot in enumerate(SLOT_ORDER):
            answer = ANSWERS[slot][i]
            serial += 1
            qid = f"q{serial:06d}"
            # the answer's own sentence is the slot's position in the doc
            # (companion entities may repeat a surface in earlier sentences)
            sent = doc.sentences[slot_idx]
            idx = doc.text.index(answer, sent[0])
            assert idx < sent[1], f"{answer!r} not inside its own sentence in {doc.id}"
            sentence = doc.text[sent[0]:sent[1]]
            label = TEMPLATES[slot][i % 2][1]
            text = build_question_text(sentence, idx - sent[0], idx - sent[0] + len(answer), label)
            specs.append({"id": qid, "doc_id": doc.id, "text": text, "answer_text": answer,
                          "label": label})
            gold_assignment[qid] = slot_idx
            if (i, slot) in WITHHELD_SENTENCES:
                withheld.append(qid)
    return specs, gold_assignment, withheld


def scramble(gold_assignment: dict[str, int], qids: list[str], k: int) -> dict[str, int]:
    out = dict(gold_assignment)
    for qid in qids:
        out[qid] = (out[qid] + 1) % k
    return out


def pick_misplaced(gold_assignment: dict[str, int], per_cluster: int, exclude: set[str]) -> list[str]:
    picked: list[str] = []
    for cluster in range(4):
        members = sorted(q for q, c in gold_assignment.items() if c == cluster and q not in exclude)
        picked.extend(members[:per_cluster])
    return picked


def verify(corpus, specs, gold_assignment, misplaced_8, withheld, misplaced_4) -> None:
    config = lambda: InductionConfig(k=4, seed=1, method="ai-only+bl+sc", scale=dict(SCALE))

    # scenario 1: 8 misplacements, recluster-only, per-slot F1 1.0 within 8 actions
    assignment = scramble(gold_assignment, misplaced_8, 4)
    session = bootstrap_session(corpus, specs, config(), assignment=assignment)
    start_f1 = session.report.micro.f1
    if start_f1 >= 1.0:
        raise SystemExit("scenario 1: scrambled session already perfect; fixture is vacuous")
    agent = ScriptedGoldAgent(corpus)
    trajectory = run_episode(session, agent, budgets=[0, 5, 10, 15, 20], policy="recluster_only")
    curve = trajectory.micro_f1_curve()
    if any(b - a > 1e-12 for (_, a), (_, b) in zip(curve[1:], curve)):
        raise SystemExit(f"scenario 1: micro-F1 curve decreases: {curve}")
    final = trajectory.points[-1][1]
    if session.action_count > 8:
        raise SystemExit(f"scenario 1: took {session.action_count} actions (> 8)")
    for slot, score in final.per_slot.items():
        if abs(score.f1 - 1.0) > 1e-12:
            raise SystemExit(f"scenario 1: slot {slot} final F1 {score.f1} != 1.0")
    print(f"scenario 1 ok: {session.action_count} actions, curve {[(c, round(f, 3)) for c, f in curve]}")

    # scenario 2: withhold 3 questions; recluster+add must beat recluster-only
    live_specs = [s for s in specs if s["id"] not in withheld]
    assignment2 = {qid: cid for qid, cid in scramble(gold_assignment, misplaced_4, 4).items()
                   if qid not in withheld}
    only = bootstrap_session(corpus, live_specs, config(), assignment=assignment2)
    t_only = run_episode(only, ScriptedGoldAgent(corpus), [0, 5, 10, 15, 20], "recluster_only")
    plus = bootstrap_session(corpus, live_specs, config(), assignment=assignment2)
    t_plus = run_episode(plus, ScriptedGoldAgent(corpus), [0, 5, 10, 15, 20], "recluster_plus_add")
    f_only = t_only.points[-1][1].micro.f1
    f_plus = t_plus.points[-1][1].micro.f1
    if not f_plus > f_only:
        raise SystemExit(f"scenario 2: add policy ({f_plus}) does not beat recluster-only ({f_only})")
    if abs(f_plus - 1.0) > 1e-12:
        raise SystemExit(f"scenario 2: add policy final micro-F1 {f_plus} != 1.0")
    print(f"scenario 2 ok: recluster_only {f_only:.3f} < recluster_plus_add {f_plus:.3f}")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    records = build_corpus_records()
    with CORPUS_PATH.open("w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")

    corpus = load_corpus(CORPUS_PATH)
    specs, gold_assignment, withheld = build_question_specs(corpus)
    misplaced_8 = pick_misplaced(gold_assignment, per_cluster=2, exclude=set(withheld))
    misplaced_4 = pick_misplaced(gold_assignment, per_cluster=1, exclude=set(withheld))

    verify(corpus, specs, gold_assignment, misplaced_8, withheld, misplaced_4)

    fixture = {
        "config": {"k": 4, "seed": 1, "method": "ai-only+bl+sc", "scale": SCALE},
        "question_specs": specs,
        "gold_assignment": gold_assignment,
        "misplaced_8": misplaced_8,
        "misplaced_4": misplaced_4,
        "withheld": withheld,
    }
    FIXTURE_PATH.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {CORPUS_PATH} and {FIXTURE_PATH}")


if __name__ == "__main__":
    main()
