#!/usr/bin/env python3
"""Regenerate the committed synthetic corpus (tests/data/synthetic_corpus.jsonl).

12 documents x 4 slots. Each document carries one sentence per slot, each
sentence contains exactly one entity (the slot's gold answer), and each slot's
sentence templates share a distinctive trigger vocabulary, so the per-slot
question groups are lexically separable after question generation. The slot
trigger words double as the upweighting set for the +scale method.

Deterministic: fixed name tables, no RNG.
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "synthetic_corpus.jsonl"

# sentence templates per slot; {x} is the entity surface
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

SLOT_ORDER = ["Cause", "Treatment", "Assessment", "Timing"]

# trigger words a user (or the acceptance suite) upweights for the +sc method
SCALE_WORDS = ["attributed", "relieve", "assessed", "enrollment"]


def build_documents() -> list[dict]:
    documents = []
    for i in range(12):
        doc_id = f"doc{i + 1:02d}"
        parts: list[str] = []
        entities = []
        gold = []
        offset = 0
        for slot in SLOT_ORDER:
            template, label = TEMPLATES[slot][i % 2]
            answer = ANSWERS[slot][i]
            sentence = template.format(x=answer)
            start = offset + sentence.index(answer)
            entities.append({
                "surface": answer, "start": start, "end": start + len(answer), "label": label,
            })
            gold.append({"slot": slot, "answers": [answer]})
            parts.append(sentence)
            offset += len(sentence) + 1  # single joining space
        documents.append({
            "id": doc_id,
            "text": " ".join(parts),
            "gold": gold,
            "entities": entities,
        })
    return documents


def main() -> None:
    documents = build_documents()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8") as f:
        for record in documents:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {len(documents)} documents to {OUT}")


if __name__ == "__main__":
    main()
