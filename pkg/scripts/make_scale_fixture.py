#!/usr/bin/env python3
"""Regenerate the upweighting fixture (tests/data/scale_fixture*.json*).

Nine one-sentence documents produce nine questions that cluster (k=3) into:

  cluster A  three identical audit-committee questions
  cluster B  five tumor-growth questions ("increase" / "decrease" / 3x "alter")
  cluster C  one serum-insulin question containing "decrease"

Upweighting {increase, decrease} by 10 must split B in two (the increase
question plus the three neutral ones vs. the decrease question) and pull the
single C question into the decrease part - the small-scale analogue of the
"split one cluster, pull one question from another" behaviour the operation
exists for.

The script verifies both partitions against an exhaustive-partition optimum
before writing the corpus jsonl and the golden partition file; it refuses to
freeze a fixture whose k-means result is not the global optimum.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import numpy as np

from slotforge import InductionConfig, load_corpus, run_induction
from slotforge.session import UpweightWords

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"
CORPUS_PATH = DATA_DIR / "scale_fixture.jsonl"
GOLDEN_PATH = DATA_DIR / "scale_fixture_golden.json"

DOCS = [
    # (doc id, sentence template, pivot entity, label, gold slot)
    ("a1", "The committee reviewed {x} during the annual audit.", "velmora", "ENTITY", "ReviewedItem"),
    ("a2", "The committee reviewed {x} during the annual audit.", "wextrin", "ENTITY", "ReviewedItem"),
    ("a3", "The committee reviewed {x} during the annual audit.", "yolvane", "ENTITY", "ReviewedItem"),
    ("b1", "{x} did increase the steady tumor growth rate pace overnight.", "Relvex", "DRUG", "GrowthAgent"),
    ("b2", "{x} did decrease the steady tumor growth rate pace overnight.", "Mivradol", "DRUG", "GrowthAgent"),
    ("b3", "{x} did alter the steady tumor growth rate pace overnight.", "Tacrolin", "DRUG", "GrowthAgent"),
    ("b4", "{x} did alter the steady tumor growth rate pace overnight.", "Ubredil", "DRUG", "GrowthAgent"),
    ("b5", "{x} did alter the steady tumor growth rate pace overnight.", "Vexarin", "DRUG", "GrowthAgent"),
    ("c1", "{x} did decrease the serum insulin level overnight.", "Koratex", "DRUG", "InsulinAgent"),
]

UPWEIGHT_WORDS = ("increase", "decrease")
FACTOR = 10.0


def build_corpus_records() -> list[dict]:
    records = []
    for doc_id, template, x, label, slot in DOCS:
        text = template.format(x=x)
        start = text.index(x)
        records.append({
            "id": doc_id,
            "text": text,
            "gold": [{"slot": slot, "answers": [x]}],
            "entities": [{"surface": x, "start": start, "end": start + len(x), "label": label}],
        })
    return records


def partition_of(session) -> list[list[str]]:
    groups: dict[int, list[str]] = {}
    for qid, q in session.questions.items():
        groups.setdefault(q.cluster_id, []).append(qid)
    return [sorted(groups[cid]) for cid in sorted(groups)]


def exhaustive_optimum(vectors: np.ndarray, k: int) -> tuple[float, frozenset]:
    n = vectors.shape[0]
    best_cost = float("inf")
    best = None

    def cost_of(groups):
        total = 0.0
        for group in groups:
            block = vectors[list(group)]
            center = block.mean(axis=0)
            total += float(((block - center) ** 2).sum())
        return total

    labels = [0] * n

    def rec(i, used):
        nonlocal best_cost, best
        if i == n:
            groups: dict[int, list[int]] = {}
            for idx, lab in enumerate(labels):
                groups.setdefault(lab, []).append(idx)
            cost = cost_of(groups.values())
            if cost < best_cost - 1e-12:
                best_cost = cost
                best = frozenset(frozenset(g) for g in groups.values())
            return
        for lab in range(min(used + 1, k)):
            labels[i] = lab
            rec(i + 1, max(used, lab + 1))

    rec(0, 0)
    return best_cost, best


def check_against_oracle(session, stage: str) -> None:
    ids = list(session.questions)
    vectors = np.stack([session.questions[qid].embedding for qid in ids])
    best_cost, best = exhaustive_optimum(vectors, session.clusters.k)
    found = frozenset(
        frozenset(ids.index(qid) for qid in group) for group in partition_of(session)
    )
    if found != best:
        raise SystemExit(f"{stage}: k-means partition is not the exhaustive optimum")
    print(f"{stage}: partition matches exhaustive optimum (cost {best_cost:.6f})")


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    records = build_corpus_records()
    with CORPUS_PATH.open("w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")

    corpus = load_corpus(CORPUS_PATH)
    config = InductionConfig(k=3, seed=1, method="ai-only+bl+sc", scale={})
    session = run_induction(corpus, config)
    before = partition_of(session)
    check_against_oracle(session, "before upweight")

    session.apply(UpweightWords(words=UPWEIGHT_WORDS, factor=FACTOR))
    after = partition_of(session)
    check_against_oracle(session, "after upweight")

    texts = {qid: q.text for qid, q in session.questions.items()}
    golden = {
        "config": {"k": 3, "seed": 1, "method": "ai-only+bl+sc"},
        "upweight": {"words": list(UPWEIGHT_WORDS), "factor": FACTOR},
        "question_texts": texts,
        "before": before,
        "after": after,
    }
    GOLDEN_PATH.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n", "utf-8")
    print("before:", before)
    print("after: ", after)
    print(f"wrote {CORPUS_PATH} and {GOLDEN_PATH}")


if __name__ == "__main__":
    main()
