#!/usr/bin/env python3
"""Regenerate the committed expert-prompt golden files.

The inputs are fixed; the outputs pin the byte-exact prompt text so template
drift fails loudly in tests.
"""

from __future__ import annotations

from pathlib import Path

from slotforge.proxy import InContextExample, build_addq_prompt, build_recluster_prompt

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"

BIO_SLOTS = ["Cause", "Downregulator", "Interacts with", "Regulator", "Upregulator"]

RECLUSTER_EXAMPLES = [
    InContextExample(slot="Cause", question="what drug is associated with myocardial ischemia?",
                     answer="cocaine", doc_id="bio01"),
    InContextExample(slot="Cause", question="what can be caused by coronary vasospasm?",
                     answer="myocardial ischemia", doc_id="bio02"),
    InContextExample(slot="Upregulator",
                     question="what is one drug that has been shown to increase the cmax and auc of midazolam?",
                     answer="ketoconazole", doc_id="bio03"),
    InContextExample(slot="Downregulator", question="what was used to decrease the mrna levels of rank?",
                     answer="denosumab", doc_id="bio04"),
]

RECLUSTER_QUESTION = "What does pilocarpine cause in rats?"

ADDQ_CONTEXT = (
    "heparin, first used to prevent the clotting of blood in vitro, has been clinically "
    "used to treat thrombosis for more than 50 years."
)

ADDQ_EXAMPLES = [
    InContextExample(slot="Cause", question="what is heparin used to treat for more than 50 years?",
                     answer="thrombosis", doc_id="bio05"),
    InContextExample(slot="Cause", question="what type of brain damage is induced by pilocarpine?",
                     answer="seizure", doc_id="bio06"),
    InContextExample(slot="Regulator", question="what suppressed egf-mediated protein levels of c-jun and c-fos?",
                     answer="quercetin", doc_id="bio07"),
]


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    recluster = build_recluster_prompt(RECLUSTER_EXAMPLES, RECLUSTER_QUESTION, BIO_SLOTS)
    addq = build_addq_prompt(ADDQ_CONTEXT, ADDQ_EXAMPLES)
    (DATA_DIR / "recluster_prompt.golden.txt").write_text(recluster, "utf-8")
    (DATA_DIR / "addq_prompt.golden.txt").write_text(addq, "utf-8")
    print(recluster)
    print("---")
    print(addq)


if __name__ == "__main__":
    main()
