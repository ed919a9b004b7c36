import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slotforge.corpus import (
    Corpus,
    Document,
    GoldFill,
    convert_triples,
    corpus_to_jsonl,
    load_corpus,
    save_corpus,
    segment,
)
from slotforge.errors import DuplicateIdError, FormatError, IoError


def write_jsonl(tmp_path, records, name="corpus.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", "utf-8")
    return path


class TestSegment:
    def test_two_sentences(self):
        assert segment("A b. C d?") == [(0, 4), (5, 9)]

    def test_empty(self):
        assert segment("") == []

    def test_no_terminal_punctuation(self):
        text = "No terminal punctuation"
        assert segment(text) == [(0, len(text))]

    def test_abbreviation_guard(self):
        text = "Dr. Smith arrived. He left."
        ranges = segment(text)
        assert ranges == [(0, 18), (19, 27)]

    def test_exclamation_and_question(self):
        assert segment("Stop! Why? Go.") == [(0, 5), (6, 10), (11, 14)]

    @given(st.text(max_size=200))
    def test_ranges_reconstruct_text(self, text):
        ranges = segment(text)
        prev_end = 0
        rebuilt = []
        for start, end in ranges:
            assert 0 <= start < end <= len(text)
            assert start >= prev_end
            rebuilt.append(text[prev_end:start])
            rebuilt.append(text[start:end])
            prev_end = end
        rebuilt.append(text[prev_end:])
        assert "".join(rebuilt) == text
        # every range is whitespace-trimmed and all non-ws content is covered
        for start, end in ranges:
            assert not text[start].isspace() and not text[end - 1].isspace()
        outside = text[: ranges[0][0]] if ranges else text
        assert outside.strip() == "" or ranges


class TestLoadCorpus:
    def test_single_record(self, tmp_path):
        path = write_jsonl(
            tmp_path,
            [{"id": "d1", "text": "Heparin treats thrombosis.",
              "gold": [{"slot": "Cause", "answers": ["thrombosis"]}]}],
        )
        corpus = load_corpus(path)
        assert len(corpus.documents) == 1
        assert corpus.slot_inventory == {"Cause"}
        assert corpus.documents[0].gold_fills[0].answers == ("thrombosis",)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", "utf-8")
        corpus = load_corpus(path)
        assert corpus.documents == ()
        assert corpus.slot_inventory == frozenset()

    def test_duplicate_id(self, tmp_path):
        record = {"id": "d1", "text": "x.", "gold": []}
        path = write_jsonl(tmp_path, [record, record])
        with pytest.raises(DuplicateIdError):
            load_corpus(path)

    def test_missing_path(self, tmp_path):
        with pytest.raises(IoError):
            load_corpus(tmp_path / "nope.jsonl")

    def test_malformed_record_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "d1", "text": "ok."}\nnot json\n', "utf-8")
        with pytest.raises(FormatError) as err:
            load_corpus(path)
        assert err.value.line == 2

    def test_range_answers_normalized_to_strings(self, tmp_path):
        text = "Signed on January 5, 2020 in Boston."
        start = text.find("January")
        path = write_jsonl(
            tmp_path,
            [{"id": "d1", "text": text,
              "gold": [{"slot": "Agreement", "answers": [[start, start + len("January 5, 2020")]]}]}],
        )
        corpus = load_corpus(path)
        assert corpus.documents[0].gold_fills[0].answers == ("January 5, 2020",)

    def test_declared_entities_must_match_slice(self, tmp_path):
        path = write_jsonl(
            tmp_path,
            [{"id": "d1", "text": "Heparin works.", "gold": [],
              "entities": [{"surface": "nope", "start": 0, "end": 4}]}],
        )
        with pytest.raises(FormatError):
            load_corpus(path)

    def test_round_trip(self, tmp_path):
        path = write_jsonl(
            tmp_path,
            [
                {"id": "d1", "text": "Heparin treats thrombosis. It works.",
                 "gold": [{"slot": "Cause", "answers": ["thrombosis"]}],
                 "entities": [{"surface": "Heparin", "start": 0, "end": 7, "label": "DRUG"}]},
                {"id": "d2", "text": "Nothing here.", "gold": []},
            ],
        )
        corpus = load_corpus(path)
        out = tmp_path / "again.jsonl"
        save_corpus(corpus, out)
        assert load_corpus(out) == corpus


class TestConvertTriples:
    def test_paper_sentence(self):
        text = "Heparin, first used to prevent the clotting of blood in vitro, has been clinically used to treat thrombosis for more than 50 years."
        corpus, skipped = convert_triples([("heparin", "Cause", "thrombosis", text)])
        assert skipped == 0
        assert len(corpus.documents) == 1
        doc = corpus.documents[0]
        assert doc.gold_fills == (GoldFill(slot="Cause", answers=("thrombosis",)),)
        assert doc.entity_hints[0].surface == "Heparin"
        assert corpus.slot_inventory == {"Cause"}

    def test_missing_object_skipped(self):
        corpus, skipped = convert_triples(
            [("heparin", "Cause", "aspirin", "Heparin treats thrombosis.")]
        )
        assert skipped == 1
        assert corpus.documents == ()

    def test_same_text_two_relations(self):
        text = "Heparin treats thrombosis."
        corpus, skipped = convert_triples(
            [
                ("heparin", "Cause", "thrombosis", text),
                ("heparin", "Treats", "thrombosis", text),
            ]
        )
        assert skipped == 0
        # hand-built expectation: one document carrying both fills
        assert len(corpus.documents) == 1
        doc = corpus.documents[0]
        assert doc.gold_fills == (
            GoldFill(slot="Cause", answers=("thrombosis",)),
            GoldFill(slot="Treats", answers=("thrombosis",)),
        )
        assert corpus.slot_inventory == {"Cause", "Treats"}

    def test_answers_are_substrings(self):
        records = [
            ("a", "R1", "beta", "alpha beta gamma."),
            ("alpha", "R2", "gamma", "alpha beta gamma."),
            ("x", "R3", "zz", "xx yy zz."),
        ]
        corpus, skipped = convert_triples(records)
        assert skipped == 0
        assert len(corpus.documents) <= 2  # <= number of distinct texts
        for doc in corpus.documents:
            for fill in doc.gold_fills:
                for answer in fill.answers:
                    assert answer.lower() in doc.text.lower()

    def test_triples_via_load_corpus(self, tmp_path):
        path = tmp_path / "triples.jsonl"
        path.write_text(
            json.dumps({"subject": "heparin", "relation": "Cause",
                        "object": "thrombosis", "text": "Heparin treats thrombosis."}) + "\n",
            "utf-8",
        )
        corpus = load_corpus(path, "triples")
        assert corpus.slot_inventory == {"Cause"}


class TestInvariants:
    def test_slot_inventory_is_union(self):
        doc1 = Document(id="a", text="x y.", sentences=tuple(segment("x y.")),
                        gold_fills=(GoldFill("S1", ("x",)),))
        doc2 = Document(id="b", text="z w.", sentences=tuple(segment("z w.")),
                        gold_fills=(GoldFill("S2", ("z",)), GoldFill("S1", ("w",))))
        corpus = Corpus.from_documents([doc1, doc2])
        assert corpus.slot_inventory == {"S1", "S2"}

    def test_jsonl_serialization_is_stable(self):
        doc = Document(id="a", text="x y.", sentences=tuple(segment("x y.")),
                       gold_fills=(GoldFill("S1", ("x",)),))
        corpus = Corpus.from_documents([doc])
        assert corpus_to_jsonl(corpus) == corpus_to_jsonl(corpus)
