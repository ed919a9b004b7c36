import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slotforge.errors import EmptyCorpusError
from slotforge.vectorize import (
    MASK,
    TfIdfModel,
    bleach,
    cosine,
    embed,
    embed_all,
    fit_tfidf,
    is_degenerate,
    tokenize,
)


class TestBleach:
    def test_paper_question(self):
        out = bleach("What drug is associated with myocardial ischemia?",
                     ["myocardial ischemia", "cocaine"])
        assert out == "what drug is associated with [MASK]?"

    def test_no_occurrences_lowercases(self):
        assert bleach("Nothing Matches Here", ["zzz"]) == "nothing matches here"

    def test_longest_first_single_mask(self):
        assert bleach("Heparin sodium dose?", ["heparin", "heparin sodium"]) == "[MASK] dose?"

    def test_whitespace_collapsed(self):
        assert bleach("a    b\tc", []) == "a b c"

    @given(
        st.text(alphabet="abcdefg h", min_size=1, max_size=40),
        st.lists(st.text(alphabet="abcdefg", min_size=1, max_size=6), max_size=4),
    )
    def test_no_surface_survives(self, text, surfaces):
        surfaces = [s for s in surfaces if s.lower() not in MASK.lower()]
        out = bleach(text, surfaces)
        for surface in surfaces:
            assert surface.lower() not in out.replace(MASK, "\x01")

    def test_mask_is_a_token(self):
        assert tokenize("what [MASK] does?") == ["what", "[mask]", "does"]


class TestFitTfIdf:
    def test_idf_single_question(self):
        model = fit_tfidf(["what [MASK] ?"])
        # df = N = 1 -> idf = 1 + ln(2/2) = 1
        assert model.idf("what") == pytest.approx(1.0)

    def test_idf_two_questions(self):
        model = fit_tfidf(["what drug helps ?", "what helps ?"])
        # df("drug") = 1, N = 2 -> idf = 1 + ln(3/2)
        assert model.idf("drug") == pytest.approx(1.4054651081081644)
        assert model.idf("drug") == pytest.approx(1 + math.log(3 / 2))

    def test_scale_multiplies_before_normalization(self):
        texts = ["increase dose now", "decrease dose now"]
        plain = fit_tfidf(texts)
        scaled = fit_tfidf(texts, scale={"increase": 10})
        v_plain = embed(plain, "increase dose")
        v_scaled = embed(scaled, "increase dose")
        i_inc = plain.vocabulary["increase"]
        i_dose = plain.vocabulary["dose"]
        # scaling multiplies the raw weight by 10, so the ratio between the
        # scaled token and an unscaled one grows by exactly 10x
        ratio_plain = v_plain[i_inc] / v_plain[i_dose]
        ratio_scaled = v_scaled[i_inc] / v_scaled[i_dose]
        assert ratio_scaled == pytest.approx(10 * ratio_plain)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            fit_tfidf([])

    def test_scale_factor_must_be_positive(self):
        with pytest.raises(ValueError):
            fit_tfidf(["a b"], scale={"a": 0})


class TestEmbed:
    def test_identical_text_identical_vector(self):
        model = fit_tfidf(["alpha beta", "beta gamma"])
        v1 = embed(model, "alpha beta")
        v2 = embed(model, "alpha beta")
        assert np.array_equal(v1, v2)

    def test_all_oov_is_degenerate_zero(self):
        model = fit_tfidf(["alpha beta"])
        v = embed(model, "zz qq")
        assert is_degenerate(v)
        assert not v.any()

    def test_derived_cosine_single_shared_token(self):
        # fixture: q1 = "alpha shared", q2 = "beta shared", fitted on both.
        # By hand: N=2, df(alpha)=df(beta)=1, df(shared)=2.
        model = fit_tfidf(["alpha shared", "beta shared"])
        idf_rare = 1 + math.log(3 / 2)   # alpha, beta
        idf_common = 1 + math.log(3 / 3)  # shared = 1.0
        # each vector has weights (idf_rare, idf_common) over its two tokens
        norm = math.hypot(idf_rare, idf_common)
        expected = (idf_common / norm) ** 2  # only the shared axis overlaps
        got = cosine(embed(model, "alpha shared"), embed(model, "beta shared"))
        assert got == pytest.approx(expected)
        assert got == pytest.approx(0.3360969272762574)

    def test_oov_tokens_ignored(self):
        model = fit_tfidf(["alpha beta"])
        assert np.array_equal(embed(model, "alpha beta zz"), embed(model, "alpha beta"))

    @given(st.lists(st.text(alphabet="abc d", min_size=1, max_size=15), min_size=1, max_size=6))
    def test_vectors_unit_norm_or_degenerate(self, texts):
        model = fit_tfidf(texts)
        for vector in embed_all(model, texts):
            norm = np.linalg.norm(vector)
            assert norm == pytest.approx(1.0, abs=1e-9) or is_degenerate(vector)


class TestModelSerialization:
    def test_round_trip(self):
        model = fit_tfidf(["a b c", "b c d"], scale={"b": 10})
        again = TfIdfModel.from_dict(model.to_dict())
        assert again.vocabulary == model.vocabulary
        assert np.array_equal(again.doc_freq, model.doc_freq)
        assert again.n_docs == model.n_docs
        assert again.scale == model.scale
        assert np.array_equal(embed(again, "a b"), embed(model, "a b"))
