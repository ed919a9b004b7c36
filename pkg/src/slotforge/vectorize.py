"""Question bleaching and (scaled) TF-IDF embedding.

Bleaching replaces entity surfaces with a [MASK] placeholder so embeddings
capture the information *role* a question asks about rather than the specific
instance. The TF-IDF variant multiplies selected trigger tokens' weights by a
per-token factor (default 10) before L2 normalization, which is how user
upweighting feeds back into the geometry.

Conventions pinned here for reproducibility:
  tokens     lowercase [a-z0-9]+ runs, plus the literal [mask] token
  tf         raw in-question count
  idf        1 + ln((1 + N) / (1 + df))
  weight     tf * idf * scale(token), then L2 normalization
  degenerate all-zero vectors are left zero; norm == 0 marks them
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorpusError

MASK = "[MASK]"
_MASK_SENTINEL = "\x00"

_TOKEN_RE = re.compile(r"\[mask\]|[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def bleach(text: str, surfaces: list[str] | tuple[str, ...]) -> str:
    """Lowercase `text` and mask every occurrence of each surface.

    Longest surfaces are replaced first so nested mentions collapse to a
    single mask; repeated whitespace is collapsed afterwards.
    """
    out = text.lower()
    for surface in sorted(set(s for s in surfaces if s), key=lambda s: (-len(s), s)):
        pattern = re.compile(re.escape(surface.lower()))
        out = pattern.sub(_MASK_SENTINEL, out)
    out = re.sub(r"\s+", " ", out).strip()
    return out.replace(_MASK_SENTINEL, MASK)


@dataclass
class TfIdfModel:
    vocabulary: dict[str, int]
    doc_freq: np.ndarray          # per-token df over the fitted questions
    n_docs: int
    scale: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for token, factor in self.scale.items():
            if factor <= 0:
                raise ValueError(f"scale factor for {token!r} must be > 0")

    @property
    def dim(self) -> int:
        return len(self.vocabulary)

    def idf(self, token: str) -> float:
        idx = self.vocabulary.get(token)
        if idx is None:
            return 0.0
        return 1.0 + math.log((1 + self.n_docs) / (1 + float(self.doc_freq[idx])))

    def _idf_vector(self) -> np.ndarray:
        return 1.0 + np.log((1 + self.n_docs) / (1 + self.doc_freq.astype(float)))

    def _scale_vector(self) -> np.ndarray:
        out = np.ones(self.dim)
        for token, factor in self.scale.items():
            idx = self.vocabulary.get(token.lower())
            if idx is not None:
                out[idx] = factor
        return out

    def with_scale(self, scale: dict[str, float]) -> "TfIdfModel":
        return TfIdfModel(
            vocabulary=self.vocabulary, doc_freq=self.doc_freq, n_docs=self.n_docs,
            scale=dict(scale),
        )

    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocabulary,
            "doc_freq": self.doc_freq.tolist(),
            "n_docs": self.n_docs,
            "scale": self.scale,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TfIdfModel":
        return cls(
            vocabulary=dict(d["vocabulary"]),
            doc_freq=np.asarray(d["doc_freq"], dtype=float),
            n_docs=int(d["n_docs"]),
            scale={k: float(v) for k, v in d.get("scale", {}).items()},
        )


def fit_tfidf(bleached: list[str], scale: dict[str, float] | None = None) -> TfIdfModel:
    """Fit vocabulary and document frequencies over bleached question strings."""
    if not bleached:
        raise EmptyCorpusError("cannot fit TF-IDF over zero questions")
    vocabulary: dict[str, int] = {}
    df_counts: list[int] = []
    for text in bleached:
        seen = set()
        for token in tokenize(text):
            idx = vocabulary.get(token)
            if idx is None:
                idx = len(vocabulary)
                vocabulary[token] = idx
                df_counts.append(0)
            if token not in seen:
                df_counts[idx] += 1
                seen.add(token)
    return TfIdfModel(
        vocabulary=vocabulary,
        doc_freq=np.asarray(df_counts, dtype=float),
        n_docs=len(bleached),
        scale={k.lower(): float(v) for k, v in (scale or {}).items()},
    )


def embed(model: TfIdfModel, bleached: str) -> np.ndarray:
    """Embed one bleached question; out-of-vocabulary tokens are ignored.

    Returns a unit vector, or the zero vector (degenerate) when nothing is
    in-vocabulary.
    """
    vec = np.zeros(model.dim)
    for token in tokenize(bleached):
        idx = model.vocabulary.get(token)
        if idx is not None:
            vec[idx] += 1.0
    if not vec.any():
        return vec
    vec *= model._idf_vector()
    vec *= model._scale_vector()
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return np.zeros(model.dim)
    return vec / norm


def embed_all(model: TfIdfModel, bleached: list[str]) -> np.ndarray:
    if not bleached:
        return np.zeros((0, model.dim))
    return np.stack([embed(model, text) for text in bleached])


def is_degenerate(vector: np.ndarray) -> bool:
    return not bool(vector.any())


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
