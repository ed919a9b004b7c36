"""slotforge: interactive template induction from raw documents.

Generate factoid questions around salient entities, bleach and embed them,
cluster into candidate slots, map clusters to gold slot types, and refine the
result interactively (human or proxy agent) with an automatic
recluster/remap/re-evaluate feedback loop.
"""

from .config import InductionConfig, ProviderSpec
from .corpus import Corpus, Document, GoldFill, load_corpus, save_corpus, segment
from .pipeline import bootstrap_session, run_induction
from .session import SessionState, restore, snapshot

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "GoldFill",
    "InductionConfig",
    "ProviderSpec",
    "SessionState",
    "bootstrap_session",
    "load_corpus",
    "restore",
    "run_induction",
    "save_corpus",
    "segment",
    "snapshot",
    "__version__",
]
