import json
from pathlib import Path

import pytest

from slotforge import InductionConfig, load_corpus, run_induction

DATA_DIR = Path(__file__).parent / "data"

SYNTHETIC_SCALE = {"attributed": 10, "relieve": 10, "assessed": 10, "enrollment": 10}


@pytest.fixture(scope="session")
def synthetic_corpus():
    return load_corpus(DATA_DIR / "synthetic_corpus.jsonl")


@pytest.fixture()
def synthetic_config():
    return InductionConfig(k=4, seed=1, method="ai-only+bl+sc", scale=dict(SYNTHETIC_SCALE))


@pytest.fixture()
def synthetic_session(synthetic_corpus, synthetic_config):
    return run_induction(synthetic_corpus, synthetic_config)


@pytest.fixture(scope="session")
def scale_fixture_corpus():
    return load_corpus(DATA_DIR / "scale_fixture.jsonl")


@pytest.fixture(scope="session")
def scale_fixture_golden():
    return json.loads((DATA_DIR / "scale_fixture_golden.json").read_text("utf-8"))


def data_path(name: str) -> Path:
    return DATA_DIR / name
