import sys
from pathlib import Path

import pytest

from fngrammar.applications import data_path, demo_bundle
from fngrammar.codegen import load_lexicon
from fngrammar.corpus_model import load_corpus, load_frames

TESTS = Path(__file__).parent
sys.path.insert(0, str(TESTS))

GOLDEN = TESTS / "golden"
DATA = TESTS / "data"


@pytest.fixture(scope="session")
def frames():
    return load_frames(data_path("frames.jsonl"))


@pytest.fixture(scope="session")
def corpus_en(frames):
    return load_corpus(data_path("sample_en.jsonl"), frames)


@pytest.fixture(scope="session")
def corpus_sv(frames):
    return load_corpus(data_path("sample_sv.jsonl"), frames)


@pytest.fixture(scope="session")
def probe_corpus(frames):
    return load_corpus(data_path("coverage_probe_en.jsonl"), frames)


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(data_path("lexicon_en.jsonl")) + load_lexicon(data_path("lexicon_sv.jsonl"))


@pytest.fixture(scope="session")
def bundle():
    return demo_bundle()


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")
