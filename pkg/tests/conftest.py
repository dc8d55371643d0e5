import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eblparse.resources import fixture, fixture_path  # noqa: E402
from eblparse.runtime import EblParser  # noqa: E402
from eblparse.train import build_index, extract_sequences, select_training  # noqa: E402


@pytest.fixture(scope="session")
def bundle():
    return fixture()


@pytest.fixture(scope="session")
def corpus_lines():
    return fixture_path("corpus.txt").read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def ranked(bundle, corpus_lines):
    return extract_sequences(corpus_lines, bundle.segmenter, bundle.tagger)


@pytest.fixture(scope="session")
def index(bundle, ranked):
    training = select_training(ranked, bundle.config.train_top)
    return build_index(training, bundle.grammar, bundle.tagset, bundle.lexicon, bundle.retention, bundle.config)


@pytest.fixture(scope="session")
def parser(bundle, index):
    return EblParser(index, bundle.tagset, bundle.lexicon, bundle.config, bundle.tagger)


@pytest.fixture
def seg(bundle):
    """Segment a one-segment string."""

    def make(text):
        (s,) = bundle.segmenter.segment(text)
        return s

    return make
