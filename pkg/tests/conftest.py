import pathlib

import pytest

from handsdown.decode import DecoderRegistry, LexiconIndex, NgramDecoder, BayesianDecoder, SpatialModel
from handsdown.layout import default_layout
from handsdown.lexicon import default_lexicon, train_char_ngram

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src/handsdown/data/fixtures"


@pytest.fixture(scope="session")
def layout():
    return default_layout()


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def lm(lexicon):
    return train_char_ngram(lexicon)


@pytest.fixture(scope="session")
def index(lexicon, lm):
    return LexiconIndex(lexicon, lm)


@pytest.fixture(scope="session")
def registry(index, layout):
    reg = DecoderRegistry()
    reg.register(NgramDecoder(index))
    reg.register(BayesianDecoder(index, SpatialModel(layout)))
    return reg


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
