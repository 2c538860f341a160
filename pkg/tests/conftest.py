from pathlib import Path

import pytest

from snmt import corpus as C
from snmt.checkpoint import load_checkpoint, save_checkpoint
from snmt.model import ModelConfig, init_params
from snmt.training import TrainConfig, train

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PAIRS_TSV = FIXTURES / "pairs.tsv"

# The seven pairs reported by the reference system, kept in fixture order.
SAMPLE_PAIRS = [
    ("अन्तः आगन्तुं शक्नोमि ?", "अंदर आ सकता हूँ क्या ?"),
    ("अहं तर्तुं शक्नोमि", "मैं तैर सकता हूँ"),
    ("अहं एकाकिनी अस्मि", "मैं अकेली हूँ"),
    ("पितरौ स्वस्य बालकस्य कृते दायित्ववाहकौ स्तः",
     "मातापिता अपने बच्चों की हिफाजत के लिए ज़िम्मेदार होते हैं"),
    ("जापानदेशः विश्वस्य देशेषु एकः अर्थतंत्रः देशः अस्ति",
     "जापान दुनिया के सबसे ताकतशाली अर्थतंत्रों में से एक है"),
    ("प्रवेशात् पूर्व पादका त्याज्या",
     "अपने हाथ में मरना उसके बाहर जाने की कोशिश करो"),
    ("अहं बहु व्यस्तः अस्मि", "मैं बहुत व्यस्त हूँ"),
]


@pytest.fixture(scope="session")
def fixture_corpus():
    return C.load_corpus(PAIRS_TSV)


@pytest.fixture(scope="session")
def fixture_vocabs(fixture_corpus):
    src = C.build_vocab([p.source for p in fixture_corpus.pairs])
    tgt = C.build_vocab([p.target for p in fixture_corpus.pairs])
    return src, tgt


@pytest.fixture(scope="session")
def fixture_data(fixture_corpus, fixture_vocabs):
    src_vocab, tgt_vocab = fixture_vocabs
    return [
        (C.encode_sentence(src_vocab, p.source), C.encode_sentence(tgt_vocab, p.target))
        for p in fixture_corpus.pairs
    ]


@pytest.fixture(scope="session")
def overfit_checkpoint(tmp_path_factory, fixture_data, fixture_vocabs):
    """Model memorizing the 32-pair fixture corpus (embed 64, hidden 64, seed 7)."""
    import time

    src_vocab, tgt_vocab = fixture_vocabs
    mcfg = ModelConfig(src_vocab.size, tgt_vocab.size, embed_dim=64, hidden_dim=64)
    tcfg = TrainConfig(learning_rate=2e-3, batch_size=4, max_epochs=300,
                       patience=300, seed=7)
    params = init_params(mcfg, seed=7)
    t0 = time.monotonic()
    history = train(params, mcfg, fixture_data, fixture_data, tcfg)
    elapsed = time.monotonic() - t0
    path = tmp_path_factory.mktemp("overfit") / "model.snmt"
    save_checkpoint(path, mcfg, params, src_vocab, tgt_vocab, history.summary())
    return path, history, elapsed


@pytest.fixture(scope="session")
def overfit_model(overfit_checkpoint):
    path, _, _ = overfit_checkpoint
    return load_checkpoint(path)
