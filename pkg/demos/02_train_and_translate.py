"""Train a small attention model on the bundled 32-pair corpus and
translate a few sentences, printing where the decoder attended.

Runs in well under a minute on one CPU core.
"""

from pathlib import Path

import numpy as np

from snmt.corpus import build_vocab, encode_sentence, load_corpus
from snmt.decode import greedy_decode_ids, translate_text
from snmt.checkpoint import LoadedModel
from snmt.model import ModelConfig, init_params
from snmt.training import TrainConfig, train

corpus = load_corpus(Path(__file__).resolve().parent.parent / "fixtures" / "pairs.tsv")
src_vocab = build_vocab([p.source for p in corpus.pairs])
tgt_vocab = build_vocab([p.target for p in corpus.pairs])
data = [
    (encode_sentence(src_vocab, p.source), encode_sentence(tgt_vocab, p.target))
    for p in corpus.pairs
]

config = ModelConfig(src_vocab.size, tgt_vocab.size, embed_dim=64, hidden_dim=64)
params = init_params(config, seed=7)
history = train(
    params, config, data, data,
    TrainConfig(learning_rate=2e-3, batch_size=4, max_epochs=150, patience=150, seed=7),
    log=lambda e, tr, vl: (e % 25 == 0) and print(f"epoch {e:3d}  loss {tr:.4f}"),
)
print(f"stopped after {len(history.train_loss)} epochs "
      f"({history.stop_reason}), final loss {history.train_loss[-1]:.4f}\n")

model = LoadedModel(config, params, src_vocab, tgt_vocab, meta={}, model_id="demo")
for text in ("अहं तर्तुं शक्नोमि", "अहं बहु व्यस्तः अस्मि", "अहं एकाकिनी अस्मि"):
    result = translate_text(model, text)
    print(f"source : {text}")
    print(f"output : {result.translation}")
    peak = np.argmax(result.attention.rows, axis=1)
    pairs = [
        f"{t}->{result.attention.source_tokens[j]}"
        for t, j in zip(result.attention.target_tokens, peak)
    ]
    print(f"peak attention per output word: {'  '.join(pairs)}\n")
