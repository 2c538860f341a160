"""Export an SVG attention heatmap for one translated sentence.

Trains the same small model as demo 02, translates one sentence, and
writes `attention.svg` next to this script: rows are output words, columns
are source words, darker cells mean more attention.
"""

from pathlib import Path

from snmt.attention_viz import render_attention_svg
from snmt.checkpoint import LoadedModel
from snmt.corpus import build_vocab, encode_sentence, load_corpus
from snmt.decode import translate_text
from snmt.model import ModelConfig, init_params
from snmt.training import TrainConfig, train

here = Path(__file__).resolve().parent
corpus = load_corpus(here.parent / "fixtures" / "pairs.tsv")
src_vocab = build_vocab([p.source for p in corpus.pairs])
tgt_vocab = build_vocab([p.target for p in corpus.pairs])
data = [
    (encode_sentence(src_vocab, p.source), encode_sentence(tgt_vocab, p.target))
    for p in corpus.pairs
]

config = ModelConfig(src_vocab.size, tgt_vocab.size, embed_dim=64, hidden_dim=64)
params = init_params(config, seed=7)
train(params, config, data, data,
      TrainConfig(learning_rate=2e-3, batch_size=4, max_epochs=150,
                  patience=150, seed=7))

model = LoadedModel(config, params, src_vocab, tgt_vocab, meta={}, model_id="demo")
result = translate_text(model, "अन्तः आगन्तुं शक्नोमि ?")
out = here / "attention.svg"
out.write_text(render_attention_svg(result.attention), encoding="utf-8")
print(f"translation: {result.translation}")
print(f"wrote {out} "
      f"({len(result.attention.target_tokens)}x{len(result.attention.source_tokens)} grid)")
