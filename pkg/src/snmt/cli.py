"""Command-line entry points: training, translation, evaluation, serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .attention_viz import render_attention_svg
from .checkpoint import load_checkpoint, save_checkpoint
from .decode import translate_text
from .evaluation import corpus_bleu, human_eval_accuracy, load_human_eval_records
from .model import ModelConfig, init_params
from .training import TrainConfig, train

CHECKPOINT_NAME = "model.snmt"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _model_path(path: str) -> Path:
    p = Path(path)
    return p / CHECKPOINT_NAME if p.is_dir() else p


def _apply_config_file(args: argparse.Namespace):
    if getattr(args, "config", None):
        overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise UsageError(f"unknown config key {key!r}")
            setattr(args, attr, value)


def build_parser() -> _Parser:
    parser = _Parser(prog="snmt", description="Sanskrit-to-Hindi neural translation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model on a parallel corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="JSON file mirroring the flags")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--embed-dim", type=int, default=128)
    p.add_argument("--hidden-dim", type=int, default=128)
    p.add_argument("--cell", choices=["lstm", "gru"], default="lstm")
    p.add_argument("--bidirectional", action="store_true")
    p.add_argument("--no-attention", action="store_true")
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--clip-norm", type=float, default=5.0)
    p.add_argument("--val-fraction", type=float, default=0.1,
                   help="0 validates on the training set (overfit runs)")
    p.add_argument("--max-decode-len", type=int, default=50)
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("translate", help="translate one sentence")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--max-len", type=int)
    p.add_argument("--attn-svg", help="write the attention heatmap here")

    p = sub.add_parser("evaluate", help="aggregate human evaluation records")
    p.add_argument("--records", required=True)
    p.add_argument("--threshold", type=int, default=3, choices=[2, 3, 4])

    p = sub.add_parser("bleu", help="corpus BLEU between two sentence files")
    p.add_argument("--candidates", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--sentence-level", action="store_true",
                   help="also report smoothed per-sentence average")

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("--corpus", required=True)

    p = sub.add_parser("serve", help="run the HTTP translation service")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7860)
    p.add_argument("--static-dir", help="directory with the web UI build")

    p = sub.add_parser("attn-plot", help="export an attention heatmap SVG")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int)
    return parser


def _cmd_train(args) -> int:
    _apply_config_file(args)
    corpus = corpus_mod.load_corpus(args.corpus)
    for line_no, why in corpus.malformed:
        print(f"warning: skipped malformed line {line_no}: {why}", file=sys.stderr)

    src_vocab = corpus_mod.build_vocab([p.source for p in corpus.pairs], args.min_count)
    tgt_vocab = corpus_mod.build_vocab([p.target for p in corpus.pairs], args.min_count)
    data = [
        (corpus_mod.encode_sentence(src_vocab, p.source),
         corpus_mod.encode_sentence(tgt_vocab, p.target))
        for p in corpus.pairs
    ]
    if args.val_fraction > 0:
        rng = np.random.default_rng(args.seed)
        order = rng.permutation(len(data))
        n_val = max(1, int(round(args.val_fraction * len(data))))
        val_data = [data[i] for i in order[:n_val]]
        train_data = [data[i] for i in order[n_val:]]
    else:
        train_data = val_data = data

    mcfg = ModelConfig(
        source_vocab_size=src_vocab.size,
        target_vocab_size=tgt_vocab.size,
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        cell_type=args.cell,
        bidirectional_encoder=args.bidirectional,
        attention_enabled=not args.no_attention,
        max_decode_len=args.max_decode_len,
    )
    tcfg = TrainConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
        patience=args.patience,
        clip_norm=args.clip_norm,
        seed=args.seed,
    )
    params = init_params(mcfg, seed=args.seed)
    log = None if args.quiet else (
        lambda e, tr, vl: print(f"epoch {e:4d}  train {tr:.4f}  val {vl:.4f}")
    )
    history = train(params, mcfg, train_data, val_data, tcfg, log=log)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_id = save_checkpoint(
        out_dir / CHECKPOINT_NAME, mcfg, params, src_vocab, tgt_vocab,
        history.summary(),
    )
    (out_dir / "history.json").write_text(
        json.dumps(history.to_dict(), indent=2), encoding="utf-8"
    )
    print(f"saved {out_dir / CHECKPOINT_NAME} (model {model_id}, "
          f"stop: {history.stop_reason})")
    return 0


def _cmd_translate(args) -> int:
    model = load_checkpoint(_model_path(args.model))
    result = translate_text(model, args.text, args.max_len)
    print(result.translation)
    if result.unknown_source_tokens:
        print(f"note: unknown source tokens: "
              f"{' '.join(result.unknown_source_tokens)}", file=sys.stderr)
    if result.truncated:
        print("note: output truncated at the length limit", file=sys.stderr)
    if args.attn_svg:
        if result.attention is None:
            print("note: attention disabled in this model, no plot written",
                  file=sys.stderr)
        else:
            Path(args.attn_svg).write_text(
                render_attention_svg(result.attention), encoding="utf-8"
            )
    return 0


def _cmd_evaluate(args) -> int:
    records = load_human_eval_records(args.records)
    accuracy, histogram = human_eval_accuracy(records, args.threshold)
    print(f"records: {len(records)}")
    for score in (4, 3, 2, 1):
        print(f"score {score}: {histogram[score]}")
    print(f"accuracy (score >= {args.threshold}): {accuracy:.4f}")
    return 0


def _read_sentences(path) -> list[list[str]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [
        corpus_mod.tokenize(corpus_mod.normalize_text(line))
        for line in lines if line.strip()
    ]


def _cmd_bleu(args) -> int:
    candidates = _read_sentences(args.candidates)
    references = _read_sentences(args.references)
    report = corpus_bleu(candidates, references)
    print(f"BLEU score: {report.score:.4f}")
    for n, p in enumerate(report.precisions, start=1):
        print(f"p_{n}: {p:.4f}")
    print(f"brevity penalty: {report.brevity_penalty:.4f}")
    if args.sentence_level:
        from .evaluation import sentence_bleu
        scores = [sentence_bleu(c, r) for c, r in zip(candidates, references)]
        print(f"mean sentence BLEU (smoothed): {float(np.mean(scores)):.4f}")
    return 0


def _cmd_stats(args) -> int:
    corpus = corpus_mod.load_corpus(args.corpus)
    samples, src_tokens, tgt_tokens = corpus_mod.corpus_stats(corpus)
    print(f"samples: {samples}")
    print(f"source tokens: {src_tokens}")
    print(f"target tokens: {tgt_tokens}")
    for line_no, why in corpus.malformed:
        print(f"malformed line {line_no}: {why}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model = load_checkpoint(_model_path(args.model))
    app = create_app(model, static_dir=args.static_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_attn_plot(args) -> int:
    model = load_checkpoint(_model_path(args.model))
    result = translate_text(model, args.text, args.max_len)
    if result.attention is None:
        print("error: model was trained without attention", file=sys.stderr)
        return 2
    Path(args.out).write_text(render_attention_svg(result.attention), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "translate": _cmd_translate,
    "evaluate": _cmd_evaluate,
    "bleu": _cmd_bleu,
    "stats": _cmd_stats,
    "serve": _cmd_serve,
    "attn-plot": _cmd_attn_plot,
}


def cli_dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (KeyboardInterrupt, BrokenPipeError):
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
