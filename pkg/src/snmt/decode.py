"""Greedy decoding with per-step attention rows for alignment plots."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .corpus import detokenize, encode_sentence, normalize_text, tokenize
from .model import ModelConfig, Seq2SeqParams, encode, _step_logits
from .special_tokens import END_ID, END_TOKEN, START_ID, START_TOKEN, UNK_ID


@dataclass
class AttentionMatrix:
    """One alignment-weight row per emitted target token.

    Rows are softmax distributions over source positions; the token lists
    label the plot axes and include the start/end markers.
    """

    rows: np.ndarray  # (T_y, T_x)
    source_tokens: list[str]
    target_tokens: list[str]


@dataclass
class TranslationResult:
    source_tokens: list[str]   # marker-framed, matches attention columns
    target_tokens: list[str]   # emitted tokens, matches attention rows
    translation: str           # rendered sentence, markers stripped
    attention: AttentionMatrix | None
    log_prob: float
    truncated: bool
    unknown_source_tokens: list[str] = field(default_factory=list)


def greedy_decode_ids(params: Seq2SeqParams, config: ModelConfig,
                      source_ids, max_len: int):
    """Argmax decoding over raw ids; ties break toward the lowest id.

    Returns (emitted ids, attention rows or None, total log-prob, truncated).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    with ad.no_grad():
        enc = encode(source_ids, params, config)
        state = enc.init_state
        prev = START_ID
        emitted: list[int] = []
        rows: list[np.ndarray] = []
        log_prob = 0.0
        truncated = True
        for _ in range(max_len):
            state, logits, alpha = _step_logits(prev, state, enc, params, config)
            logp = ad.log_softmax(logits).data.reshape(-1)
            chosen = int(np.argmax(logp))
            log_prob += float(logp[chosen])
            emitted.append(chosen)
            if alpha is not None:
                rows.append(alpha.data.reshape(-1).copy())
            if chosen == END_ID:
                truncated = False
                break
            prev = chosen
    attention = np.vstack(rows) if rows else None
    return emitted, attention, log_prob, truncated


def greedy_decode(model, source_ids, max_len: int | None = None) -> TranslationResult:
    """Decode a marker-framed source id sequence through a loaded model."""
    max_len = max_len or model.config.max_decode_len
    emitted, rows, log_prob, truncated = greedy_decode_ids(
        model.params, model.config, source_ids, max_len
    )
    source_tokens = [model.source_vocab.token_of(i) for i in source_ids]
    target_tokens = [model.target_vocab.token_of(i) for i in emitted]
    rendered = detokenize([t for t in target_tokens if t not in (START_TOKEN, END_TOKEN)])
    attention = None
    if rows is not None:
        attention = AttentionMatrix(rows, source_tokens, target_tokens)
    return TranslationResult(
        source_tokens=source_tokens,
        target_tokens=target_tokens,
        translation=rendered,
        attention=attention,
        log_prob=log_prob,
        truncated=truncated,
    )


def translate_text(model, text: str, max_len: int | None = None) -> TranslationResult:
    """Full pipeline: normalize, tokenize, encode (unk for OOV), decode."""
    tokens = tokenize(normalize_text(text))
    if not tokens:
        raise ValueError("empty input")
    ids = encode_sentence(model.source_vocab, tokens)
    result = greedy_decode(model, ids, max_len)
    result.unknown_source_tokens = [
        tok for tok, i in zip(tokens, ids[1:-1]) if i == UNK_ID
    ]
    return result
