"""Encoder-decoder recurrent translation model with additive attention.

The encoder turns a source token-id sequence into one annotation vector per
word; the decoder emits target words one at a time, either from the fixed
final encoder vector (baseline mode) or conditioned on an attention-weighted
context over all annotations. Both LSTM and GRU cells are supported, with an
optional bidirectional encoder.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .autodiff import Tensor
from .special_tokens import END_ID, START_ID


class VocabularyRangeError(IndexError):
    pass


@dataclass
class ModelConfig:
    source_vocab_size: int
    target_vocab_size: int
    embed_dim: int = 128
    hidden_dim: int = 128
    cell_type: str = "lstm"  # "lstm" | "gru"
    bidirectional_encoder: bool = False
    attention_enabled: bool = True
    max_decode_len: int = 50

    def __post_init__(self):
        if self.cell_type not in ("lstm", "gru"):
            raise ValueError(f"unknown cell_type {self.cell_type!r}")
        for name in ("source_vocab_size", "target_vocab_size", "embed_dim", "hidden_dim"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.max_decode_len < 2:
            raise ValueError("max_decode_len must be >= 2")

    @property
    def annotation_dim(self) -> int:
        return self.hidden_dim * (2 if self.bidirectional_encoder else 1)

    def to_dict(self) -> dict:
        return {
            "source_vocab_size": self.source_vocab_size,
            "target_vocab_size": self.target_vocab_size,
            "embed_dim": self.embed_dim,
            "hidden_dim": self.hidden_dim,
            "cell_type": self.cell_type,
            "bidirectional_encoder": self.bidirectional_encoder,
            "attention_enabled": self.attention_enabled,
            "max_decode_len": self.max_decode_len,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)


def _cell_param_shapes(cell_type: str, in_dim: int, hid: int) -> list[tuple[str, tuple]]:
    if cell_type == "lstm":
        return [("W", (4 * hid, in_dim + hid)), ("b", (4 * hid, 1))]
    return [
        ("Wzr", (2 * hid, in_dim + hid)),
        ("bzr", (2 * hid, 1)),
        ("Wn", (hid, in_dim + hid)),
        ("bn", (hid, 1)),
    ]


@dataclass
class Seq2SeqParams:
    """All learnable weights, keyed by stable names (checkpoint order)."""

    tensors: dict[str, Tensor] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def names(self) -> list[str]:
        return list(self.tensors)

    def all(self) -> list[Tensor]:
        return list(self.tensors.values())

    def zero_grads(self):
        for t in self.tensors.values():
            t.zero_grad()

    def copy_values(self) -> dict[str, np.ndarray]:
        return {k: v.data.copy() for k, v in self.tensors.items()}

    def load_values(self, values: dict[str, np.ndarray]):
        for k, t in self.tensors.items():
            t.data = np.asarray(values[k], dtype=t.data.dtype).reshape(t.shape)


def init_params(config: ModelConfig, seed: int = 0, dtype=np.float32) -> Seq2SeqParams:
    """Glorot-uniform matrices, zero biases, deterministic given the seed."""
    rng = np.random.default_rng(seed)
    hid = config.hidden_dim
    d_h = config.annotation_dim
    dec_in = config.embed_dim + (d_h if config.attention_enabled else 0)
    out_in = hid + (d_h if config.attention_enabled else 0)

    shapes: list[tuple[str, tuple]] = [
        ("embed_src", (config.source_vocab_size, config.embed_dim)),
        ("embed_tgt", (config.target_vocab_size, config.embed_dim)),
    ]
    for n, s in _cell_param_shapes(config.cell_type, config.embed_dim, hid):
        shapes.append((f"enc.{n}", s))
    if config.bidirectional_encoder:
        for n, s in _cell_param_shapes(config.cell_type, config.embed_dim, hid):
            shapes.append((f"enc_rev.{n}", s))
        shapes.append(("v_proj.W", (hid, 2 * hid)))
        shapes.append(("v_proj.b", (hid, 1)))
    for n, s in _cell_param_shapes(config.cell_type, dec_in, hid):
        shapes.append((f"dec.{n}", s))
    if config.attention_enabled:
        shapes.append(("att.W", (hid, hid)))
        shapes.append(("att.U", (hid, d_h)))
        shapes.append(("att.v", (hid, 1)))
    shapes.append(("out.W", (config.target_vocab_size, out_in)))
    shapes.append(("out.b", (config.target_vocab_size, 1)))

    tensors: dict[str, Tensor] = {}
    for name, shape in shapes:
        base = name.rsplit(".", 1)[-1]
        if base.startswith("b"):
            data = np.zeros(shape, dtype=dtype)
        else:
            fan_in = shape[1] if len(shape) == 2 else shape[0]
            fan_out = shape[0]
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            data = rng.uniform(-limit, limit, size=shape).astype(dtype)
        tensors[name] = Tensor(data, requires_grad=True, dtype=dtype)
    return Seq2SeqParams(tensors)


@dataclass
class DecoderState:
    h: Tensor
    c: Tensor | None = None  # LSTM cell memory; None for GRU


@dataclass
class EncoderStates:
    annotations: Tensor  # (d_h, T_x), one column per source position
    init_state: DecoderState

    @property
    def length(self) -> int:
        return self.annotations.shape[1]


def _zeros_state(config: ModelConfig, dtype) -> DecoderState:
    h = Tensor(np.zeros((config.hidden_dim, 1), dtype=dtype))
    if config.cell_type == "lstm":
        return DecoderState(h, Tensor(np.zeros((config.hidden_dim, 1), dtype=dtype)))
    return DecoderState(h)


def cell_step(params: Seq2SeqParams, prefix: str, cell_type: str,
              x: Tensor, state: DecoderState) -> DecoderState:
    """One recurrence step of the named cell over input column `x`."""
    if cell_type == "lstm":
        W, b = params[f"{prefix}.W"], params[f"{prefix}.b"]
        hid = state.h.shape[0]
        if x.shape[0] + hid != W.shape[1]:
            raise ad.ShapeMismatchError(
                f"cell input width {x.shape[0]} + hidden {hid} != {W.shape[1]}"
            )
        z = ad.matmul(W, ad.concat([x, state.h], axis=0)) + b
        i = ad.sigmoid(ad.rows_slice(z, 0, hid))
        f = ad.sigmoid(ad.rows_slice(z, hid, 2 * hid))
        g = ad.tanh(ad.rows_slice(z, 2 * hid, 3 * hid))
        o = ad.sigmoid(ad.rows_slice(z, 3 * hid, 4 * hid))
        c = f * state.c + i * g
        h = o * ad.tanh(c)
        return DecoderState(h, c)

    Wzr, bzr = params[f"{prefix}.Wzr"], params[f"{prefix}.bzr"]
    Wn, bn = params[f"{prefix}.Wn"], params[f"{prefix}.bn"]
    hid = state.h.shape[0]
    if x.shape[0] + hid != Wzr.shape[1]:
        raise ad.ShapeMismatchError(
            f"cell input width {x.shape[0]} + hidden {hid} != {Wzr.shape[1]}"
        )
    zr = ad.sigmoid(ad.matmul(Wzr, ad.concat([x, state.h], axis=0)) + bzr)
    z = ad.rows_slice(zr, 0, hid)
    r = ad.rows_slice(zr, hid, 2 * hid)
    n = ad.tanh(ad.matmul(Wn, ad.concat([x, r * state.h], axis=0)) + bn)
    h = (1.0 - z) * n + z * state.h
    return DecoderState(h)


def _check_ids(ids, vocab_size: int, side: str):
    for i in ids:
        if not 0 <= i < vocab_size:
            raise VocabularyRangeError(
                f"{side} token id {i} out of range [0, {vocab_size})"
            )


def encode(source_ids, params: Seq2SeqParams, config: ModelConfig) -> EncoderStates:
    """Run the encoder, returning per-word annotations and the decoder init."""
    if len(source_ids) == 0:
        raise ValueError("cannot encode an empty sequence")
    _check_ids(source_ids, config.source_vocab_size, "source")
    if source_ids[0] != START_ID or source_ids[-1] != END_ID:
        raise ValueError("source sequence must be framed by start/end markers")

    dtype = params["embed_src"].dtype
    E = params["embed_src"]

    state = _zeros_state(config, dtype)
    fwd: list[DecoderState] = []
    for i in source_ids:
        state = cell_step(params, "enc", config.cell_type, ad.take_row(E, i), state)
        fwd.append(state)

    if not config.bidirectional_encoder:
        H = ad.concat([s.h for s in fwd], axis=1)
        return EncoderStates(H, fwd[-1])

    state = _zeros_state(config, dtype)
    bwd: list[DecoderState] = []
    for i in reversed(source_ids):
        state = cell_step(params, "enc_rev", config.cell_type, ad.take_row(E, i), state)
        bwd.append(state)
    bwd.reverse()

    H = ad.concat(
        [ad.concat([f.h, b.h], axis=0) for f, b in zip(fwd, bwd)], axis=1
    )
    merged = ad.concat([fwd[-1].h, bwd[0].h], axis=0)
    h0 = ad.tanh(ad.matmul(params["v_proj.W"], merged) + params["v_proj.b"])
    if config.cell_type == "lstm":
        return EncoderStates(H, DecoderState(h0, Tensor(np.zeros_like(h0.data))))
    return EncoderStates(H, DecoderState(h0))


def attend(s_prev: DecoderState, enc: EncoderStates,
           params: Seq2SeqParams) -> tuple[Tensor, Tensor]:
    """Alignment weights and context vector for one decoder step.

    Energies are the additive form v^T tanh(W s + U h_j); the softmax over
    them gives one weight per source position, and the context is the
    weighted sum of annotations.
    """
    if enc.length == 0:
        raise ValueError("no annotations to attend over")
    pre = ad.tanh(
        ad.matmul(params["att.W"], s_prev.h) + ad.matmul(params["att.U"], enc.annotations)
    )
    energies = ad.matmul(_transpose(params["att.v"]), pre)  # (1, T_x)
    alpha = ad.softmax(energies)
    context = ad.matmul(enc.annotations, _transpose(alpha))
    return alpha, context


def _transpose(t: Tensor) -> Tensor:
    data = t.data.T.copy()

    def bw(g):
        if t.requires_grad:
            t._accumulate(g.T)

    return Tensor._result(data, (t,), bw)


def _step_logits(y_prev_id: int, s_prev: DecoderState, enc: EncoderStates,
                 params: Seq2SeqParams, config: ModelConfig):
    if not 0 <= y_prev_id < config.target_vocab_size:
        raise VocabularyRangeError(
            f"target token id {y_prev_id} out of range [0, {config.target_vocab_size})"
        )
    emb = ad.take_row(params["embed_tgt"], y_prev_id)
    if config.attention_enabled:
        alpha, context = attend(s_prev, enc, params)
        x = ad.concat([emb, context], axis=0)
        s_new = cell_step(params, "dec", config.cell_type, x, s_prev)
        logits = ad.matmul(params["out.W"], ad.concat([s_new.h, context], axis=0)) + params["out.b"]
        return s_new, logits, alpha
    s_new = cell_step(params, "dec", config.cell_type, emb, s_prev)
    logits = ad.matmul(params["out.W"], s_new.h) + params["out.b"]
    return s_new, logits, None


def decoder_step(y_prev_id: int, s_prev: DecoderState, enc: EncoderStates,
                 params: Seq2SeqParams, config: ModelConfig):
    """One decoding step: next state, token distribution, attention row."""
    s_new, logits, alpha = _step_logits(y_prev_id, s_prev, enc, params, config)
    return s_new, ad.softmax(logits), alpha


def sequence_log_prob(params: Seq2SeqParams, config: ModelConfig,
                      source_ids, target_ids) -> Tensor:
    """Teacher-forced log-probability of the target given the source.

    Both sequences must be framed by start/end markers; the start marker is
    input only, so the sum runs over len(target_ids) - 1 prediction steps.
    """
    _check_ids(target_ids, config.target_vocab_size, "target")
    if len(target_ids) < 2 or target_ids[0] != START_ID or target_ids[-1] != END_ID:
        raise ValueError("target sequence must be framed by start/end markers")
    enc = encode(source_ids, params, config)
    state = enc.init_state
    total = None
    for prev, cur in zip(target_ids[:-1], target_ids[1:]):
        state, logits, _ = _step_logits(prev, state, enc, params, config)
        term = ad.pick(ad.log_softmax(logits), cur)
        total = term if total is None else total + term
    return total
