"""Teacher-forced training: Adam, gradient clipping, early stopping."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from .model import ModelConfig, Seq2SeqParams, sequence_log_prob


class TrainingDivergedError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 5
    clip_norm: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int = 0

    @classmethod
    def fresh(cls, params: Seq2SeqParams) -> "AdamState":
        return cls(
            m={k: np.zeros_like(p.data, dtype=np.float64) for k, p in params.tensors.items()},
            v={k: np.zeros_like(p.data, dtype=np.float64) for k, p in params.tensors.items()},
        )


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    epoch_seconds: list[float] = field(default_factory=list)
    stop_reason: str = ""
    best_epoch: int = -1

    def to_dict(self) -> dict:
        return {
            "train_loss": self.train_loss,
            "val_loss": self.val_loss,
            "epoch_seconds": self.epoch_seconds,
            "stop_reason": self.stop_reason,
            "best_epoch": self.best_epoch,
        }

    def summary(self) -> dict:
        """Checkpoint-embeddable summary; no wall times, so identical runs
        serialize identically."""
        return {
            "epochs": len(self.train_loss),
            "final_train_loss": self.train_loss[-1] if self.train_loss else None,
            "best_val_loss": min(self.val_loss) if self.val_loss else None,
            "stop_reason": self.stop_reason,
            "best_epoch": self.best_epoch,
        }


def teacher_forced_loss(params: Seq2SeqParams, config: ModelConfig, batch) -> ad.Tensor:
    """Mean per-token negative log-likelihood over a batch of id pairs."""
    if not batch:
        raise ValueError("empty batch")
    total = None
    for source_ids, target_ids in batch:
        lp = sequence_log_prob(params, config, source_ids, target_ids)
        per_token = ad.scale(ad.neg(lp), 1.0 / (len(target_ids) - 1))
        total = per_token if total is None else total + per_token
    return ad.scale(total, 1.0 / len(batch))


def clip_gradients(params: Seq2SeqParams, clip_norm: float) -> float:
    """Scale all gradients so their global L2 norm is at most clip_norm."""
    sq = 0.0
    for p in params.all():
        if p.grad is not None:
            sq += float((p.grad.astype(np.float64) ** 2).sum())
    norm = float(np.sqrt(sq))
    if norm > clip_norm and norm > 0:
        factor = clip_norm / norm
        for p in params.all():
            if p.grad is not None:
                p.grad *= p.data.dtype.type(factor)
    return min(norm, clip_norm)


def adam_step(params: Seq2SeqParams, state: AdamState, config: TrainConfig):
    """One Adam update over every parameter with a gradient."""
    state.t += 1
    b1, b2 = config.beta1, config.beta2
    bias1 = 1.0 - b1 ** state.t
    bias2 = 1.0 - b2 ** state.t
    for name, p in params.tensors.items():
        g = p.grad
        if g is None:
            continue
        if not np.all(np.isfinite(g)):
            raise TrainingDivergedError(f"non-finite gradient in parameter {name!r}")
        g = g.astype(np.float64)
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = state.m[name] / bias1
        v_hat = state.v[name] / bias2
        step = config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
        p.data = (p.data.astype(np.float64) - step).astype(p.data.dtype)


def prepare_batches(data, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(len(data))
    return [
        [data[i] for i in order[lo:lo + batch_size]]
        for lo in range(0, len(data), batch_size)
    ]


def evaluate_loss(params: Seq2SeqParams, config: ModelConfig, data) -> float:
    with ad.no_grad():
        return teacher_forced_loss(params, config, data).item()


def train(params: Seq2SeqParams, model_config: ModelConfig,
          train_data, val_data, config: TrainConfig,
          log=None) -> TrainHistory:
    """Epoch loop with seeded shuffling and validation-based early stopping.

    Mutates `params` in place; on return they hold the best-validation
    values observed. `train_data`/`val_data` are lists of (source_ids,
    target_ids) pairs, both marker-framed.
    """
    if not train_data or not val_data:
        raise ValueError("train and validation splits must be non-empty")
    rng = np.random.default_rng(config.seed)
    adam = AdamState.fresh(params)
    history = TrainHistory()
    best_val = np.inf
    best_values = params.copy_values()
    since_best = 0

    for epoch in range(config.max_epochs):
        t0 = time.monotonic()
        epoch_losses = []
        for batch in prepare_batches(train_data, config.batch_size, rng):
            params.zero_grads()
            loss = teacher_forced_loss(params, model_config, batch)
            if not np.isfinite(loss.data):
                raise TrainingDivergedError(
                    f"training loss became non-finite at epoch {epoch}"
                )
            ad.backward(loss)
            clip_gradients(params, config.clip_norm)
            adam_step(params, adam, config)
            epoch_losses.append(loss.item())

        val = evaluate_loss(params, model_config, val_data)
        history.train_loss.append(float(np.mean(epoch_losses)))
        history.val_loss.append(val)
        history.epoch_seconds.append(time.monotonic() - t0)
        if log:
            log(epoch, history.train_loss[-1], val)

        if val < best_val:
            best_val = val
            best_values = params.copy_values()
            history.best_epoch = epoch
            since_best = 0
        else:
            since_best += 1
            if since_best >= config.patience:
                history.stop_reason = "early-stop"
                break
    else:
        history.stop_reason = "max-epochs"

    params.load_values(best_values)
    return history
