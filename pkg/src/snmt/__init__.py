"""Sanskrit-to-Hindi neural machine translation, built from scratch on numpy."""

from .autodiff import Tensor, backward, finite_diff_check, no_grad, softmax
from .checkpoint import LoadedModel, load_checkpoint, save_checkpoint
from .corpus import (
    ParallelCorpus,
    SentencePair,
    Vocabulary,
    build_vocab,
    corpus_stats,
    encode_sentence,
    load_corpus,
    normalize_text,
    split_corpus,
    tokenize,
)
from .decode import AttentionMatrix, TranslationResult, greedy_decode, translate_text
from .evaluation import (
    BleuReport,
    HumanEvalRecord,
    brevity_penalty,
    corpus_bleu,
    human_eval_accuracy,
    modified_precision,
    sentence_bleu,
)
from .model import ModelConfig, Seq2SeqParams, attend, encode, init_params, sequence_log_prob
from .training import AdamState, TrainConfig, TrainHistory, adam_step, teacher_forced_loss, train

__version__ = "0.1.0"
