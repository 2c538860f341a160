"""Versioned binary model checkpoints.

Layout: magic ``SNMT``, u32 LE format version, u64 LE metadata length, the
UTF-8 JSON metadata (model config, both vocabularies, parameter manifest
with names/shapes/offsets, training summary), the raw float32 LE parameter
arrays in manifest order, and a trailing CRC-32 over everything before it.
Files are written atomically (temp file + rename) and serialization is
deterministic, so identical models produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .corpus import Vocabulary
from .model import ModelConfig, Seq2SeqParams, init_params

MAGIC = b"SNMT"
VERSION = 1


class CheckpointError(RuntimeError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointChecksumError(CheckpointError):
    pass


@dataclass
class LoadedModel:
    config: ModelConfig
    params: Seq2SeqParams
    source_vocab: Vocabulary
    target_vocab: Vocabulary
    meta: dict
    model_id: str


def save_checkpoint(path, config: ModelConfig, params: Seq2SeqParams,
                    source_vocab: Vocabulary, target_vocab: Vocabulary,
                    history: dict | None = None) -> str:
    """Write the model to `path`; returns the checkpoint's model id."""
    manifest = []
    offset = 0
    arrays = []
    for name, tensor in params.tensors.items():
        arr = np.ascontiguousarray(tensor.data, dtype="<f4")
        manifest.append({"name": name, "shape": list(arr.shape), "offset": offset})
        offset += arr.nbytes
        arrays.append(arr.tobytes())

    meta = {
        "config": config.to_dict(),
        "source_vocab": source_vocab.to_dict(),
        "target_vocab": target_vocab.to_dict(),
        "manifest": manifest,
        "history": history or {},
    }
    meta_bytes = json.dumps(meta, ensure_ascii=False, sort_keys=True,
                            separators=(",", ":")).encode("utf-8")

    body = MAGIC + struct.pack("<I", VERSION) + struct.pack("<Q", len(meta_bytes))
    body += meta_bytes + b"".join(arrays)
    crc = zlib.crc32(body) & 0xFFFFFFFF
    blob = body + struct.pack("<I", crc)

    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)
    return f"{crc:08x}"


def load_checkpoint(path) -> LoadedModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 20:
        raise CheckpointTruncatedError(f"{path}: file too short to be a checkpoint")
    if blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: bad magic bytes {blob[:4]!r}")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version > VERSION:
        raise CheckpointVersionError(
            f"{path}: file version {version} is newer than supported version {VERSION}"
        )
    (meta_len,) = struct.unpack_from("<Q", blob, 8)
    meta_end = 16 + meta_len
    if len(blob) < meta_end + 4:
        raise CheckpointTruncatedError(f"{path}: truncated metadata")

    crc_stored = struct.unpack_from("<I", blob, len(blob) - 4)[0]
    crc_actual = zlib.crc32(blob[:-4]) & 0xFFFFFFFF

    try:
        meta = json.loads(blob[16:meta_end].decode("utf-8"))
        param_bytes = sum(
            4 * int(np.prod(e["shape"])) for e in meta["manifest"]
        )
    except (ValueError, KeyError, UnicodeDecodeError) as e:
        if crc_stored != crc_actual:
            raise CheckpointChecksumError(
                f"{path}: checksum mismatch (stored {crc_stored:08x}, "
                f"computed {crc_actual:08x})"
            ) from e
        raise CheckpointError(f"{path}: unreadable metadata: {e}") from e

    if len(blob) < meta_end + param_bytes + 4:
        raise CheckpointTruncatedError(
            f"{path}: file shorter than the parameter manifest requires"
        )
    if crc_stored != crc_actual:
        raise CheckpointChecksumError(
            f"{path}: checksum mismatch (stored {crc_stored:08x}, computed {crc_actual:08x})"
        )
    config = ModelConfig.from_dict(meta["config"])
    params = init_params(config, seed=0, dtype=np.float32)

    payload = blob[meta_end:-4]
    values = {}
    for entry in meta["manifest"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        chunk = payload[start:start + 4 * count]
        if len(chunk) != 4 * count:
            raise CheckpointTruncatedError(
                f"{path}: truncated parameter array {entry['name']!r}"
            )
        values[entry["name"]] = np.frombuffer(chunk, dtype="<f4").reshape(shape)
    if set(values) != set(params.tensors):
        raise CheckpointError(f"{path}: parameter manifest does not match config")
    params.load_values(values)

    return LoadedModel(
        config=config,
        params=params,
        source_vocab=Vocabulary.from_dict(meta["source_vocab"]),
        target_vocab=Vocabulary.from_dict(meta["target_vocab"]),
        meta=meta,
        model_id=f"{crc_actual:08x}",
    )
