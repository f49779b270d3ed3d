"""Sentence embeddings in the pipeline's EMB1 binary format.

EMB1: 4 ASCII magic bytes "EMB1", uint32-LE row count, uint32-LE
dimension, then row-major float32-LE values. Row i is the embedding of
corpus line i.

Four model aliases mirror the encoders the pipeline was tuned against;
anything else is passed to sentence-transformers as a checkpoint name.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ExportError

MODEL_ALIASES = {
    "nli-bert": "nli-bert-base-max-pooling",
    "stsb-bert": "stsb-roberta-base",
    "paraphrase": "paraphrase-distilroberta-base-v1",
    "universal": "https://tfhub.dev/google/universal-sentence-encoder/4",
}

# encoder: list of texts -> (n, d) array
Encoder = Callable[[Sequence[str]], np.ndarray]


def resolve_model(model: str) -> str:
    if not model:
        raise ExportError("model identifier must be non-empty")
    return MODEL_ALIASES.get(model, model)


def _supported() -> str:
    return ", ".join(sorted(MODEL_ALIASES))


def build_encoder(model: str) -> Encoder:
    """Load the encoder behind a model id.

    The "universal" alias loads from TF Hub; every other id goes through
    sentence-transformers. Load failures report the supported aliases.
    """
    resolved = resolve_model(model)
    if model == "universal":
        try:
            import tensorflow_hub as hub
        except ImportError as e:
            raise ExportError(
                f"model {model!r} needs tensorflow_hub; supported ids: {_supported()}"
            ) from e
        module = hub.load(resolved)
        return lambda texts: np.asarray(module(list(texts)))
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError as e:
        raise ExportError(
            f"model {model!r} needs sentence-transformers; supported ids: {_supported()}"
        ) from e
    try:
        encoder = SentenceTransformer(resolved)
    except Exception as e:
        raise ExportError(
            f"cannot load model {model!r} (resolved to {resolved!r}): {e}; "
            f"supported ids: {_supported()}"
        ) from e
    return lambda texts: np.asarray(
        encoder.encode(list(texts), batch_size=64, show_progress_bar=False)
    )


def write_emb1(values: np.ndarray, path: str | Path) -> None:
    values = np.ascontiguousarray(values, dtype="<f4")
    if values.ndim != 2:
        raise ExportError(f"embeddings must be 2-D, got shape {values.shape}")
    n, d = values.shape
    with Path(path).open("wb") as f:
        f.write(b"EMB1")
        f.write(struct.pack("<II", n, d))
        f.write(values.tobytes())


def export_embeddings(
    texts: Sequence[str],
    model: str,
    out_dir: str | Path,
    *,
    encoder: Encoder | None = None,
) -> Path:
    """Encode texts in corpus order and write embeddings.emb1."""
    if encoder is None:
        encoder = build_encoder(model)
    values = np.asarray(encoder(list(texts)))
    if values.ndim != 2 or values.shape[0] != len(texts):
        raise ExportError(
            f"encoder returned shape {values.shape} for {len(texts)} texts"
        )
    if not np.isfinite(values).all():
        bad = int(np.argwhere(~np.isfinite(values).all(axis=1))[0][0])
        raise ExportError(f"encoder produced a non-finite embedding for row {bad}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "embeddings.emb1"
    write_emb1(values, path)
    return path
