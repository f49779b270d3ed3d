"""Input-file exporter for the openintent pipeline.

Turns raw text (or the SNIPS benchmark) into the three files the
pipeline consumes: a JSON Lines corpus, an EMB1 embedding matrix from a
pre-trained sentence encoder, and CoNLL-U dependency parses.
"""

__version__ = "0.1.0"

from .corpus import export_corpus, load_snips, load_text
from .embeddings import MODEL_ALIASES, export_embeddings, resolve_model
from .errors import ExportError
from .parses import export_parses

__all__ = [
    "ExportError",
    "MODEL_ALIASES",
    "export_corpus",
    "export_embeddings",
    "export_parses",
    "load_snips",
    "load_text",
    "resolve_model",
]
