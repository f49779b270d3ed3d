"""Shared fixtures: offline encoder/parser stubs and a fake SNIPS tree."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from openintent_exporter.parses import TokenRow


def _text_vector(text: str) -> np.ndarray:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return np.frombuffer(digest[:6], dtype=np.uint8).astype(np.float32)


@pytest.fixture
def stub_encoder():
    """Deterministic 6-d vectors derived from each text, no model needed."""

    def encode(texts):
        return np.stack([_text_vector(t) for t in texts]) if texts else np.zeros((0, 6))

    return encode


@pytest.fixture
def stub_parser():
    """First word is a VERB root, the rest NOUN objects of it."""

    def parse(texts):
        sentences = []
        for text in texts:
            rows = []
            for i, word in enumerate(text.split()):
                if i == 0:
                    rows.append(TokenRow(word, word.lower(), "VERB", 0, "root"))
                else:
                    rows.append(TokenRow(word, word.lower(), "NOUN", 1, "dobj"))
            sentences.append(rows)
        return sentences

    return parse


SNIPS_EXAMPLES = {
    "AddToPlaylist": [
        [{"text": "add "}, {"text": "this tune"}, {"text": " to my playlist"}],
        [{"text": "put the song on rock classics"}],
    ],
    "GetWeather": [
        [{"text": "what is the weather "}, {"text": "in boston"}],
    ],
    "PlayMusic": [
        [{"text": "play some jazz"}],
        [{"text": "play the new album"}],
    ],
}


@pytest.fixture
def snips_root(tmp_path: Path) -> Path:
    """A miniature copy of the benchmark layout with three intents."""
    root = tmp_path / "snips"
    for intent, examples in SNIPS_EXAMPLES.items():
        intent_dir = root / intent
        intent_dir.mkdir(parents=True)
        payload = {intent: [{"data": chunks} for chunks in examples]}
        (intent_dir / f"train_{intent}_full.json").write_text(
            json.dumps(payload), encoding="utf-8"
        )
    return root
