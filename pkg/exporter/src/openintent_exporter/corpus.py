"""Corpus construction: plain text files or the SNIPS benchmark tree.

Output is JSON Lines with one object per utterance: a stable zero-padded
id ("u0000", widened when the corpus needs more digits), the text, and a
"gold" intent label when the source provides one.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .errors import ExportError


def _id_width(n: int) -> int:
    return max(4, len(str(n - 1)))


def make_ids(n: int) -> list[str]:
    width = _id_width(n)
    return [f"u{i:0{width}d}" for i in range(n)]


def load_text(path: str | Path) -> list[dict]:
    """One utterance per line, no gold labels. Blank lines stay as
    empty-text utterances; a file with no lines at all is an error."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ExportError(f"empty input file: {path}")
    return [{"text": line, "gold": None} for line in lines]


def load_snips(root: str | Path) -> list[dict]:
    """Read the SNIPS benchmark layout: <root>/<Intent>/train_<Intent>_full.json,
    each holding {"<Intent>": [{"data": [{"text": ...}, ...]}, ...]}.

    Intents are visited in sorted order and every example keeps its intent
    as the gold label. Utterance text is the concatenation of the example's
    data chunks.
    """
    root = Path(root)
    if not root.is_dir():
        raise ExportError(f"SNIPS directory not found: {root}")
    intent_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not intent_dirs:
        raise ExportError(f"no intent directories under {root}")
    records = []
    for intent_dir in intent_dirs:
        intent = intent_dir.name
        source = intent_dir / f"train_{intent}_full.json"
        if not source.exists():
            source = intent_dir / f"train_{intent}.json"
        if not source.exists():
            raise ExportError(f"no train file for intent {intent!r} in {intent_dir}")
        with source.open(encoding="utf-8", errors="replace") as f:
            payload = json.load(f)
        examples = payload.get(intent)
        if examples is None:
            raise ExportError(f"{source} does not contain key {intent!r}")
        for example in examples:
            text = "".join(chunk.get("text", "") for chunk in example.get("data", []))
            records.append({"text": text, "gold": intent})
    if not records:
        raise ExportError(f"no utterances found under {root}")
    return records


def export_corpus(records: list[dict], out_dir: str | Path) -> Path:
    """Write corpus.jsonl and return its path."""
    if not records:
        raise ExportError("refusing to write an empty corpus")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "corpus.jsonl"
    ids = make_ids(len(records))
    with path.open("w", encoding="utf-8") as f:
        for uid, record in zip(ids, records):
            obj: dict = {"id": uid, "text": record["text"]}
            if record.get("gold") is not None:
                obj["gold"] = record["gold"]
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return path


def read_corpus_rows(path: str | Path) -> list[dict]:
    """Read back a corpus.jsonl written by export_corpus (id/text/gold)."""
    rows = []
    with Path(path).open(encoding="utf-8") as f:
        for line in f:
            if line.strip():
                rows.append(json.loads(line))
    if not rows:
        raise ExportError(f"empty corpus file: {path}")
    return rows
