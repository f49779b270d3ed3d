"""Readers and writers for the pipeline's on-disk artifacts.

Three inputs:

* corpus: UTF-8 JSON Lines, one object per line with fields ``id`` (string),
  ``text`` (string) and optional ``gold`` (string).
* embeddings: binary "EMB1" — 4 magic bytes ``EMB1``, uint32-LE row count,
  uint32-LE dimension, then ``n * d`` IEEE-754 float32-LE values, row-major.
  Row i corresponds to corpus line i.
* parses: CoNLL-U with a ``# sent_id = <id>`` comment per sentence.

Outputs are JSON (all report types) or CSV (score curve only), serialized
deterministically: keys sorted, floats at 6 significant digits.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ValidationError

EMB1_MAGIC = b"EMB1"


@dataclass(frozen=True)
class Utterance:
    id: str
    text: str
    gold: Optional[str] = None


@dataclass(frozen=True)
class Corpus:
    """Ordered utterances with unique ids and all-or-none gold labels."""

    utterances: tuple[Utterance, ...]

    def __post_init__(self):
        if not self.utterances:
            raise ValidationError("corpus is empty")
        seen = set()
        for u in self.utterances:
            if not u.id:
                raise ValidationError("utterance with empty id")
            if u.id in seen:
                raise ValidationError(f"duplicate utterance id {u.id!r}")
            seen.add(u.id)
        with_gold = sum(u.gold is not None for u in self.utterances)
        if with_gold not in (0, len(self.utterances)):
            raise ValidationError("gold labels present on some utterances but not all")

    def __len__(self) -> int:
        return len(self.utterances)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.utterances)

    @property
    def has_gold(self) -> bool:
        return self.utterances[0].gold is not None

    def gold_labels(self) -> list[str]:
        if not self.has_gold:
            raise ValidationError("corpus has no gold labels")
        return [u.gold for u in self.utterances]


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Dense n x d float32 matrix, row i aligned to corpus utterance i."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float32)
        if arr.ndim != 2:
            raise ValidationError(f"embeddings must be 2-D, got {arr.ndim}-D")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"embeddings must be at least 1x1, got {arr.shape}")
        bad = ~np.isfinite(arr)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise ValidationError(f"non-finite embedding value at row {r}, col {c}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ParseToken:
    form: str
    lemma: str
    upos: str
    head: int  # 1-based index into the sentence, 0 for root
    deprel: str


@dataclass(frozen=True)
class ParseTable:
    """Per-utterance dependency tokens, keyed by utterance id."""

    sentences: dict[str, tuple[ParseToken, ...]]

    def __len__(self) -> int:
        return len(self.sentences)


def read_corpus(path: str | Path) -> Corpus:
    """Read a JSON Lines corpus, enforcing id uniqueness and gold consistency."""
    path = Path(path)
    utterances: list[Utterance] = []
    seen: dict[str, int] = {}
    gold_expected: Optional[bool] = None
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValidationError(f"line {lineno}: malformed JSON: {e.msg}") from e
            if not isinstance(obj, dict):
                raise ValidationError(f"line {lineno}: expected a JSON object")
            uid = obj.get("id")
            text = obj.get("text")
            if not isinstance(uid, str) or not uid:
                raise ValidationError(f"line {lineno}: missing or empty 'id'")
            if not isinstance(text, str):
                raise ValidationError(f"line {lineno}: missing 'text'")
            if uid in seen:
                raise ValidationError(
                    f"duplicate id {uid!r} at line {lineno} (first seen at line {seen[uid]})"
                )
            seen[uid] = lineno
            gold = obj.get("gold")
            if gold is not None and not isinstance(gold, str):
                raise ValidationError(f"line {lineno}: 'gold' must be a string")
            has_gold = gold is not None
            if gold_expected is None:
                gold_expected = has_gold
            elif has_gold != gold_expected:
                raise ValidationError(
                    f"line {lineno}: gold label {'present' if has_gold else 'missing'} "
                    "but earlier lines disagree (gold must be on all utterances or none)"
                )
            utterances.append(Utterance(uid, text, gold))
    if not utterances:
        raise ValidationError(f"empty corpus file: {path}")
    return Corpus(tuple(utterances))


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        for u in corpus.utterances:
            obj = {"id": u.id, "text": u.text}
            if u.gold is not None:
                obj["gold"] = u.gold
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_embeddings(path: str | Path, corpus: Corpus) -> EmbeddingMatrix:
    """Read an EMB1 file and check its alignment with the corpus."""
    path = Path(path)
    data = path.read_bytes()
    if data[:4] != EMB1_MAGIC:
        raise ValidationError(f"bad magic in {path}: expected {EMB1_MAGIC!r}, got {data[:4]!r}")
    if len(data) < 12:
        raise ValidationError(f"truncated header in {path}")
    n, d = struct.unpack("<II", data[4:12])
    if n != len(corpus):
        raise ValidationError(f"embedding rows ({n}) do not match corpus size ({len(corpus)})")
    if n < 1 or d < 1:
        raise ValidationError(f"invalid embedding shape {n}x{d}")
    expected = 12 + n * d * 4
    if len(data) < expected:
        raise ValidationError(
            f"truncated payload in {path}: expected {expected} bytes, got {len(data)}"
        )
    if len(data) > expected:
        raise ValidationError(f"trailing bytes in {path}: expected {expected}, got {len(data)}")
    values = np.frombuffer(data, dtype="<f4", offset=12, count=n * d).reshape(n, d)
    return EmbeddingMatrix(values)


def write_embeddings(matrix: EmbeddingMatrix, path: str | Path) -> None:
    path = Path(path)
    with path.open("wb") as f:
        f.write(EMB1_MAGIC)
        f.write(struct.pack("<II", matrix.n, matrix.d))
        f.write(np.ascontiguousarray(matrix.values, dtype="<f4").tobytes())


def read_conllu(path: str | Path, corpus: Corpus) -> ParseTable:
    """Read CoNLL-U parses keyed by sent_id.

    Multiword-token ranges (id "3-4") and empty nodes (id "3.1") are
    skipped; only basic tokens are kept. Every sent_id must name a corpus
    utterance; a sentence may legitimately have zero tokens.
    """
    path = Path(path)
    corpus_ids = set(corpus.ids)
    sentences: dict[str, tuple[ParseToken, ...]] = {}

    sent_id: Optional[str] = None
    rows: list[tuple[int, ParseToken]] = []  # (token id, token)
    in_sentence = False

    def finalize(lineno: int) -> None:
        nonlocal sent_id, rows, in_sentence
        if not in_sentence:
            return
        if sent_id is None:
            raise ValidationError(f"line {lineno}: sentence without a '# sent_id =' comment")
        if sent_id not in corpus_ids:
            raise ValidationError(f"sent_id {sent_id!r} not found in corpus")
        if sent_id in sentences:
            raise ValidationError(f"duplicate sent_id {sent_id!r}")
        for pos, (tid, _) in enumerate(rows, start=1):
            if tid != pos:
                raise ValidationError(
                    f"sentence {sent_id!r}: token ids not sequential (saw {tid} at position {pos})"
                )
        count = len(rows)
        for tid, tok in rows:
            if not (0 <= tok.head <= count):
                raise ValidationError(
                    f"sentence {sent_id!r}: token {tid} HEAD={tok.head} out of range [0, {count}]"
                )
        sentences[sent_id] = tuple(tok for _, tok in rows)
        sent_id, rows, in_sentence = None, [], False

    with path.open(encoding="utf-8") as f:
        lineno = 0
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                finalize(lineno)
                continue
            if line.startswith("#"):
                in_sentence = True
                body = line[1:].strip()
                if body.startswith("sent_id"):
                    _, _, value = body.partition("=")
                    sent_id = value.strip()
                continue
            in_sentence = True
            cols = line.split("\t")
            if len(cols) != 10:
                raise ValidationError(f"line {lineno}: expected 10 columns, got {len(cols)}")
            tok_id = cols[0]
            if "-" in tok_id or "." in tok_id:
                continue  # multiword range / empty node
            if not tok_id.isdigit():
                raise ValidationError(f"line {lineno}: invalid token id {tok_id!r}")
            head_col = cols[6]
            try:
                head = int(head_col)
            except ValueError:
                raise ValidationError(
                    f"line {lineno}: non-integer HEAD {head_col!r} on a basic token"
                ) from None
            rows.append(
                (int(tok_id), ParseToken(form=cols[1], lemma=cols[2], upos=cols[3], head=head, deprel=cols[7]))
            )
        finalize(lineno + 1)
    return ParseTable(sentences)


def write_conllu(table: ParseTable, path: str | Path) -> None:
    """Write a ParseTable back to CoNLL-U (unused columns as '_')."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        for sid, tokens in table.sentences.items():
            f.write(f"# sent_id = {sid}\n")
            for i, t in enumerate(tokens, start=1):
                f.write(
                    f"{i}\t{t.form}\t{t.lemma}\t{t.upos}\t_\t_\t{t.head}\t{t.deprel}\t_\t_\n"
                )
            f.write("\n")


@dataclass(frozen=True)
class LoadedClustering:
    """Clustering report read back from disk; centroids may be absent."""

    k: int
    seed: int
    inertia: float
    iterations: int
    assignments: np.ndarray  # row-aligned to the corpus used to load it
    centroids: Optional[np.ndarray] = None


def read_clustering(path: str | Path, corpus: Corpus) -> LoadedClustering:
    """Read a clustering report JSON and align assignments to corpus order."""
    path = Path(path)
    with path.open(encoding="utf-8") as f:
        obj = json.load(f)
    for key in ("k", "seed", "inertia", "iterations", "assignments"):
        if key not in obj:
            raise ValidationError(f"clustering report missing field {key!r}")
    k = int(obj["k"])
    by_id = obj["assignments"]
    missing = [uid for uid in corpus.ids if uid not in by_id]
    if missing:
        raise ValidationError(f"clustering report missing assignment for id {missing[0]!r}")
    if len(by_id) != len(corpus):
        raise ValidationError(
            f"clustering report has {len(by_id)} assignments, corpus has {len(corpus)}"
        )
    assignments = np.array([int(by_id[uid]) for uid in corpus.ids], dtype=np.int64)
    if assignments.min() < 0 or assignments.max() >= k:
        raise ValidationError(f"cluster index out of range [0, {k})")
    centroids = None
    if obj.get("centroids") is not None:
        centroids = np.asarray(obj["centroids"], dtype=np.float64)
    return LoadedClustering(
        k=k,
        seed=int(obj["seed"]),
        inertia=float(obj["inertia"]),
        iterations=int(obj["iterations"]),
        assignments=assignments,
        centroids=centroids,
    )


def _round_floats(obj):
    # 6 significant digits keeps report diffs stable across platforms
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dumps_canonical(payload) -> str:
    """Deterministic JSON: sorted keys, 6-significant-digit floats."""
    return (
        json.dumps(_round_floats(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
        + "\n"
    )


def format_csv(header: list[str], rows: list[list]) -> str:
    out = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, float):
                cells.append(f"{v:.6g}")
            else:
                cells.append(str(v))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def write_report(
    report,
    path: str | Path,
    format: str = "json",
    *,
    ids: Optional[tuple[str, ...]] = None,
    emit_centroids: bool = False,
) -> None:
    """Serialize a pipeline report (Clustering, ScoreCurve, LabelSet, EvalReport).

    JSON works for every report type; CSV only for the score curve. A
    clustering report needs ``ids`` to key assignments by utterance id.
    """
    from .clustering import Clustering  # deferred to avoid a module cycle

    path = Path(path)
    if format == "csv":
        if not hasattr(report, "csv_rows"):
            raise ValidationError(f"csv unsupported for {type(report).__name__} report")
        header, rows = report.csv_rows()
        path.write_text(format_csv(header, rows), encoding="utf-8")
        return
    if format != "json":
        raise ValidationError(f"unknown report format {format!r}")
    if isinstance(report, Clustering):
        if ids is None:
            raise ValidationError("ids required to serialize a clustering report")
        payload = report.report_dict(ids, emit_centroids=emit_centroids)
    elif hasattr(report, "report_dict"):
        payload = report.report_dict()
    else:
        raise ValidationError(f"unsupported report type {type(report).__name__}")
    path.write_text(dumps_canonical(payload), encoding="utf-8")
