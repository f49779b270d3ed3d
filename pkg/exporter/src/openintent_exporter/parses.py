"""Dependency parses in CoNLL-U, one sentence per utterance.

Each utterance becomes a single CoNLL-U sentence headed by a
"# sent_id = <id>" comment, with FORM, LEMMA, UPOS, HEAD and DEPREL
populated and the remaining columns as "_". Empty utterances still emit
their sent_id so the pipeline sees every id. The default backend is
spaCy; a parser callable can be injected instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .errors import ExportError


@dataclass(frozen=True)
class TokenRow:
    form: str
    lemma: str
    upos: str
    head: int  # 1-based within the sentence, 0 for root
    deprel: str


# parser: list of texts -> one token list per text
Parser = Callable[[Sequence[str]], list[list[TokenRow]]]


def build_spacy_parser(model: str = "en_core_web_sm") -> Parser:
    try:
        import spacy
    except ImportError as e:
        raise ExportError("spaCy is not installed; pip install spacy") from e
    try:
        nlp = spacy.load(model)
    except OSError as e:
        raise ExportError(
            f"spaCy model {model!r} is not available; "
            f"python -m spacy download {model}"
        ) from e

    def parse(texts: Sequence[str]) -> list[list[TokenRow]]:
        out = []
        for doc in nlp.pipe(list(texts)):
            rows = []
            for i, token in enumerate(doc):
                head = 0 if token.head is token else token.head.i + 1
                rows.append(
                    TokenRow(
                        form=token.text or "_",
                        lemma=token.lemma_ or "_",
                        upos=token.pos_ or "_",
                        head=head,
                        deprel=token.dep_ or "_",
                    )
                )
            out.append(rows)
        return out

    return parse


def _sanitize(field: str) -> str:
    # tabs and newlines are structure in CoNLL-U, never data
    return field.replace("\t", " ").replace("\n", " ") or "_"


def write_conllu(
    ids: Sequence[str], sentences: Sequence[list[TokenRow]], path: str | Path
) -> None:
    if len(ids) != len(sentences):
        raise ExportError(f"{len(ids)} ids for {len(sentences)} parsed sentences")
    with Path(path).open("w", encoding="utf-8") as f:
        for uid, rows in zip(ids, sentences):
            f.write(f"# sent_id = {uid}\n")
            for i, t in enumerate(rows, start=1):
                f.write(
                    "\t".join(
                        [
                            str(i),
                            _sanitize(t.form),
                            _sanitize(t.lemma),
                            _sanitize(t.upos),
                            "_",
                            "_",
                            str(t.head),
                            _sanitize(t.deprel),
                            "_",
                            "_",
                        ]
                    )
                    + "\n"
                )
            f.write("\n")


def export_parses(
    ids: Sequence[str],
    texts: Sequence[str],
    out_dir: str | Path,
    *,
    parser: Parser | None = None,
) -> Path:
    """Parse texts in corpus order and write parses.conllu."""
    if parser is None:
        parser = build_spacy_parser()
    sentences = parser(list(texts))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "parses.conllu"
    write_conllu(ids, sentences, path)
    return path
