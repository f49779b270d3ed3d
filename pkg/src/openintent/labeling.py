"""Action-object labels for clusters, extracted from dependency parses.

Each utterance yields one (action, object) pair: the first noun-ish token
whose dependency relation is in the configured set and whose head is a
verb gives the complete pair. Sentences without one fall back to the
first verb lemma alone, then to the first relation-matched noun alone,
then to nothing. Numeric tokens never count as objects. A cluster's
label is its most frequent complete pair; a cluster with no complete
pair gets the concatenation of its action and object marginals.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .data_io import Corpus, ParseTable, ParseToken
from .errors import ValidationError

NONE_SLOT = "NONE"
DEFAULT_RELATIONS = ("dobj", "obj", "attr")

_NUMERIC_FORM = re.compile(r"^[+-]?\d+(\.\d+)?$")
_VERB_UPOS = frozenset({"VERB", "AUX"})
_OBJECT_UPOS = frozenset({"NOUN", "PROPN"})


def _is_number(token: ParseToken) -> bool:
    return token.upos == "NUM" or bool(_NUMERIC_FORM.match(token.form))


def _lemma(token: ParseToken) -> str:
    base = token.lemma if token.lemma not in ("", "_") else token.form
    return base.lower()


def extract_pair(
    tokens: tuple[ParseToken, ...],
    relations: tuple[str, ...] = DEFAULT_RELATIONS,
) -> tuple[str, str]:
    """Extract one (action, object) pair from a parsed sentence.

    Priority: first relation-matched noun with a verb head (complete pair),
    else first verb alone, else first relation-matched noun alone, else
    (NONE, NONE). Slots never hold numbers.
    """
    rel_set = set(relations)
    first_verb = None
    first_object = None
    for i, tok in enumerate(tokens):
        if first_verb is None and tok.upos in _VERB_UPOS:
            first_verb = tok
        if tok.deprel in rel_set and tok.upos in _OBJECT_UPOS and not _is_number(tok):
            if 1 <= tok.head <= len(tokens):
                head = tokens[tok.head - 1]
                if head.upos in _VERB_UPOS:
                    return _lemma(head), _lemma(tok)
            if first_object is None:
                first_object = tok
    if first_verb is not None:
        return _lemma(first_verb), NONE_SLOT
    if first_object is not None:
        return NONE_SLOT, _lemma(first_object)
    return NONE_SLOT, NONE_SLOT


def pair_string(pair: tuple[str, str]) -> str:
    return f"{pair[0]}-{pair[1]}"


def cluster_pair_counts(
    clustering,
    parses: ParseTable,
    corpus: Corpus,
    relations: tuple[str, ...] = DEFAULT_RELATIONS,
) -> dict[int, Counter]:
    """Count (action, object) pairs per cluster; parses must cover the corpus."""
    counts: dict[int, Counter] = {c: Counter() for c in range(clustering.k)}
    for uid, cluster in zip(corpus.ids, clustering.assignments):
        if uid not in parses.sentences:
            raise ValidationError(f"no parse for utterance {uid!r}")
        pair = extract_pair(parses.sentences[uid], relations)
        counts[int(cluster)][pair] += 1
    return counts


@dataclass(frozen=True)
class ClusterLabel:
    label: str
    fallback_used: bool
    coverage: float
    top_pairs: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class LabelSet:
    clusters: dict[int, ClusterLabel]

    def report_dict(self) -> dict:
        return {
            "clusters": {
                str(cid): {
                    "label": cl.label,
                    "fallback_used": cl.fallback_used,
                    "coverage": float(cl.coverage),
                    "top_pairs": [[p, int(c)] for p, c in cl.top_pairs],
                }
                for cid, cl in self.clusters.items()
            }
        }


def _ranked(counter: Counter) -> list[tuple[tuple[str, str], int]]:
    # count desc, then lexicographically smallest pair string
    return sorted(counter.items(), key=lambda kv: (-kv[1], pair_string(kv[0])))


def _marginal_label(counter: Counter) -> str:
    actions = Counter()
    objects = Counter()
    for (action, obj), c in counter.items():
        if action != NONE_SLOT:
            actions[action] += c
        if obj != NONE_SLOT:
            objects[obj] += c
    parts = []
    for marginal in (actions, objects):
        if marginal:
            best = sorted(marginal.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
            parts.append(best)
    return "-".join(parts) if parts else "unlabeled"


def generate_labels(
    clustering,
    parses: ParseTable,
    corpus: Corpus,
    relations: tuple[str, ...] = DEFAULT_RELATIONS,
    top: int = 10,
) -> LabelSet:
    """Label every cluster from its pair counts.

    Complete pairs win by frequency (ties to the lexicographically
    smallest pair string). A cluster with no complete pair concatenates
    its most frequent action and object marginals and flags the fallback.
    Coverage is the share of the cluster's pairs held by its top 3.
    """
    counts = cluster_pair_counts(clustering, parses, corpus, relations)
    labels: dict[int, ClusterLabel] = {}
    for cid in range(clustering.k):
        ranked = _ranked(counts[cid])
        total = sum(c for _, c in ranked)
        complete = [
            (pair, c) for pair, c in ranked if NONE_SLOT not in pair
        ]
        if complete:
            label = pair_string(complete[0][0])
            fallback = False
        else:
            label = _marginal_label(counts[cid])
            fallback = True
        top3 = sum(c for _, c in ranked[:3])
        coverage = top3 / total if total else 0.0
        labels[cid] = ClusterLabel(
            label=label,
            fallback_used=fallback,
            coverage=coverage,
            top_pairs=tuple((pair_string(p), c) for p, c in ranked[:top]),
        )
    return LabelSet(clusters=labels)
