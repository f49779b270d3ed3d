"""Scoring a predicted partition against gold intent labels.

Clusters are matched one-to-one to gold intents by maximizing total
overlap (Hungarian assignment on the contingency matrix); gold intents
left without a cluster score 0 across the board. Macro scores are
unweighted means over gold intents. NMI uses natural logs with the
arithmetic mean of the entropies as normalizer; ARI is the standard
pair-counting form. Both are computed so identical partitions score
exactly 1.0.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .data_io import Corpus
from .errors import ValidationError


def contingency_matrix(pred, gold) -> tuple[np.ndarray, list]:
    """Counts matrix with one row per predicted cluster (0..max), one column
    per gold label in sorted order. Returns (matrix, sorted gold labels)."""
    pred = np.asarray(pred, dtype=np.int64)
    if len(pred) != len(gold):
        raise ValidationError(f"{len(pred)} predictions for {len(gold)} gold labels")
    if len(pred) == 0:
        raise ValidationError("cannot evaluate an empty partition")
    names = sorted(set(gold))
    col = {g: j for j, g in enumerate(names)}
    k = int(pred.max()) + 1
    matrix = np.zeros((k, len(names)), dtype=np.int64)
    for p, g in zip(pred, gold):
        matrix[p, col[g]] += 1
    return matrix, names


def hungarian_match(matrix: np.ndarray) -> dict[int, int]:
    """Injective cluster-to-intent mapping maximizing matched counts.

    Pairs with zero overlap are dropped: they contribute nothing and
    would otherwise bind arbitrary leftovers together.
    """
    matrix = np.asarray(matrix)
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    return {int(r): int(c) for r, c in zip(rows, cols) if matrix[r, c] > 0}


def prf_report(
    matrix: np.ndarray, mapping: dict[int, int], names: list
) -> tuple[dict, dict]:
    """Per-intent precision/recall/F1 plus their unweighted macro means."""
    row_sums = matrix.sum(axis=1)
    col_sums = matrix.sum(axis=0)
    by_gold = {g: p for p, g in mapping.items()}
    per_intent: dict = {}
    for j, name in enumerate(names):
        p = by_gold.get(j)
        if p is None:
            precision = recall = f1 = 0.0
        else:
            tp = float(matrix[p, j])
            precision = tp / row_sums[p] if row_sums[p] else 0.0
            recall = tp / col_sums[j] if col_sums[j] else 0.0
            f1 = (
                2.0 * precision * recall / (precision + recall)
                if precision + recall > 0
                else 0.0
            )
        per_intent[name] = {"precision": precision, "recall": recall, "f1": f1}
    macro = {
        key: float(np.mean([per_intent[name][key] for name in names]))
        for key in ("precision", "recall", "f1")
    }
    return per_intent, macro


def _entropy_terms(counts: Counter, n: int) -> list[float]:
    return [(c / n) * math.log(c / n) for _, c in sorted(counts.items())]


def nmi(labels_a, labels_b) -> float:
    """Mutual information over natural logs, normalized by the arithmetic
    mean of the two entropies. Identical partitions score exactly 1.0."""
    if len(labels_a) != len(labels_b):
        raise ValidationError("label sequences differ in length")
    n = len(labels_a)
    if n == 0:
        raise ValidationError("cannot score empty label sequences")
    ca = Counter(labels_a)
    cb = Counter(labels_b)
    h_a = -math.fsum(_entropy_terms(ca, n))
    h_b = -math.fsum(_entropy_terms(cb, n))
    denom = (h_a + h_b) / 2.0
    if denom == 0.0:
        return 1.0  # both partitions trivial, hence identical
    joint = Counter(zip(labels_a, labels_b))
    terms = []
    for (a, b), c in sorted(joint.items()):
        p = c / n
        terms.append(p * (math.log(p) - math.log(ca[a] / n) - math.log(cb[b] / n)))
    return math.fsum(terms) / denom


def ari(labels_a, labels_b) -> float:
    """Adjusted Rand index by pair counting, exact integer combinatorics.

    Returns 0.0 by convention when the adjustment denominator vanishes
    (expected index equals maximum index, e.g. both partitions are all
    singletons). Identical non-trivial partitions score exactly 1.0.
    """
    if len(labels_a) != len(labels_b):
        raise ValidationError("label sequences differ in length")
    n = len(labels_a)
    if n == 0:
        raise ValidationError("cannot score empty label sequences")
    joint = Counter(zip(labels_a, labels_b))
    ca = Counter(labels_a)
    cb = Counter(labels_b)
    index = sum(math.comb(c, 2) for c in joint.values())
    sum_a = sum(math.comb(c, 2) for c in ca.values())
    sum_b = sum(math.comb(c, 2) for c in cb.values())
    total = math.comb(n, 2)
    if total == 0:
        return 0.0
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2
    denom = max_index - expected
    if denom == 0.0:
        return 0.0
    return (index - expected) / denom


@dataclass(frozen=True)
class EvalReport:
    mapping: dict[int, int]  # predicted cluster -> gold column index
    gold_names: list
    per_intent: dict
    macro: dict
    nmi: float
    ari: float
    contingency: np.ndarray

    def report_dict(self) -> dict:
        return {
            "mapping": {str(p): self.gold_names[g] for p, g in self.mapping.items()},
            "per_intent": {
                str(name): dict(scores) for name, scores in self.per_intent.items()
            },
            "macro": dict(self.macro),
            "nmi": float(self.nmi),
            "ari": float(self.ari),
            "contingency": {
                "gold_labels": [str(g) for g in self.gold_names],
                "counts": [[int(v) for v in row] for row in self.contingency],
            },
        }


def evaluate(clustering, corpus: Corpus) -> EvalReport:
    """Score a clustering against the corpus gold labels."""
    if not corpus.has_gold:
        raise ValidationError("gold labels required for evaluation")
    pred = np.asarray(clustering.assignments, dtype=np.int64)
    gold = corpus.gold_labels()
    matrix, names = contingency_matrix(pred, gold)
    mapping = hungarian_match(matrix)
    per_intent, macro = prf_report(matrix, mapping, names)
    return EvalReport(
        mapping=mapping,
        gold_names=names,
        per_intent=per_intent,
        macro=macro,
        nmi=nmi(list(pred), gold),
        ari=ari(list(pred), gold),
        contingency=matrix,
    )
