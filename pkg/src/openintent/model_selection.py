"""Choosing K: silhouette averaged over points, minus a balance penalty.

The silhouette of point i uses mean Euclidean distance to its own cluster
(excluding itself, divisor |C|-1) and the smallest mean distance to any
other cluster. Singletons score 0, as does any point where both means are
0. The penalty scales the size dispersion (coefficient of variation,
population std) by the total absolute deviation from perfectly even
cluster shares, weighted by lambda. The per-K score is mean silhouette
minus the penalty; the scan keeps the smallest K on ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .clustering import Clustering, KMeansConfig, kmeans_fit
from .data_io import EmbeddingMatrix
from .errors import ValidationError

_CHUNK_CELLS = 4_000_000  # ~32 MB of float64 per distance block


def _as_matrix(embeddings) -> np.ndarray:
    values = embeddings.values if isinstance(embeddings, EmbeddingMatrix) else embeddings
    return np.asarray(values, dtype=np.float64)


def _validate_labels(assignments: np.ndarray, n: int) -> int:
    if assignments.shape != (n,):
        raise ValidationError(f"assignments shape {assignments.shape} != ({n},)")
    distinct = np.unique(assignments).size
    if distinct < 2:
        raise ValidationError("silhouette requires at least 2 clusters")
    if distinct == n:
        raise ValidationError("silhouette undefined when every cluster is a singleton")
    return int(assignments.max()) + 1


def silhouette_mean(
    X,
    assignments: np.ndarray,
    *,
    sample: Optional[int] = None,
    seed: int = 0,
) -> float:
    """Mean silhouette over all points, or over a seeded uniform subsample.

    Sampled points still measure distances against the full corpus, so
    sample=n reproduces the exact value bit for bit.
    """
    X = _as_matrix(X)
    assignments = np.asarray(assignments, dtype=np.int64)
    n = X.shape[0]
    k = _validate_labels(assignments, n)

    if sample is None or sample >= n:
        idx = np.arange(n)
    else:
        if sample < 1:
            raise ValidationError(f"sample must be >= 1, got {sample}")
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(n, size=sample, replace=False))

    sizes = np.bincount(assignments, minlength=k).astype(np.float64)
    onehot = np.zeros((n, k), dtype=np.float64)
    onehot[np.arange(n), assignments] = 1.0

    sq_all = np.einsum("ij,ij->i", X, X)
    scores = np.empty(idx.size, dtype=np.float64)
    step = max(1, _CHUNK_CELLS // max(n, 1))
    for start in range(0, idx.size, step):
        rows = idx[start : start + step]
        block = X[rows]
        d2 = sq_all[rows][:, None] - 2.0 * (block @ X.T) + sq_all[None, :]
        np.maximum(d2, 0.0, out=d2)
        d2[np.arange(rows.size), rows] = 0.0  # self-distance exactly zero
        dist = np.sqrt(d2)

        sums = dist @ onehot  # (rows, k) summed distance to each cluster
        own = assignments[rows]
        own_sizes = sizes[own]
        with np.errstate(invalid="ignore", divide="ignore"):
            a = sums[np.arange(rows.size), own] / (own_sizes - 1.0)
            means = sums / sizes[None, :]
        means[:, sizes == 0] = np.inf
        means[np.arange(rows.size), own] = np.inf
        b = means.min(axis=1)

        denom = np.maximum(a, b)
        with np.errstate(invalid="ignore", divide="ignore"):
            s = (b - a) / denom
        s[own_sizes <= 1] = 0.0
        s[denom == 0] = 0.0
        scores[start : start + rows.size] = s
    return float(scores.mean())


def balance_penalty(sizes, lam: float = 0.5) -> float:
    """lam * (std/mean of sizes) * sum_k |share_k - 1/K|, population std."""
    sizes = np.asarray(sizes, dtype=np.float64)
    if sizes.ndim != 1 or sizes.size < 1:
        raise ValidationError("sizes must be a non-empty 1-D array")
    if (sizes <= 0).any():
        raise ValidationError("cluster sizes must be positive")
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    total = sizes.sum()
    kk = sizes.size
    mu = total / kk
    sigma = float(np.sqrt(((sizes - mu) ** 2).mean()))
    deviation = float(np.abs(sizes / total - 1.0 / kk).sum())
    return float(lam * (sigma / mu) * deviation)


def balanced_score(
    X,
    assignments: np.ndarray,
    lam: float = 0.5,
    *,
    sample: Optional[int] = None,
    seed: int = 0,
) -> tuple[float, float, float]:
    """Returns (silhouette, penalty, silhouette - penalty) for one partition."""
    assignments = np.asarray(assignments, dtype=np.int64)
    sil = silhouette_mean(X, assignments, sample=sample, seed=seed)
    counts = np.bincount(assignments)
    pen = balance_penalty(counts[counts > 0], lam)
    return sil, pen, sil - pen


@dataclass(frozen=True)
class ScorePoint:
    k: int
    silhouette: float
    penalty: float
    balanced: float


@dataclass(frozen=True)
class ScoreCurve:
    """Per-K scores from a scan; Ks whose fit failed are listed separately."""

    points: tuple[ScorePoint, ...]
    failed: tuple[int, ...] = ()

    def csv_rows(self) -> tuple[list[str], list[list]]:
        header = ["k", "silhouette", "penalty", "balanced"]
        rows = [[p.k, p.silhouette, p.penalty, p.balanced] for p in self.points]
        return header, rows

    def report_dict(self) -> dict:
        return {
            "points": [
                {
                    "k": p.k,
                    "silhouette": float(p.silhouette),
                    "penalty": float(p.penalty),
                    "balanced": float(p.balanced),
                }
                for p in self.points
            ],
            "failed": [int(k) for k in self.failed],
        }


@dataclass(frozen=True)
class SelectionConfig:
    k_min: int
    k_max: int
    lam: float = 0.5
    seed: int = 0
    restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-6
    normalize: bool = False
    sample: Optional[int] = None

    def __post_init__(self):
        if self.k_min < 2:
            raise ValidationError(f"k-min must be >= 2, got {self.k_min}")
        if self.k_min > self.k_max:
            raise ValidationError(f"k-min exceeds k-max ({self.k_min} > {self.k_max})")
        if self.lam < 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lam}")
        if self.sample is not None and self.sample < 1:
            raise ValidationError(f"sample must be >= 1, got {self.sample}")


@dataclass(frozen=True)
class SelectionResult:
    best_k: int
    curve: ScoreCurve
    clustering: Clustering  # the cached fit for best_k, not a refit


def select_k(embeddings, config: SelectionConfig) -> SelectionResult:
    """Scan K over [k_min, k_max], score each fit, keep the best balanced score.

    Ks that fail to produce a valid partition are skipped and recorded.
    Ties break toward the smallest K. The returned clustering is the run
    that produced the winning score.
    """
    X = _as_matrix(embeddings)
    n = X.shape[0]
    if config.k_max > n - 1:
        raise ValidationError(
            f"k-max must be at most n-1 for silhouette (k_max={config.k_max}, n={n})"
        )
    if config.normalize:
        from .clustering import normalize_rows

        X = normalize_rows(X)  # score in the same space the fit ran in

    points: list[ScorePoint] = []
    failed: list[int] = []
    best: Optional[tuple[float, int, Clustering]] = None
    for k in range(config.k_min, config.k_max + 1):
        km = KMeansConfig(
            k=k,
            seed=config.seed,
            restarts=config.restarts,
            max_iters=config.max_iters,
            tol=config.tol,
            normalize=config.normalize,
        )
        try:
            clustering = kmeans_fit(embeddings, km)
            sil, pen, bal = balanced_score(
                X, clustering.assignments, config.lam, sample=config.sample, seed=config.seed
            )
        except ValidationError:
            failed.append(k)
            continue
        points.append(ScorePoint(k=k, silhouette=sil, penalty=pen, balanced=bal))
        if best is None or bal > best[0]:
            best = (bal, k, clustering)
    if best is None:
        raise ValidationError("no k in range produced a valid clustering")
    curve = ScoreCurve(points=tuple(points), failed=tuple(failed))
    return SelectionResult(best_k=best[1], curve=curve, clustering=best[2])
