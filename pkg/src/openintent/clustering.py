"""K-means over the embedding matrix.

Lloyd iterations with k-means++ seeding, multiple restarts, and a repair
pass so no returned cluster is empty. All arithmetic in float64; the
argmin tie goes to the lowest cluster index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data_io import EmbeddingMatrix
from .errors import ValidationError


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    seed: int = 0
    restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-6
    normalize: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValidationError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ValidationError(f"tol must be >= 0, got {self.tol}")


@dataclass(frozen=True)
class Clustering:
    """A fitted partition: every cluster non-empty, centroid = mean of members."""

    k: int
    seed: int
    inertia: float
    iterations: int
    assignments: np.ndarray  # (n,) int64 in [0, k)
    centroids: np.ndarray  # (k, d) float64

    def report_dict(self, ids: tuple[str, ...], emit_centroids: bool = False) -> dict:
        if len(ids) != len(self.assignments):
            raise ValidationError(
                f"{len(ids)} ids for {len(self.assignments)} assignments"
            )
        out = {
            "k": int(self.k),
            "seed": int(self.seed),
            "inertia": float(self.inertia),
            "iterations": int(self.iterations),
            "assignments": {uid: int(c) for uid, c in zip(ids, self.assignments)},
        }
        if emit_centroids:
            out["centroids"] = [[float(v) for v in row] for row in self.centroids]
        return out


def _as_matrix(embeddings) -> np.ndarray:
    values = embeddings.values if isinstance(embeddings, EmbeddingMatrix) else embeddings
    return np.asarray(values, dtype=np.float64)


def _pairwise_sq(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    # ||x - c||^2 via the inner-product expansion; clamp the fp noise
    d2 = (
        (X * X).sum(axis=1)[:, None]
        - 2.0 * (X @ C.T)
        + (C * C).sum(axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _exact_residuals(X: np.ndarray, C: np.ndarray, assign: np.ndarray) -> np.ndarray:
    diff = X - C[assign]
    return np.einsum("ij,ij->i", diff, diff)


def kmeanspp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seed centroids by k-means++: each next centroid drawn with probability
    proportional to squared distance from the nearest chosen one."""
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centroids[0] = X[first]
    d2 = _exact_residuals(X, centroids[:1], np.zeros(n, dtype=np.int64))
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))  # all mass on chosen points already
        centroids[j] = X[idx]
        d2 = np.minimum(d2, _exact_residuals(X, centroids[j : j + 1], np.zeros(n, dtype=np.int64)))
    return centroids


def lloyd_step(X: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """One assignment + update sweep.

    Returns (assignments, new_centroids, inertia) where inertia is the SSE
    of the assignments against the *input* centroids. A cluster that ends
    up empty gets its new centroid reseeded to the point farthest from its
    assigned centroid (successive empties take successively farthest points).
    """
    X = np.asarray(X, dtype=np.float64)
    centroids = np.asarray(centroids, dtype=np.float64)
    k = centroids.shape[0]
    d2 = _pairwise_sq(X, centroids)
    assign = np.argmin(d2, axis=1)  # argmin takes the lowest index on ties
    residuals = _exact_residuals(X, centroids, assign)
    inertia = float(residuals.sum())

    sizes = np.bincount(assign, minlength=k)
    onehot = np.zeros((X.shape[0], k), dtype=np.float64)
    onehot[np.arange(X.shape[0]), assign] = 1.0
    sums = onehot.T @ X
    new_centroids = np.where(
        sizes[:, None] > 0, sums / np.maximum(sizes, 1)[:, None], 0.0
    )
    if (sizes == 0).any():
        spare = residuals.copy()
        for j in np.flatnonzero(sizes == 0):
            far = int(np.argmax(spare))
            new_centroids[j] = X[far]
            spare[far] = -1.0
    return assign, new_centroids, inertia


def _repair_empty(X: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    """Move farthest points out of multi-member clusters until none is empty."""
    assign = assign.copy()
    sizes = np.bincount(assign, minlength=k)
    while (sizes == 0).any():
        centroids = _means(X, assign, k, sizes)
        residuals = _exact_residuals(X, centroids, assign)
        residuals[sizes[assign] <= 1] = -1.0  # never empty a singleton
        empty = int(np.flatnonzero(sizes == 0)[0])
        donor = int(np.argmax(residuals))
        if residuals[donor] < 0:
            raise ValidationError(f"cannot fill {int((sizes == 0).sum())} empty clusters")
        sizes[assign[donor]] -= 1
        assign[donor] = empty
        sizes[empty] += 1
    return assign


def _means(X: np.ndarray, assign: np.ndarray, k: int, sizes: np.ndarray) -> np.ndarray:
    onehot = np.zeros((X.shape[0], k), dtype=np.float64)
    onehot[np.arange(X.shape[0]), assign] = 1.0
    return (onehot.T @ X) / np.maximum(sizes, 1)[:, None]


def normalize_rows(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    norms[norms == 0] = 1.0  # zero vectors pass through unchanged
    return X / norms


def kmeans_fit(embeddings, config: KMeansConfig) -> Clustering:
    """Fit k-means with `config.restarts` k-means++ starts; keep the lowest inertia.

    Deterministic for a given (data, config): restart seeds derive from
    config.seed. The returned inertia is recomputed against the returned
    centroids and assignments.
    """
    X = _as_matrix(embeddings)
    n = X.shape[0]
    if config.k > n:
        raise ValidationError(f"k exceeds corpus size: k={config.k}, n={n}")
    if config.normalize:
        X = normalize_rows(X)

    master = np.random.default_rng(config.seed)
    subseeds = master.integers(0, 2**63 - 1, size=config.restarts)

    best: Optional[tuple[float, np.ndarray, int]] = None
    for sub in subseeds:
        rng = np.random.default_rng(int(sub))
        centroids = kmeanspp_init(X, config.k, rng)
        prev_assign = None
        iterations = 0
        for _ in range(config.max_iters):
            assign, new_centroids, _ = lloyd_step(X, centroids)
            iterations += 1
            shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
            centroids = new_centroids
            if prev_assign is not None and np.array_equal(assign, prev_assign):
                break
            if shift <= config.tol:
                break
            prev_assign = assign
        # final assignment against the converged centroids
        assign, _, inertia = lloyd_step(X, centroids)
        if best is None or inertia < best[0]:
            best = (inertia, assign, iterations)

    assert best is not None
    _, assign, iterations = best
    assign = _repair_empty(X, assign, config.k)
    sizes = np.bincount(assign, minlength=config.k)
    centroids = _means(X, assign, config.k, sizes)
    inertia = float(_exact_residuals(X, centroids, assign).sum())
    return Clustering(
        k=config.k,
        seed=config.seed,
        inertia=inertia,
        iterations=iterations,
        assignments=assign.astype(np.int64),
        centroids=centroids,
    )
