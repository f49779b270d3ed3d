"""Synthetic embedding generators for tests and demos."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def make_blobs(
    sizes,
    centers,
    noise: float = 1.0,
    seed: int = 0,
    min_sep: float = 10.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw Gaussian blobs around the given centers.

    Centers are rescaled outward if any pair sits closer than
    ``min_sep * noise``, so the blobs stay well separated by construction.
    Returns (points, labels) with one integer label per row.
    """
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or len(sizes) != centers.shape[0]:
        raise ValidationError("need one center per blob size")
    if len(sizes) >= 2:
        diffs = centers[:, None, :] - centers[None, :, :]
        dist = np.sqrt((diffs**2).sum(-1))
        dmin = dist[~np.eye(len(sizes), dtype=bool)].min()
        if dmin <= 0:
            raise ValidationError("blob centers must be distinct")
        if dmin < min_sep * noise:
            centers = centers * (min_sep * noise / dmin)
    rng = np.random.default_rng(seed)
    parts = []
    labels = []
    for i, (m, c) in enumerate(zip(sizes, centers)):
        parts.append(c + rng.normal(0.0, noise, size=(int(m), centers.shape[1])))
        labels.append(np.full(int(m), i, dtype=np.int64))
    return np.concatenate(parts), np.concatenate(labels)


def make_imbalance_trap(seed: int = 7) -> tuple[np.ndarray, np.ndarray]:
    """Three blobs built so plain silhouette prefers merging the two small
    near ones into the big far one's complement (argmax at K=2) while the
    balance-penalized score recovers K=3: sizes 60/60/30 at (0,0), (0,6),
    (100,0) with sigma 0.5."""
    return make_blobs(
        sizes=(60, 60, 30),
        centers=((0.0, 0.0), (0.0, 6.0), (100.0, 0.0)),
        noise=0.5,
        seed=seed,
        min_sep=0.0,  # placement is the point, keep it as constructed
    )
