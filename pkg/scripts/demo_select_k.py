#!/usr/bin/env python3
"""Demo: balanced-score K selection on synthetic blobs.

Runs the K scan twice — once on well-separated blobs where the balanced
score and raw silhouette agree, and once on the imbalance trap where the
raw silhouette plateaus below the true K and only the balanced score
recovers it. Prints both score curves.

Usage: python3 scripts/demo_select_k.py [--seed 0]
"""

import argparse

import numpy as np

from openintent.model_selection import SelectionConfig, select_k
from openintent.synth import make_blobs, make_imbalance_trap


def print_curve(title: str, true_k: int, X: np.ndarray, config: SelectionConfig) -> None:
    result = select_k(X, config)
    print(f"\n{title} (true K = {true_k})")
    print(f"{'k':>3}  {'silhouette':>11}  {'penalty':>8}  {'balanced':>9}")
    for point in result.curve.points:
        marker = "  <-- chosen" if point.k == result.best_k else ""
        print(
            f"{point.k:>3}  {point.silhouette:>11.4f}  "
            f"{point.penalty:>8.4f}  {point.balanced:>9.4f}{marker}"
        )
    best_raw = max(result.curve.points, key=lambda p: p.silhouette).k
    print(f"argmax silhouette = {best_raw}, argmax balanced = {result.best_k}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    centers = rng.normal(scale=10.0, size=(7, 16))
    sizes = [29, 29, 29, 29, 28, 28, 28]
    X, _ = make_blobs(sizes, centers, noise=1.0, seed=args.seed)
    print_curve(
        "Seven separated blobs",
        7,
        X,
        SelectionConfig(k_min=2, k_max=12, lam=0.5, seed=args.seed),
    )

    X, _ = make_imbalance_trap()
    print_curve(
        "Imbalance trap (one far small cluster)",
        3,
        X,
        SelectionConfig(k_min=2, k_max=6, lam=0.5, seed=args.seed),
    )


if __name__ == "__main__":
    main()
