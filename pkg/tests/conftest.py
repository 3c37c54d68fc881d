"""Shared fixtures and small numeric helpers for the test suite."""

from __future__ import annotations

import math

import numpy as np

from hypercomm import Hypergraph, ModelSpec, sample_hsbm


def balanced_labels(n: int) -> np.ndarray:
    """First half +1, second half -1."""
    labels = np.ones(n, dtype=np.int64)
    labels[n // 2 :] = -1
    return labels


def block_matrix(n: int, p: float, q: float, labels: np.ndarray) -> np.ndarray:
    """Hollow matrix with entry p on same-label pairs and q across."""
    same = np.equal.outer(labels, labels)
    A = np.where(same, p, q).astype(float)
    np.fill_diagonal(A, 0.0)
    return A


def single_layer(n: int, m: int, a: float, b: float) -> ModelSpec:
    return ModelSpec(n=n, layers={m: (a, b)})


def rate_for_probability(n: int, m: int, prob: float) -> float:
    """The rate a_m that puts this layer's edge probability at prob."""
    return prob * math.comb(n - 1, m - 1) / math.log(n)


def sample(spec: ModelSpec, seed: int) -> tuple[Hypergraph, np.ndarray]:
    """Draw one instance on the canonical balanced labeling."""
    truth = balanced_labels(spec.n)
    h = sample_hsbm(spec, truth, np.random.default_rng(seed))
    return h, truth


def rank_correlation(x, y) -> float:
    """Spearman rank correlation with average ranks on ties."""

    def ranks(v):
        v = np.asarray(v, dtype=float)
        order = np.argsort(v, kind="stable")
        r = np.empty(len(v))
        r[order] = np.arange(1, len(v) + 1)
        # average the ranks within each tied group
        for val in np.unique(v):
            mask = v == val
            if mask.sum() > 1:
                r[mask] = r[mask].mean()
        return r

    rx, ry = ranks(x), ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt((rx**2).sum() * (ry**2).sum())
    if denom == 0:
        return 0.0
    return float((rx * ry).sum() / denom)
