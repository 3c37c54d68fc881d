"""Partition results and recovery metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .spectral import EigenPair


def _check_signs(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.abs(x) == 1):
        raise ValueError(f"{name} entries must be +/-1")
    return x


def mismatch_ratio(truth: np.ndarray, estimate: np.ndarray) -> float:
    """Fraction of disagreeing vertices, minimized over a global sign flip.

    Always in [0, 1/2] when truth is balanced; 0 iff the estimate equals
    truth up to sign.
    """
    truth = _check_signs(truth, "truth")
    estimate = _check_signs(estimate, "estimate")
    if truth.shape != estimate.shape:
        raise ValueError(f"length mismatch: {truth.shape} vs {estimate.shape}")
    direct = int(np.count_nonzero(truth != estimate))
    flipped = len(truth) - direct
    return min(direct, flipped) / len(truth)


def exact_recovery(truth: np.ndarray, estimate: np.ndarray) -> bool:
    """True iff the estimate matches truth exactly, up to a global sign flip."""
    return mismatch_ratio(truth, estimate) == 0.0


@dataclass
class PartitionResult:
    """Output of one detection algorithm on one instance.

    labels is the estimated +/-1 vector; algorithm tags which method
    produced it.  mismatch/exact are filled when ground truth was supplied.
    eigen carries the underlying eigenpair for the spectral methods,
    objective the attained value for the optimization-based ones; tied
    marks brute-force searches whose optimum was not unique, converged the
    solver status for iterative methods.
    """

    labels: np.ndarray
    algorithm: str
    eigen: "EigenPair | None" = None
    mismatch: float | None = None
    exact: bool | None = None
    objective: float | None = None
    tied: bool = False
    converged: bool | None = None

    def score_against(self, truth: np.ndarray) -> "PartitionResult":
        """Fill mismatch/exact against a ground-truth labeling (in place)."""
        self.mismatch = mismatch_ratio(truth, self.labels)
        self.exact = self.mismatch == 0.0
        return self
