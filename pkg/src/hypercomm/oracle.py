"""Likelihood oracles and Monte Carlo tail estimation.

For a fixed hypergraph the log-likelihood of a balanced labeling differs
from a labeling-independent constant by a weighted count of in-cluster
edges, with per-arity weight log(p_m (1-q_m) / (q_m (1-p_m))); maximizing
that score over balanced labelings is exact maximum likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import SizeLimitError
from .metrics import PartitionResult
from .model import Hypergraph, ModelSpec, _check_labels, edge_probabilities
from .thresholds import RateSpec

MLE_LIMIT = 16


def in_cluster_counts(h: Hypergraph, labels: np.ndarray) -> dict[int, int]:
    """Per-arity count of edges whose vertices all share one label."""
    labels = _check_labels(labels, h.n)
    counts = {}
    for m, edges in h.layers.items():
        if len(edges):
            sgn = labels[edges]
            counts[m] = int(np.all(sgn == sgn[:, :1], axis=1).sum())
        else:
            counts[m] = 0
    return counts


def _log_odds(spec: ModelSpec, m: int) -> float:
    probs = edge_probabilities(spec, m)
    if not (0.0 < probs.q and probs.p < 1.0):
        raise ValueError(
            f"layer {m}: likelihood weight needs probabilities strictly inside (0, 1)"
        )
    return math.log(probs.p * (1.0 - probs.q) / (probs.q * (1.0 - probs.p)))


def f_score(labels: np.ndarray, h: Hypergraph, spec: ModelSpec) -> float:
    """Monotone transform of the log-likelihood of a balanced labeling.

    Sum over layers of log(p_m(1-q_m)/(q_m(1-p_m))) times the in-cluster
    edge count; invariant under a global sign flip.  Requires assortative
    rates and unclamped probabilities.
    """
    if not spec.assortative:
        raise ValueError("likelihood score requires a_m > b_m on every layer")
    counts = in_cluster_counts(h, labels)
    return math.fsum(_log_odds(spec, m) * counts.get(m, 0) for m in spec.arities)


def brute_force_mle(h: Hypergraph, spec: ModelSpec) -> PartitionResult:
    """Exact maximum-likelihood balanced bisection by enumeration (n <= 16).

    Fixes the first label to +1 (the score is sign-symmetric); ties go to
    the lexicographically smallest vector and are flagged.
    """
    n = h.n
    if n > MLE_LIMIT:
        raise SizeLimitError(f"brute-force MLE capped at n={MLE_LIMIT}, got {n}")
    if n % 2 != 0:
        raise ValueError("balanced labelings need even n")
    best: float | None = None
    winner: tuple[int, ...] | None = None
    tied = False
    for rest in combinations(range(1, n), n // 2 - 1):
        z = np.full(n, -1, dtype=np.int64)
        z[0] = 1
        z[list(rest)] = 1
        score = f_score(z, h, spec)
        key = tuple(int(v) for v in z)
        if best is None or score > best:
            best, winner, tied = score, key, False
        elif score == best:
            tied = True
            if key < winner:
                winner = key
    return PartitionResult(
        labels=np.array(winner, dtype=np.int64),
        algorithm="mle-oracle",
        objective=float(best),
        tied=tied,
    )


@dataclass(frozen=True)
class TailEstimate:
    """Monte Carlo estimate of a lower-tail exponent.

    value is -log(hit fraction)/log_n; when no sample hits, value is the
    same expression at one hit (a lower bound on the true exponent) and
    lower_bound is set.
    """

    value: float
    std_error: float
    hits: int
    samples: int
    lower_bound: bool


def regime_binomials(
    spec: RateSpec, g_scale: float, log_n: float, subset_count: int
) -> list[tuple[int, float]]:
    """Binomial parameters matching the rate problem on a finite instance:
    term i gets N_i = round(rho_i * g_scale * subset_count) trials with
    success probability alpha_i * log_n / subset_count."""
    out = []
    for term in spec.terms:
        n_i = round(term.rho * g_scale * subset_count)
        p_i = term.alpha * log_n / subset_count
        if not 0.0 <= p_i <= 1.0:
            raise ValueError(
                f"subset_count={subset_count} too small: success probability {p_i:.3g}"
            )
        out.append((int(n_i), p_i))
    return out


def tail_estimate(
    spec: RateSpec,
    g_scale: float,
    log_n: float,
    samples: int,
    rng: np.random.Generator,
    binomials: Sequence[tuple[int, float]],
) -> TailEstimate:
    """Estimate the exponent of P[sum_i c_i Y_i <= delta * g_scale * log_n]
    with independent Y_i ~ Binomial(N_i, p_i) supplied by the caller.

    Needs samples >= 10^4 for the normal-theory standard error of the log
    hit fraction to mean anything.
    """
    if samples < 10_000:
        raise ValueError(f"samples={samples} too small; need at least 10000")
    if len(binomials) != len(spec.terms):
        raise ValueError("one (N, p) pair per rate term is required")
    threshold = spec.delta * g_scale * log_n
    total = np.zeros(samples)
    for term, (n_i, p_i) in zip(spec.terms, binomials):
        if n_i < 0 or not 0.0 <= p_i <= 1.0:
            raise ValueError(f"bad binomial parameters ({n_i}, {p_i})")
        total += term.c * rng.binomial(n_i, p_i, size=samples)
    hits = int(np.count_nonzero(total <= threshold))
    if hits == 0:
        return TailEstimate(
            value=math.log(samples) / log_n,
            std_error=math.inf,
            hits=0,
            samples=samples,
            lower_bound=True,
        )
    frac = hits / samples
    value = -math.log(frac) / log_n
    std_error = math.sqrt((1.0 - frac) / (samples * frac)) / log_n
    return TailEstimate(
        value=value, std_error=std_error, hits=hits, samples=samples, lower_bound=False
    )
