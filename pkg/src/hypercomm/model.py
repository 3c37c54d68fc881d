"""Two-community random hypergraph model.

A model places, independently for each arity m in its layer set, every
m-subset of the n vertices into the hypergraph with probability p_m when all
m vertices carry the same community label and q_m otherwise.  The per-layer
rates (a_m, b_m) set these probabilities on the logarithmic density scale

    p_m = a_m * ln(n) / C(n-1, m-1),    q_m = b_m * ln(n) / C(n-1, m-1),

clamped into [0, 1].  Communities are the two balanced halves of a +/-1
label vector.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import SizeLimitError

log = logging.getLogger("hypercomm.model")

# Largest edge class the dense fallback sampler may enumerate outright.
_ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class ModelSpec:
    """Model parameters: vertex count and per-arity rate pairs.

    Parameters
    ----------
    n : int
        Number of vertices; even and at least twice the largest arity.
    layers : dict[int, tuple[float, float]]
        Maps arity m (>= 2) to its rate pair (a_m, b_m), both > 0.
    """

    n: int
    layers: dict[int, tuple[float, float]] = field(hash=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise ValueError("n must be an integer")
        if not self.layers:
            raise ValueError("at least one layer is required")
        norm = {}
        for m, rates in self.layers.items():
            m = int(m)
            if m < 2:
                raise ValueError(f"arity {m} < 2")
            a, b = (float(rates[0]), float(rates[1]))
            if not (a > 0 and b > 0):
                raise ValueError(f"layer {m}: rates must be positive, got ({a}, {b})")
            if m in norm:
                raise ValueError(f"duplicate arity {m}")
            norm[m] = (a, b)
        object.__setattr__(self, "layers", norm)
        if self.n % 2 != 0 or self.n < 2 * max(norm):
            raise ValueError(
                f"n={self.n} must be even and >= {2 * max(norm)} (twice the largest arity)"
            )

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(sorted(self.layers))

    @property
    def assortative(self) -> bool:
        """True when every layer has a_m > b_m."""
        return all(a > b for a, b in self.layers.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layers": {str(m): {"a": a, "b": b} for m, (a, b) in sorted(self.layers.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        try:
            layers = {int(m): (v["a"], v["b"]) for m, v in d["layers"].items()}
            return cls(n=int(d["n"]), layers=layers)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed model spec: {exc}") from exc


@dataclass(frozen=True)
class LayerProbabilities:
    """Edge probabilities of one layer; clamped marks p or q hitting 1."""

    p: float
    q: float
    clamped: bool


def edge_probabilities(spec: ModelSpec, m: int) -> LayerProbabilities:
    """Per-subset probabilities (p_m, q_m) of arity-m edges under spec.

    Values a_m*ln(n)/C(n-1, m-1) and b_m*ln(n)/C(n-1, m-1) clamped to at
    most 1; clamping is reported on the result and logged as a warning.
    """
    if m not in spec.layers:
        raise ValueError(f"arity {m} not in spec (has {spec.arities})")
    a, b = spec.layers[m]
    scale = math.log(spec.n) / math.comb(spec.n - 1, m - 1)
    p_raw, q_raw = a * scale, b * scale
    clamped = p_raw > 1.0 or q_raw > 1.0
    if clamped:
        log.warning(
            "layer m=%d: probability clamped to 1 (raw p=%.6g, q=%.6g)", m, p_raw, q_raw
        )
    return LayerProbabilities(p=min(1.0, p_raw), q=min(1.0, q_raw), clamped=clamped)


def sample_labels(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random balanced +/-1 label vector of length n (even, > 0)."""
    if n <= 0 or n % 2 != 0:
        raise ValueError(f"n={n} must be positive and even")
    labels = np.full(n, -1, dtype=np.int64)
    labels[rng.permutation(n)[: n // 2]] = 1
    return labels


def _check_labels(labels: np.ndarray, n: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (n,):
        raise ValueError(f"labels must have shape ({n},), got {labels.shape}")
    if not np.all(np.abs(labels) == 1):
        raise ValueError("labels must be +/-1")
    if int(labels.sum()) != 0:
        raise ValueError("labels must be balanced (equal counts of +1 and -1)")
    return labels


@dataclass
class Hypergraph:
    """Vertices 0..n-1 plus one edge list per arity.

    layers maps arity m to an int array of shape (k, m); each row is a
    strictly increasing vertex tuple, rows are lexicographically sorted and
    distinct.  labels optionally carries the planted balanced +/-1 vector.
    """

    n: int
    layers: dict[int, np.ndarray]
    labels: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        norm = {}
        for m, edges in self.layers.items():
            m = int(m)
            if m < 2 or m > self.n:
                raise ValueError(f"arity {m} out of range for n={self.n}")
            arr = np.asarray(edges, dtype=np.int64)
            if arr.size == 0:
                arr = arr.reshape(0, m)
            if arr.ndim != 2 or arr.shape[1] != m:
                raise ValueError(f"layer {m}: edges must be rows of {m} vertices")
            if arr.size and (arr.min() < 0 or arr.max() >= self.n):
                raise ValueError(f"layer {m}: vertex out of range [0, {self.n})")
            if np.any(arr[:, 1:] <= arr[:, :-1]):
                raise ValueError(f"layer {m}: edge rows must be strictly increasing")
            canon = arr[np.lexsort(arr.T[::-1])] if len(arr) else arr
            if len(canon) > 1 and not np.all(np.any(canon[1:] != canon[:-1], axis=1)):
                raise ValueError(f"layer {m}: duplicate edges")
            if not np.array_equal(arr, canon):
                raise ValueError(f"layer {m}: edges must be lexicographically sorted")
            norm[m] = arr
        self.layers = norm
        if self.labels is not None:
            self.labels = _check_labels(self.labels, self.n)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(sorted(self.layers))

    def edge_count(self) -> int:
        return sum(len(e) for e in self.layers.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layers": [
                {"m": m, "edges": self.layers[m].tolist()} for m in sorted(self.layers)
            ],
            "labels": None if self.labels is None else self.labels.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Hypergraph":
        try:
            layers = {int(entry["m"]): entry["edges"] for entry in d["layers"]}
            labels = d.get("labels")
            return cls(n=int(d["n"]), layers=layers, labels=None if labels is None else labels)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed hypergraph: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        return cls.from_dict(json.loads(text))


def _canonical_rows(rows: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically; rows assumed distinct."""
    if len(rows) <= 1:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def _draw_distinct_subsets(
    k: int,
    m: int,
    draw_batch,
    rng: np.random.Generator,
) -> np.ndarray:
    """k distinct sorted m-subsets, uniformly without replacement.

    draw_batch(count) must return a (count, m) int array whose rows are
    independent uniform draws from the target subset class (rows sorted
    ascending, entries distinct).  Rejection keeps the first k distinct rows
    in arrival order, which is exactly sampling without replacement.
    """
    if k == 0:
        return np.empty((0, m), dtype=np.int64)
    seen: set[bytes] = set()
    rows: list[np.ndarray] = []
    batch = max(int(k * 1.2) + 8, 64)
    while len(rows) < k:
        for row in draw_batch(batch):
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                rows.append(row)
                if len(rows) == k:
                    break
    return np.array(rows, dtype=np.int64)


def _enumerate_class(
    n: int, m: int, labels: np.ndarray, in_cluster: bool
) -> np.ndarray:
    size = math.comb(n, m)
    if size > _ENUMERATION_LIMIT:
        raise SizeLimitError(
            f"edge class too dense to sample: would enumerate C({n},{m})={size} subsets"
        )
    if in_cluster:
        rows = []
        for side in (1, -1):
            members = np.flatnonzero(labels == side)
            rows.extend(combinations(members.tolist(), m))
    else:
        rows = [
            c
            for c in combinations(range(n), m)
            if not np.all(labels[list(c)] == labels[c[0]])
        ]
    return np.array(rows, dtype=np.int64).reshape(len(rows), m)


def _sample_layer(
    n: int,
    m: int,
    probs: LayerProbabilities,
    labels: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    half = n // 2
    n_in = 2 * math.comb(half, m) if m <= half else 0
    n_all = math.comb(n, m)
    n_cross = n_all - n_in

    k_in = int(rng.binomial(n_in, probs.p)) if n_in else 0
    k_cross = int(rng.binomial(n_cross, probs.q)) if n_cross else 0

    plus = np.flatnonzero(labels == 1)
    minus = np.flatnonzero(labels == -1)

    def draw_in(count: int) -> np.ndarray:
        # Uniform over the union of both communities' m-subsets: the two
        # communities contribute equally many subsets, so pick a side fair.
        side = rng.integers(0, 2, size=count)
        local = np.sort(rng.integers(0, half, size=(count, m)), axis=1)
        ok = np.all(local[:, 1:] > local[:, :-1], axis=1)
        side, local = side[ok], local[ok]
        out = np.where(side[:, None] == 1, plus[local], minus[local])
        return out

    def draw_cross(count: int) -> np.ndarray:
        verts = np.sort(rng.integers(0, n, size=(count, m)), axis=1)
        ok = np.all(verts[:, 1:] > verts[:, :-1], axis=1)
        verts = verts[ok]
        sgn = labels[verts]
        mixed = np.any(sgn != sgn[:, :1], axis=1)
        return verts[mixed]

    parts = []
    for k, total, in_cluster, draw in (
        (k_in, n_in, True, draw_in),
        (k_cross, n_cross, False, draw_cross),
    ):
        if k == 0:
            continue
        if 2 * k >= total:
            # Rejection would coupon-collect; enumerate the class instead.
            universe = _enumerate_class(n, m, labels, in_cluster)
            idx = rng.choice(len(universe), size=k, replace=False)
            parts.append(universe[np.sort(idx)])
        else:
            parts.append(_draw_distinct_subsets(k, m, draw, rng))
    if not parts:
        return np.empty((0, m), dtype=np.int64)
    return _canonical_rows(np.concatenate(parts, axis=0))


def sample_hsbm(
    spec: ModelSpec, labels: np.ndarray, rng: np.random.Generator
) -> Hypergraph:
    """Draw a hypergraph from the model given a balanced label vector.

    Per layer the number of present in-cluster (resp. cross) edges is
    binomial over its subset class, then that many distinct subsets are
    drawn uniformly; the full C(n, m) universe is never enumerated except
    when a class is so dense that rejection would stall.
    """
    labels = _check_labels(labels, spec.n)
    layers = {}
    for m in spec.arities:
        probs = edge_probabilities(spec, m)
        layers[m] = _sample_layer(spec.n, m, probs, labels, rng)
    return Hypergraph(n=spec.n, layers=layers, labels=labels)


def contract(h: Hypergraph) -> np.ndarray:
    """Pairwise co-occurrence counts: A[i, j] = number of edges containing both.

    Symmetric, hollow, integer.
    """
    A = np.zeros((h.n, h.n), dtype=np.int64)
    for m, edges in h.layers.items():
        if not len(edges):
            continue
        for i in range(m - 1):
            for j in range(i + 1, m):
                # Rows strictly increase, so these hits land above the diagonal.
                np.add.at(A, (edges[:, i], edges[:, j]), 1)
    A += A.T
    return A


@dataclass(frozen=True)
class ExpectedModel:
    """Aggregate pairwise rates and the leading expected spectrum.

    p and q are the expected co-occurrence counts of a same-community and a
    cross-community vertex pair; rho_n is the expected degree and equals the
    top expected eigenvalue lambda1_star; lambda2_star is the community
    eigenvalue whose eigenvector is the balanced split direction.
    """

    p: float
    q: float
    rho_n: float
    lambda1_star: float
    lambda2_star: float


def expected_model(spec: ModelSpec) -> ExpectedModel:
    """Expected pairwise rates p, q and eigenvalues of the expected matrix."""
    p = math.fsum(
        edge_probabilities(spec, m).p * math.comb(spec.n - 2, m - 2) for m in spec.arities
    )
    q = math.fsum(
        edge_probabilities(spec, m).q * math.comb(spec.n - 2, m - 2) for m in spec.arities
    )
    lambda1 = (p + q) * spec.n / 2 - p
    lambda2 = (p - q) * spec.n / 2 - p
    return ExpectedModel(p=p, q=q, rho_n=lambda1, lambda1_star=lambda1, lambda2_star=lambda2)


def expected_adjacency(spec: ModelSpec, labels: np.ndarray) -> np.ndarray:
    """Entrywise expectation of contract(sample): p on same-community pairs, q across."""
    labels = _check_labels(labels, spec.n)
    em = expected_model(spec)
    A = np.where(np.equal.outer(labels, labels), em.p, em.q)
    np.fill_diagonal(A, 0.0)
    return A


def weighted_adjacency(
    h: Hypergraph, labels: np.ndarray, spec: ModelSpec
) -> np.ndarray:
    """Label-aware reweighted pair matrix used as a recovery diagnostic.

    Each arity-m edge e contributes, from row vertex v in e to every other
    j in e, the weight log(p_m/q_m) / d where d counts the vertices of
    e - {v} sharing j's label.  When the m-1 companions of v all share v's
    label or all oppose it, d = m-1 for every j; the matrix is symmetric
    for 2-uniform layers but generally not for larger arities.

    Requires an assortative spec and probabilities strictly inside (0, 1).
    """
    labels = _check_labels(labels, h.n)
    if not spec.assortative:
        raise ValueError("weighted adjacency requires a_m > b_m on every layer")
    W = np.zeros((h.n, h.n), dtype=float)
    for m, edges in h.layers.items():
        if not len(edges):
            continue
        probs = edge_probabilities(spec, m)
        if not (0.0 < probs.q and probs.p < 1.0):
            raise ValueError(f"layer {m}: probabilities must lie strictly in (0, 1)")
        w = math.log(probs.p / probs.q)
        sgn = labels[edges]
        kplus = (sgn == 1).sum(axis=1)
        for u in range(m):
            # Same-signed companions of the row vertex within the edge.
            r_u = np.where(sgn[:, u] == 1, kplus - 1, m - kplus - 1)
            for j in range(m):
                if j == u:
                    continue
                same = sgn[:, j] == sgn[:, u]
                denom = np.where(same, r_u, m - 1 - r_u)
                np.add.at(W, (edges[:, u], edges[:, j]), w / denom)
    return W
