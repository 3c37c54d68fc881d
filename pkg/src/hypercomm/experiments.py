"""Seeded simulation campaigns over the model's parameter space.

Four campaign kinds share one runner:

- phase-grid: success counts over an (a, b) grid for one swept arity.
- error-curve: mismatch versus a at fixed b for one swept arity.
- size-sweep: mismatch versus n at fixed rates.
- aggregation: every pixel run twice, with and without one extra layer,
  on the same label draws, to measure what the extra layer adds.

Every random stream is derived from (master_seed, pixel, trial, role) with
a SplitMix-style hash, so results are reproducible record-by-record and
independent of scheduling: the label/edge streams ignore the algorithm, so
all algorithms score the same draw, and the label stream also ignores the
aggregation variant, so paired runs share their planted labels.  Output
rows are sorted by (pixel, variant, trial, algorithm), making the CSV
byte-identical for any thread count.

wall_ms is 0 unless the config opts into timing, which makes output bytes
run-dependent.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import fmean, pstdev

import numpy as np

from .metrics import PartitionResult
from .model import Hypergraph, ModelSpec, contract, sample_hsbm, sample_labels
from .sdp import algorithm3_sdp
from .spectral import algorithm1_adjacency, algorithm2_laplacian
from .thresholds import divergence_report

log = logging.getLogger("hypercomm.experiments")

KINDS = ("phase-grid", "error-curve", "size-sweep", "aggregation")
ALGORITHMS = ("adjacency", "laplacian", "sdp")

CSV_HEADER = "kind,n,m_set,a,b,extra_layer,trial,seed,algorithm,mismatch,exact,d_gh,d_sdp,wall_ms"

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def derive_seed(master_seed: int, *parts: int | str) -> int:
    """Collision-resistant 64-bit stream seed from a master seed and a role path."""
    s = master_seed & _MASK64
    for part in parts:
        token = _fnv1a64(part) if isinstance(part, str) else part & _MASK64
        s = _splitmix64(s ^ token)
    return s


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated campaign description.

    base holds the un-swept model; pixels replace sweep_layer's rate pair
    (phase-grid, error-curve, aggregation) or the vertex count
    (size-sweep).  Solver knobs apply to every trial.
    """

    kind: str
    base: ModelSpec
    trials: int
    algorithms: tuple[str, ...]
    master_seed: int
    sweep_layer: int | None = None
    pairs: tuple[tuple[float, float], ...] | None = None
    n_values: tuple[int, ...] | None = None
    extra_layer: tuple[int, float, float] | None = None
    timing: bool = False
    power_tol: float = 1e-10
    power_max_iter: int = 10_000
    sdp_tol: float = 1e-6
    sdp_max_iter: int = 50_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.algorithms:
            raise ValueError("algorithms must be non-empty")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}; expected subset of {ALGORITHMS}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("duplicate algorithm")
        if self.kind == "size-sweep":
            if not self.n_values:
                raise ValueError("size-sweep needs n_values")
            for n in self.n_values:
                ModelSpec(n=n, layers=self.base.layers)  # validates evenness and range
        else:
            if self.sweep_layer is None or self.sweep_layer not in self.base.layers:
                raise ValueError("sweep_layer must name an arity of the base model")
            if not self.pairs:
                raise ValueError(f"{self.kind} needs at least one (a, b) pixel")
            for a, b in self.pairs:
                if not (a > 0 and b > 0):
                    raise ValueError(f"pixel rates must be positive, got ({a}, {b})")
        if self.kind == "aggregation":
            if self.extra_layer is None:
                raise ValueError("aggregation needs extra_layer")
            m, a, b = self.extra_layer
            if m in self.base.layers:
                raise ValueError(f"extra layer arity {m} already in the base model")
            if not (a > 0 and b > 0):
                raise ValueError("extra layer rates must be positive")
        elif self.extra_layer is not None:
            raise ValueError("extra_layer only applies to aggregation")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {
            "kind",
            "n",
            "layers",
            "trials",
            "algorithms",
            "master_seed",
            "sweep_layer",
            "pairs",
            "a_values",
            "b_values",
            "n_values",
            "extra_layer",
            "timing",
            "power_tol",
            "power_max_iter",
            "sdp_tol",
            "sdp_max_iter",
        }
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        try:
            base = ModelSpec.from_dict({"n": d["n"], "layers": d["layers"]})
            pairs = None
            if "pairs" in d:
                pairs = tuple((float(a), float(b)) for a, b in d["pairs"])
            elif "a_values" in d or "b_values" in d:
                a_values = [float(a) for a in d["a_values"]]
                if d.get("kind") == "error-curve":
                    sweep = int(d["sweep_layer"])
                    b_fixed = base.layers[sweep][1]
                    pairs = tuple((a, b_fixed) for a in a_values)
                else:
                    b_values = [float(b) for b in d["b_values"]]
                    pairs = tuple((a, b) for a in a_values for b in b_values)
            extra = None
            if d.get("extra_layer") is not None:
                e = d["extra_layer"]
                extra = (int(e["m"]), float(e["a"]), float(e["b"]))
            return cls(
                kind=d["kind"],
                base=base,
                trials=int(d["trials"]),
                algorithms=tuple(d["algorithms"]),
                master_seed=int(d["master_seed"]),
                sweep_layer=int(d["sweep_layer"]) if "sweep_layer" in d else None,
                pairs=pairs,
                n_values=tuple(int(n) for n in d["n_values"]) if "n_values" in d else None,
                extra_layer=extra,
                timing=bool(d.get("timing", False)),
                power_tol=float(d.get("power_tol", 1e-10)),
                power_max_iter=int(d.get("power_max_iter", 10_000)),
                sdp_tol=float(d.get("sdp_tol", 1e-6)),
                sdp_max_iter=int(d.get("sdp_max_iter", 50_000)),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed experiment config: {exc}") from exc


@dataclass
class TrialRecord:
    """One CSV row; pixel/variant indices order the output but are not written."""

    kind: str
    n: int
    m_set: str
    a: float
    b: float
    extra_layer: str
    trial: int
    seed: int
    algorithm: str
    mismatch: float
    exact: bool
    d_gh: float
    d_sdp: float
    wall_ms: int
    pixel_index: int = field(repr=False, default=0)
    variant_index: int = field(repr=False, default=0)

    def row(self) -> list[str]:
        return [
            self.kind,
            str(self.n),
            self.m_set,
            str(self.a),
            str(self.b),
            self.extra_layer,
            str(self.trial),
            str(self.seed),
            self.algorithm,
            str(self.mismatch),
            "1" if self.exact else "0",
            str(self.d_gh),
            str(self.d_sdp),
            str(self.wall_ms),
        ]


@dataclass(frozen=True)
class _Point:
    """One (pixel, variant) cell: a concrete model plus display metadata."""

    pixel_index: int
    variant_index: int
    spec: ModelSpec
    a: float
    b: float
    extra_tag: str


def _points(cfg: ExperimentConfig) -> list[_Point]:
    points = []
    if cfg.kind == "size-sweep":
        first = min(cfg.base.layers)
        a0, b0 = cfg.base.layers[first]
        for i, n in enumerate(cfg.n_values):
            spec = ModelSpec(n=n, layers=dict(cfg.base.layers))
            points.append(_Point(i, 0, spec, a0, b0, ""))
        return points
    variants: list[tuple[int, str, dict]] = [(0, "", {})]
    if cfg.kind == "aggregation":
        m, a, b = cfg.extra_layer
        tag = f"{m}:{_num(a)}:{_num(b)}"
        variants.append((1, tag, {m: (a, b)}))
    for i, (a, b) in enumerate(cfg.pairs):
        for variant_index, tag, extra in variants:
            layers = dict(cfg.base.layers)
            layers[cfg.sweep_layer] = (a, b)
            layers.update(extra)
            spec = ModelSpec(n=cfg.base.n, layers=layers)
            points.append(_Point(i, variant_index, spec, a, b, tag))
    return points


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


def _m_set(spec: ModelSpec) -> str:
    return "+".join(str(m) for m in spec.arities)


def _run_point(cfg: ExperimentConfig, point: _Point) -> list[TrialRecord]:
    report = divergence_report(point.spec)
    records = []
    for trial in range(cfg.trials):
        sigma_rng = np.random.Generator(
            np.random.PCG64(derive_seed(cfg.master_seed, "sigma", point.pixel_index, trial))
        )
        labels = sample_labels(point.spec.n, sigma_rng)
        edge_rng = np.random.Generator(
            np.random.PCG64(
                derive_seed(
                    cfg.master_seed, "edges", point.pixel_index, point.variant_index, trial
                )
            )
        )
        h = sample_hsbm(point.spec, labels, edge_rng)
        A = contract(h).astype(float)
        for algorithm in sorted(cfg.algorithms):
            seed = derive_seed(
                cfg.master_seed,
                "algo",
                algorithm,
                point.pixel_index,
                point.variant_index,
                trial,
            )
            rng = np.random.Generator(np.random.PCG64(seed))
            start = time.perf_counter()
            result = _dispatch(cfg, algorithm, A, rng)
            elapsed_ms = int(round((time.perf_counter() - start) * 1000))
            result.score_against(labels)
            records.append(
                TrialRecord(
                    kind=cfg.kind,
                    n=point.spec.n,
                    m_set=_m_set(point.spec),
                    a=point.a,
                    b=point.b,
                    extra_layer=point.extra_tag,
                    trial=trial,
                    seed=seed,
                    algorithm=algorithm,
                    mismatch=result.mismatch,
                    exact=result.exact,
                    d_gh=report.d_gh,
                    d_sdp=report.d_sdp,
                    wall_ms=elapsed_ms if cfg.timing else 0,
                    pixel_index=point.pixel_index,
                    variant_index=point.variant_index,
                )
            )
    return records


def _dispatch(
    cfg: ExperimentConfig, algorithm: str, A: np.ndarray, rng: np.random.Generator
) -> PartitionResult:
    if algorithm == "adjacency":
        return algorithm1_adjacency(
            A, tol=cfg.power_tol, max_iter=cfg.power_max_iter, rng=rng
        )
    if algorithm == "laplacian":
        return algorithm2_laplacian(
            A, tol=cfg.power_tol, max_iter=cfg.power_max_iter, rng=rng
        )
    if algorithm == "sdp":
        return algorithm3_sdp(A, tol=cfg.sdp_tol, max_iter=cfg.sdp_max_iter)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_experiment(
    cfg: ExperimentConfig, threads: int | None = None
) -> tuple[list[TrialRecord], dict]:
    """Run the campaign and return (sorted records, summary dict)."""
    points = _points(cfg)
    start = time.perf_counter()
    if threads is not None and threads < 1:
        raise ValueError("threads must be >= 1")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = list(pool.map(lambda pt: _run_point(cfg, pt), points))
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.pixel_index, r.variant_index, r.trial, r.algorithm))
    log.info(
        "%s campaign: %d points x %d trials, %d records in %.2fs",
        cfg.kind,
        len(points),
        cfg.trials,
        len(records),
        time.perf_counter() - start,
    )
    return records, _summarize(cfg, records)


def _summarize(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    groups: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.pixel_index, rec.variant_index, rec.algorithm), []).append(rec)
    points = []
    for key in sorted(groups):
        recs = groups[key]
        first = recs[0]
        mismatches = [r.mismatch for r in recs]
        mean = fmean(mismatches)
        if mean > 0:
            rescaled: float | str = math.log(mean) / math.log(first.n)
        else:
            rescaled = "neg_inf"
        points.append(
            {
                "n": first.n,
                "m_set": first.m_set,
                "a": first.a,
                "b": first.b,
                "extra_layer": first.extra_layer,
                "algorithm": first.algorithm,
                "trials": len(recs),
                "success_count": sum(1 for r in recs if r.exact),
                "mean_mismatch": mean,
                "std_mismatch": pstdev(mismatches) if len(mismatches) > 1 else 0.0,
                "log_rescaled_mismatch": rescaled,
                "d_gh": first.d_gh,
                "d_sdp": first.d_sdp,
            }
        )
    return {
        "kind": cfg.kind,
        "master_seed": cfg.master_seed,
        "trials": cfg.trials,
        "algorithms": sorted(cfg.algorithms),
        "points": points,
    }


def write_csv(records: list[TrialRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for rec in records:
            writer.writerow(rec.row())


def write_summary(summary: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
