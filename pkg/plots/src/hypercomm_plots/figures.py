"""The three figure renderers and their machine-checkable sidecars.

Every renderer writes two files: the PNG and a sidecar JSON holding the
numbers that went into it (cell values, polyline vertices, error bars),
so tests can assert figure content without decoding pixels.  Model
quantities (the d_gh / d_sdp columns) are passed through from the input
files, never recomputed here; only outcome statistics (success counts,
mean mismatch) are aggregated from the trial rows.
"""

from __future__ import annotations

import json
import logging
import math
import os
from collections import defaultdict

import numpy as np
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure

from .inputs import TrialRow, read_summary, read_trials
from .marching import contour_segments

log = logging.getLogger("hypercomm_plots")

# One fixed color per divergence column so boundary curves are telling
# apart at a glance; levels of the same column share the color.
_BOUNDARY_COLORS = {"d_gh": "crimson", "d_sdp": "royalblue"}


def _sidecar_path(out_png) -> str:
    return os.path.splitext(os.fspath(out_png))[0] + ".json"


def _write_sidecar(out_png, payload: dict) -> None:
    with open(_sidecar_path(out_png), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _pick_series(rows: list[TrialRow]) -> tuple[str, str]:
    """Deterministic (algorithm, variant) choice when a CSV mixes several.

    A heatmap portrays one detector, so: alphabetically first algorithm,
    then its base variant (no extra layer) when present, else the
    alphabetically first variant.
    """
    algorithm = min(row.algorithm for row in rows)
    variants = {row.extra_layer for row in rows if row.algorithm == algorithm}
    variant = "" if "" in variants else min(variants)
    if len({row.algorithm for row in rows}) > 1 or len(variants) > 1:
        log.info("heatmap: plotting algorithm=%r variant=%r", algorithm, variant)
    return algorithm, variant


def _cell_edges(centers: list[float]) -> np.ndarray:
    """Cell boundaries for pcolormesh: midpoints, extrapolated at the rim."""
    if len(centers) == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    c = np.asarray(centers, dtype=float)
    mids = (c[:-1] + c[1:]) / 2.0
    first = c[0] - (mids[0] - c[0])
    last = c[-1] + (c[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def plot_heatmap(csv_path, out_png, boundary_levels=(1.0,)) -> dict:
    """Success-count pixel grid with divergence boundary curves overlaid.

    The grid spans the distinct a values (columns) and b values (rows) of
    the selected series; pixels the CSV does not cover stay blank.  For
    each requested level, the d_gh and d_sdp columns are contoured with
    marching squares and the segments drawn over the grid.  Returns the
    sidecar payload, which is also written next to the PNG.
    """
    rows = read_trials(csv_path)
    algorithm, variant = _pick_series(rows)
    series = [r for r in rows if r.algorithm == algorithm and r.extra_layer == variant]
    xs = sorted({r.a for r in series})
    ys = sorted({r.b for r in series})
    col = {a: j for j, a in enumerate(xs)}
    row_of = {b: i for i, b in enumerate(ys)}

    successes: list[list[int | None]] = [[None] * len(xs) for _ in ys]
    d_gh: list[list[float | None]] = [[None] * len(xs) for _ in ys]
    d_sdp: list[list[float | None]] = [[None] * len(xs) for _ in ys]
    for r in series:
        i, j = row_of[r.b], col[r.a]
        successes[i][j] = (successes[i][j] or 0) + r.exact
        d_gh[i][j] = r.d_gh
        d_sdp[i][j] = r.d_sdp

    contours = []
    for level in boundary_levels:
        for name, grid in (("d_gh", d_gh), ("d_sdp", d_sdp)):
            segments = contour_segments(xs, ys, grid, level)
            contours.append(
                {
                    "column": name,
                    "level": float(level),
                    "segments": [[list(p0), list(p1)] for p0, p1 in segments],
                }
            )

    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    masked = np.ma.masked_invalid(
        np.array(
            [[np.nan if v is None else v for v in grid_row] for grid_row in successes],
            dtype=float,
        )
    )
    mesh = ax.pcolormesh(
        _cell_edges(xs), _cell_edges(ys), masked, cmap="viridis", shading="flat"
    )
    fig.colorbar(mesh, ax=ax, label="exact recoveries")
    for entry in contours:
        if entry["segments"]:
            ax.add_collection(
                LineCollection(
                    entry["segments"],
                    colors=_BOUNDARY_COLORS[entry["column"]],
                    linewidths=1.6,
                    label=f"{entry['column']} = {entry['level']:g}",
                )
            )
    if any(entry["segments"] for entry in contours):
        ax.legend(loc="upper left", fontsize="small")
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title(f"exact recovery: {algorithm}" + (f" (+{variant})" if variant else ""))
    fig.savefig(out_png, dpi=150)

    payload = {
        "kind": "heatmap",
        "algorithm": algorithm,
        "variant": variant,
        "a_values": xs,
        "b_values": ys,
        "grid": successes,
        "contours": contours,
    }
    _write_sidecar(out_png, payload)
    return payload


def plot_error_curve(csv_path, out_png) -> dict:
    """Log-rescaled mean mismatch against a, with the -d_gh reference.

    Per algorithm and pixel, the trial mismatches are averaged in row
    order and rescaled to log(mean)/log(n); pixels whose every trial
    recovered exactly have no finite logarithm and are listed as floor
    markers instead, drawn along the bottom frame.  The reference curve
    is -d_gh straight from the CSV column.  Returns the sidecar payload.
    """
    rows = read_trials(csv_path)
    by_algo: dict[str, dict[tuple[float, float], list[TrialRow]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for r in rows:
        by_algo[r.algorithm][(r.a, r.b)].append(r)

    series = []
    for algorithm in sorted(by_algo):
        polyline: list[list[float]] = []
        floor_markers: list[float] = []
        for (a, _b), pixel_rows in sorted(by_algo[algorithm].items()):
            mean = math.fsum(r.mismatch for r in pixel_rows) / len(pixel_rows)
            if mean > 0.0:
                polyline.append([a, math.log(mean) / math.log(pixel_rows[0].n)])
            else:
                floor_markers.append(a)
        series.append(
            {"algorithm": algorithm, "polyline": polyline, "floor_markers": floor_markers}
        )

    first = sorted(by_algo)[0]
    reference = [
        [a, -pixel_rows[0].d_gh] for (a, _b), pixel_rows in sorted(by_algo[first].items())
    ]

    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    ax.plot([p[0] for p in reference], [p[1] for p in reference], "k--", label="-d_gh")
    for entry in series:
        (line,) = ax.plot(
            [p[0] for p in entry["polyline"]],
            [p[1] for p in entry["polyline"]],
            marker="o",
            label=entry["algorithm"],
        )
        if entry["floor_markers"]:
            finite = [p[1] for s in series for p in s["polyline"]]
            finite += [p[1] for p in reference]
            bottom = min(finite) - 0.05 * (max(finite) - min(finite) or 1.0)
            ax.plot(
                entry["floor_markers"],
                [bottom] * len(entry["floor_markers"]),
                linestyle="none",
                marker="v",
                color=line.get_color(),
            )
    ax.set_xlabel("a")
    ax.set_ylabel("log(mean mismatch) / log(n)")
    ax.legend(fontsize="small")
    fig.savefig(out_png, dpi=150)

    payload = {"kind": "error-curve", "series": series, "reference": reference}
    _write_sidecar(out_png, payload)
    return payload


def plot_size_sweep(summary_path, out_png) -> dict:
    """Mean mismatch with std error bars against n, one line per algorithm.

    Reads the aggregated summary JSON; bars are (n, mean, std) triples
    sorted by n.  Returns the sidecar payload.
    """
    points = read_summary(summary_path)
    by_algo: dict[str, list] = defaultdict(list)
    for p in points:
        by_algo[p.algorithm].append(p)

    series = []
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot()
    for algorithm in sorted(by_algo):
        bars = [[p.n, p.mean, p.std] for p in sorted(by_algo[algorithm])]
        series.append({"algorithm": algorithm, "bars": bars})
        ax.errorbar(
            [b[0] for b in bars],
            [b[1] for b in bars],
            yerr=[b[2] for b in bars],
            marker="o",
            capsize=3,
            label=algorithm,
        )
    ax.set_xlabel("n")
    ax.set_ylabel("mean mismatch")
    ax.legend(fontsize="small")
    fig.savefig(out_png, dpi=150)

    payload = {"kind": "size-sweep", "series": series}
    _write_sidecar(out_png, payload)
    return payload
