"""Readers for the experiment output formats the plots consume.

Two inputs exist: the per-trial CSV (one row per algorithm run) and the
aggregated summary JSON.  Both are validated against the documented
schema before any figure code touches them; violations raise SchemaError
so the scripts can exit nonzero with a message instead of rendering
garbage.
"""

from __future__ import annotations

import csv
import json
from typing import NamedTuple

# Documented column order of the per-trial CSV.
CSV_HEADER = (
    "kind,n,m_set,a,b,extra_layer,trial,seed,algorithm,mismatch,exact,d_gh,d_sdp,wall_ms"
)
_COLUMNS = CSV_HEADER.split(",")


class SchemaError(Exception):
    """The input file does not conform to the documented format."""


class TrialRow(NamedTuple):
    """One algorithm run: the pixel it belongs to and its outcome."""

    n: int
    a: float
    b: float
    extra_layer: str
    trial: int
    algorithm: str
    mismatch: float
    exact: int
    d_gh: float
    d_sdp: float


class SizePoint(NamedTuple):
    """One aggregated summary point of a size sweep."""

    n: int
    algorithm: str
    mean: float
    std: float


def read_trials(path) -> list[TrialRow]:
    """Parse and validate a per-trial CSV; raises SchemaError on mismatch."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        if header != _COLUMNS:
            raise SchemaError(
                f"{path}: unexpected header {','.join(header)!r}; expected {CSV_HEADER!r}"
            )
        rows: list[TrialRow] = []
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(_COLUMNS):
                raise SchemaError(f"{path}:{lineno}: expected {len(_COLUMNS)} fields")
            field = dict(zip(_COLUMNS, rec))
            try:
                row = TrialRow(
                    n=int(field["n"]),
                    a=float(field["a"]),
                    b=float(field["b"]),
                    extra_layer=field["extra_layer"],
                    trial=int(field["trial"]),
                    algorithm=field["algorithm"],
                    mismatch=float(field["mismatch"]),
                    exact=int(field["exact"]),
                    d_gh=float(field["d_gh"]),
                    d_sdp=float(field["d_sdp"]),
                )
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            if row.exact not in (0, 1):
                raise SchemaError(f"{path}:{lineno}: exact must be 0 or 1")
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_summary(path) -> list[SizePoint]:
    """Parse and validate a summary JSON; raises SchemaError on mismatch."""
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(payload, dict) or not isinstance(payload.get("points"), list):
        raise SchemaError(f"{path}: expected an object with a 'points' list")
    if not payload["points"]:
        raise SchemaError(f"{path}: no summary points")
    points: list[SizePoint] = []
    for idx, raw in enumerate(payload["points"]):
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: point {idx} is not an object")
        try:
            points.append(
                SizePoint(
                    n=int(raw["n"]),
                    algorithm=str(raw["algorithm"]),
                    mean=float(raw["mean_mismatch"]),
                    std=float(raw["std_mismatch"]),
                )
            )
        except KeyError as exc:
            raise SchemaError(f"{path}: point {idx} is missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: point {idx}: {exc}") from None
    return points
