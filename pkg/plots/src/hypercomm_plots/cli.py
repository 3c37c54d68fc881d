"""Standalone rendering scripts.

Each script takes an input file and an output PNG path, renders the
figure plus its sidecar JSON, and exits 0; malformed or empty inputs
exit 2, unreadable or unwritable paths exit 1.
"""

from __future__ import annotations

import argparse
import sys

from .figures import plot_error_curve, plot_heatmap, plot_size_sweep
from .inputs import SchemaError


def _render(fn, *args) -> int:
    try:
        fn(*args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _levels(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("at least one level is required")
    return values


def main_heatmap(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-heatmap",
        description="Render a success-count heatmap with divergence boundary curves.",
    )
    parser.add_argument("csv", help="experiment results CSV")
    parser.add_argument("out", help="output PNG path (sidecar JSON lands next to it)")
    parser.add_argument(
        "--levels",
        type=_levels,
        default=(1.0,),
        help="comma-separated boundary levels (default: 1.0)",
    )
    args = parser.parse_args(argv)
    return _render(plot_heatmap, args.csv, args.out, args.levels)


def main_error_curve(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-error-curve",
        description="Render log-rescaled mean mismatch against a.",
    )
    parser.add_argument("csv", help="experiment results CSV")
    parser.add_argument("out", help="output PNG path (sidecar JSON lands next to it)")
    args = parser.parse_args(argv)
    return _render(plot_error_curve, args.csv, args.out)


def main_size_sweep(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-size-sweep",
        description="Render mean mismatch with std error bars against n.",
    )
    parser.add_argument("summary", help="experiment summary JSON")
    parser.add_argument("out", help="output PNG path (sidecar JSON lands next to it)")
    args = parser.parse_args(argv)
    return _render(plot_size_sweep, args.summary, args.out)
