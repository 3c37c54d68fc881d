"""Command-line interface.

Subcommands: threshold (divergences of a model), sample (draw one
hypergraph to JSON), detect (run one detector on a hypergraph file),
experiment (run a simulation campaign from a config file).

Exit codes: 0 success, 1 I/O or runtime failure, 2 usage or config error.
The HYPERCOMM_LOG environment variable (error, warn, info, debug) controls
diagnostic verbosity on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .errors import HypercommError
from .experiments import ExperimentConfig, run_experiment, write_csv, write_summary
from .model import Hypergraph, ModelSpec, sample_hsbm, sample_labels
from .sdp import algorithm3_sdp
from .spectral import algorithm1_adjacency, algorithm2_laplacian
from .thresholds import divergence_report

log = logging.getLogger("hypercomm.cli")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging() -> None:
    raw = os.environ.get("HYPERCOMM_LOG", "warn").lower()
    level = _LOG_LEVELS.get(raw)
    root = logging.getLogger("hypercomm")
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    if level is None:
        root.setLevel(logging.WARNING)
        log.warning("unknown HYPERCOMM_LOG=%r; using warn", raw)
    else:
        root.setLevel(level)


def _layer_triple(text: str) -> tuple[int, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected m:a:b, got {text!r}")
    try:
        return int(parts[0]), float(parts[1]), float(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected m:a:b with numeric fields: {exc}")


def _layers_dict(triples) -> dict[int, tuple[float, float]]:
    layers: dict[int, tuple[float, float]] = {}
    for m, a, b in triples:
        if m in layers:
            raise ValueError(f"duplicate layer arity {m}")
        layers[m] = (a, b)
    return layers


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _cmd_threshold(args) -> int:
    try:
        layers = _layers_dict(args.layers)
        spec = ModelSpec(n=2 * max(layers), layers=layers)  # divergences ignore n
    except ValueError as exc:
        return _fail(str(exc), 2)
    report = divergence_report(spec)
    if args.json:
        print(
            json.dumps(
                {
                    "d_gh": report.d_gh,
                    "d_sdp": report.d_sdp,
                    "per_layer_gh": {str(m): v for m, v in report.per_layer_gh.items()},
                    "t_star_gh": report.t_star_gh,
                    "t_star_sdp": report.t_star_sdp,
                    "non_assortative": report.non_assortative,
                },
                sort_keys=True,
            )
        )
    else:
        per_layer = ", ".join(f"m={m}: {v:.6f}" for m, v in report.per_layer_gh.items())
        print(f"d_gh  = {report.d_gh:.6f}  (t* = {report.t_star_gh})  [{per_layer}]")
        print(f"d_sdp = {report.d_sdp:.6f}  (t* = {report.t_star_sdp:.6f})")
        if report.non_assortative:
            print("note: aggregate rates are not assortative; d_sdp degenerates to 0")
        print(f"exact recovery information threshold (d_gh > 1): {report.d_gh > 1}")
        print(f"relaxation threshold (d_sdp > 1): {report.d_sdp > 1}")
    return 0


def _cmd_sample(args) -> int:
    try:
        spec = ModelSpec(n=args.n, layers=_layers_dict(args.layers))
    except ValueError as exc:
        return _fail(str(exc), 2)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    labels = sample_labels(spec.n, rng)
    h = sample_hsbm(spec, labels, rng)
    try:
        with open(args.out, "w") as fh:
            fh.write(h.to_json())
            fh.write("\n")
    except OSError as exc:
        return _fail(f"cannot write {args.out}: {exc}", 1)
    print(f"wrote {args.out}: n={h.n}, edges={h.edge_count()} across arities {list(h.arities)}")
    return 0


def _load_hypergraph(path: str) -> Hypergraph:
    with open(path) as fh:
        return Hypergraph.from_dict(json.load(fh))


def _cmd_detect(args) -> int:
    try:
        h = _load_hypergraph(args.in_path)
    except OSError as exc:
        return _fail(f"cannot read {args.in_path}: {exc}", 1)
    except (ValueError, json.JSONDecodeError) as exc:
        return _fail(f"bad hypergraph file {args.in_path}: {exc}", 1)
    if args.truth and h.labels is None:
        return _fail(f"{args.in_path} carries no ground-truth labels", 1)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    try:
        if args.algo == "adjacency":
            result = algorithm1_adjacency(h, rng=rng, truth=h.labels)
        elif args.algo == "laplacian":
            result = algorithm2_laplacian(h, rng=rng, truth=h.labels)
        else:
            result = algorithm3_sdp(h, truth=h.labels)
    except HypercommError as exc:
        return _fail(f"{args.algo} failed: {exc}", 1)
    plus = int((result.labels == 1).sum())
    if args.json:
        payload = {
            "algorithm": result.algorithm,
            "n": h.n,
            "labels": result.labels.tolist(),
            "community_sizes": [plus, h.n - plus],
            "mismatch": result.mismatch,
            "exact": result.exact,
        }
        if result.eigen is not None:
            payload["eigenvalue"] = result.eigen.value
        if result.objective is not None:
            payload["objective"] = result.objective
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"algorithm: {result.algorithm}")
        print(f"n: {h.n}, community sizes: +1={plus}, -1={h.n - plus}")
        preview = " ".join(f"{v:+d}" for v in result.labels[:24])
        more = " ..." if h.n > 24 else ""
        print(f"labels (vertex 1 first): {preview}{more}")
        if result.mismatch is not None:
            print(f"mismatch vs truth: {result.mismatch:.6f} (exact: {result.exact})")
    return 0


def _render_figures(args, out_dir: str, csv_path: str, summary_path: str, kind: str) -> list[str]:
    """Render figures next to the delimited output when the plotting
    package is installed; quietly skip otherwise."""
    try:
        import hypercomm_plots
    except ImportError:
        log.debug("hypercomm_plots not installed; skipping figures")
        return []
    try:
        if kind in ("phase-grid", "aggregation"):
            png = os.path.join(out_dir, "heatmap.png")
            hypercomm_plots.plot_heatmap(csv_path, png)
        elif kind == "error-curve":
            png = os.path.join(out_dir, "error_curve.png")
            hypercomm_plots.plot_error_curve(csv_path, png)
        else:
            png = os.path.join(out_dir, "size_sweep.png")
            hypercomm_plots.plot_size_sweep(summary_path, png)
        return [png, png.replace(".png", ".json")]
    except Exception as exc:  # figures are best-effort extras
        log.warning("figure rendering failed: %s", exc)
        return []


def _cmd_experiment(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        return _fail(f"cannot read {args.config}: {exc}", 1)
    except json.JSONDecodeError as exc:
        return _fail(f"config is not valid JSON: {exc}", 2)
    try:
        cfg = ExperimentConfig.from_dict(raw)
    except ValueError as exc:
        return _fail(str(exc), 2)
    try:
        records, summary = run_experiment(cfg, threads=args.threads)
    except HypercommError as exc:
        return _fail(f"campaign failed: {exc}", 1)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "results.csv")
    summary_path = os.path.join(args.out, "summary.json")
    try:
        write_csv(records, csv_path)
        write_summary(summary, summary_path)
    except OSError as exc:
        return _fail(f"cannot write outputs: {exc}", 1)
    figures = _render_figures(args, args.out, csv_path, summary_path, cfg.kind)
    if args.json:
        print(
            json.dumps(
                {
                    "csv": csv_path,
                    "summary": summary_path,
                    "figures": figures,
                    "records": len(records),
                },
                sort_keys=True,
            )
        )
    else:
        print(f"wrote {csv_path} ({len(records)} records)")
        print(f"wrote {summary_path}")
        for fig in figures:
            print(f"wrote {fig}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercomm",
        description="Community detection on two-community non-uniform random hypergraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="divergences and detectability thresholds")
    p.add_argument(
        "--layers",
        action="append",
        required=True,
        type=_layer_triple,
        metavar="m:a:b",
        help="layer rates; repeat per arity",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("sample", help="draw one hypergraph and write it as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layers", action="append", required=True, type=_layer_triple, metavar="m:a:b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("detect", help="run one detector on a hypergraph JSON file")
    p.add_argument("--algo", choices=["adjacency", "laplacian", "sdp"], required=True)
    p.add_argument("--in", dest="in_path", required=True, metavar="FILE")
    p.add_argument("--truth", action="store_true", help="require ground-truth labels in the file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("experiment", help="run a simulation campaign from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
