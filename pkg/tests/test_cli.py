"""Command-line interface: argument handling, exit codes, output formats.

Most tests invoke main(argv) in process for speed; one subprocess test
exercises the installed console script and the stderr log-level switch
end to end.
"""

import json
import os
import subprocess
import sys

import pytest

from hypercomm import Hypergraph
from hypercomm.cli import main

from conftest import rate_for_probability


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------- threshold


def test_threshold_json_reference_pair(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--layers", "4:128:72", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["d_gh"] == pytest.approx(1.0, abs=1e-12)
    assert payload["d_sdp"] == pytest.approx(0.8013, abs=1e-3)
    assert payload["per_layer_gh"] == {"4": pytest.approx(1.0, abs=1e-12)}
    assert payload["t_star_gh"] == 0.5
    assert not payload["non_assortative"]


def test_threshold_layers_accumulate(capsys):
    code, out, _ = run_cli(
        capsys, "threshold", "--layers", "2:4:1", "--layers", "3:130:98", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["d_gh"] == pytest.approx(0.5 + 0.5642, abs=1e-3)
    assert set(payload["per_layer_gh"]) == {"2", "3"}


def test_threshold_flat_model_is_flagged(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--layers", "3:5:5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["d_gh"] == 0.0
    assert payload["d_sdp"] == 0.0
    assert payload["non_assortative"]


def test_threshold_text_output_mentions_both_thresholds(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--layers", "2:25:1")
    assert code == 0
    assert "d_gh  = 8.000000" in out
    assert "d_sdp = 8.000000" in out
    assert "True" in out


def test_threshold_usage_errors(capsys):
    assert run_cli(capsys, "threshold", "--layers", "4:128")[0] == 2
    assert run_cli(capsys, "threshold", "--layers", "4:x:72")[0] == 2
    code, _, err = run_cli(
        capsys, "threshold", "--layers", "2:4:1", "--layers", "2:5:1"
    )
    assert code == 2
    assert "duplicate" in err
    assert run_cli(capsys, "threshold", "--layers", "1:4:1")[0] == 2


# ------------------------------------------------------------------ sample


def test_sample_writes_deterministic_valid_json(tmp_path, capsys):
    args = ("sample", "--n", "20", "--layers", "2:3:1", "--seed", "42")
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(capsys, *args, "--out", str(f1))[0] == 0
    assert run_cli(capsys, *args, "--out", str(f2))[0] == 0
    assert f1.read_bytes() == f2.read_bytes()
    h = Hypergraph.from_json(f1.read_text())
    assert h.n == 20
    assert h.labels is not None and int(h.labels.sum()) == 0
    # a different seed gives a different draw
    f3 = tmp_path / "c.json"
    assert run_cli(capsys, *args[:-1], "43", "--out", str(f3))[0] == 0
    assert f3.read_bytes() != f1.read_bytes()


def test_sample_rejects_odd_n(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "sample", "--n", "21", "--layers", "2:3:1", "--out", str(tmp_path / "x.json")
    )
    assert code == 2
    assert "even" in err


def test_sample_unwritable_path_fails_cleanly(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "sample", "--n", "20", "--layers", "2:3:1",
        "--out", str(tmp_path / "no" / "dir" / "x.json"),
    )
    assert code == 1
    assert "cannot write" in err


# ------------------------------------------------------------------ detect


@pytest.fixture()
def strong_instance(tmp_path, capsys):
    path = tmp_path / "strong.json"
    code = main(
        ["sample", "--n", "40", "--layers", "2:9:0.5", "--seed", "7", "--out", str(path)]
    )
    capsys.readouterr()
    assert code == 0
    return path


def test_detect_spectral_recovers_planted_split(strong_instance, capsys):
    for algo in ("adjacency", "laplacian"):
        code, out, _ = run_cli(
            capsys, "detect", "--algo", algo, "--in", str(strong_instance), "--json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["algorithm"] == algo
        assert payload["exact"] is True
        assert payload["mismatch"] == 0.0
        assert sorted(payload["community_sizes"]) == [20, 20]
        assert "eigenvalue" in payload


def test_detect_sdp_on_small_instance(tmp_path, capsys):
    path = tmp_path / "tiny.json"
    assert main(
        ["sample", "--n", "20", "--layers", "2:5.5:0.4", "--seed", "3", "--out", str(path)]
    ) == 0
    capsys.readouterr()
    code, out, _ = run_cli(capsys, "detect", "--algo", "sdp", "--in", str(path), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["exact"] is True
    assert "objective" in payload


def test_detect_text_output(strong_instance, capsys):
    code, out, _ = run_cli(capsys, "detect", "--algo", "adjacency", "--in", str(strong_instance))
    assert code == 0
    assert "community sizes" in out
    assert "mismatch vs truth: 0.000000 (exact: True)" in out


def test_detect_missing_and_malformed_files(tmp_path, capsys):
    code, _, err = run_cli(capsys, "detect", "--algo", "adjacency", "--in", str(tmp_path / "no.json"))
    assert code == 1
    assert "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(capsys, "detect", "--algo", "adjacency", "--in", str(bad))[0] == 1
    schema = tmp_path / "schema.json"
    schema.write_text('{"n": 4, "layers": "oops"}')
    assert run_cli(capsys, "detect", "--algo", "adjacency", "--in", str(schema))[0] == 1


def test_detect_truth_flag_requires_labels(tmp_path, capsys):
    path = tmp_path / "unlabeled.json"
    path.write_text(Hypergraph(n=6, layers={2: [[0, 1], [2, 3]]}).to_json())
    code, _, err = run_cli(
        capsys, "detect", "--algo", "adjacency", "--truth", "--in", str(path)
    )
    assert code == 1
    assert "no ground-truth labels" in err


def test_detect_degenerate_graph_fails_cleanly(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text(Hypergraph(n=6, layers={2: []}).to_json())
    code, _, err = run_cli(capsys, "detect", "--algo", "laplacian", "--in", str(path))
    assert code == 1
    assert "laplacian failed" in err


# -------------------------------------------------------------- experiment


def experiment_config(tmp_path, **overrides) -> str:
    cfg = {
        "kind": "phase-grid",
        "n": 16,
        "layers": {"2": {"a": 2.0, "b": 0.8}},
        "trials": 2,
        "algorithms": ["adjacency"],
        "master_seed": 9,
        "sweep_layer": 2,
        "pairs": [[2.0, 0.8], [2.5, 0.5]],
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_experiment_writes_csv_and_summary(tmp_path, capsys):
    cfg = experiment_config(tmp_path)
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys, "experiment", "--config", cfg, "--out", str(out_dir), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["records"] == 2 * 2
    csv_lines = (out_dir / "results.csv").read_text().splitlines()
    assert csv_lines[0] == (
        "kind,n,m_set,a,b,extra_layer,trial,seed,algorithm,"
        "mismatch,exact,d_gh,d_sdp,wall_ms"
    )
    assert len(csv_lines) == 1 + 4
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["kind"] == "phase-grid"
    assert len(summary["points"]) == 2


def test_experiment_threads_do_not_change_bytes(tmp_path, capsys):
    cfg = experiment_config(tmp_path)
    blobs = []
    for threads, name in (("1", "t1"), ("4", "t4")):
        out_dir = tmp_path / name
        code = main(
            ["experiment", "--config", cfg, "--out", str(out_dir), "--threads", threads]
        )
        capsys.readouterr()
        assert code == 0
        blobs.append((out_dir / "results.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_experiment_error_paths(tmp_path, capsys):
    out = str(tmp_path / "o")
    code, _, err = run_cli(
        capsys, "experiment", "--config", str(tmp_path / "none.json"), "--out", out
    )
    assert code == 1
    assert "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run_cli(capsys, "experiment", "--config", str(bad), "--out", out)[0] == 2
    unknown = experiment_config(tmp_path, zzz=1)
    code, _, err = run_cli(capsys, "experiment", "--config", unknown, "--out", out)
    assert code == 2
    assert "unknown config keys" in err
    empty_algos = experiment_config(tmp_path, algorithms=[])
    assert run_cli(capsys, "experiment", "--config", empty_algos, "--out", out)[0] == 2


def test_error_curve_experiment_end_to_end(tmp_path, capsys):
    a_hi = rate_for_probability(16, 2, 0.95)
    cfg = experiment_config(
        tmp_path,
        kind="error-curve",
        layers={"2": {"a": 1.2, "b": 0.4}},
        a_values=[1.2, a_hi],
        trials=3,
    )
    raw = json.loads(open(cfg).read())
    del raw["pairs"]
    open(cfg, "w").write(json.dumps(raw))
    out_dir = tmp_path / "curve"
    assert main(["experiment", "--config", cfg, "--out", str(out_dir)]) == 0
    capsys.readouterr()
    summary = json.loads((out_dir / "summary.json").read_text())
    means = {p["a"]: p["mean_mismatch"] for p in summary["points"]}
    assert means[a_hi] <= means[1.2]


def test_usage_without_subcommand_is_exit_two(capsys):
    assert main([]) == 2
    capsys.readouterr()


# ------------------------------------------------------------- subprocess


def test_console_script_and_log_levels(tmp_path):
    env = dict(os.environ, HYPERCOMM_LOG="warn")
    # a saturating rate triggers the clamp warning on stderr at warn level
    warn = subprocess.run(
        [sys.executable, "-c",
         "import sys; from hypercomm.cli import main; sys.exit(main(sys.argv[1:]))",
         "sample", "--n", "8", "--layers", "2:50:1", "--out", str(tmp_path / "w.json")],
        capture_output=True, text=True, env=env,
    )
    assert warn.returncode == 0
    assert "clamp" in warn.stderr
    env["HYPERCOMM_LOG"] = "error"
    quiet = subprocess.run(
        [sys.executable, "-c",
         "import sys; from hypercomm.cli import main; sys.exit(main(sys.argv[1:]))",
         "sample", "--n", "8", "--layers", "2:50:1", "--out", str(tmp_path / "q.json")],
        capture_output=True, text=True, env=env,
    )
    assert quiet.returncode == 0
    assert "clamp" not in quiet.stderr
