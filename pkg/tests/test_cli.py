import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "forestlab.cli"]

TORUS_CFG = """
[graph]
builder = "torus"
[graph.params]
dimension = 2
side = 4

[run]
mode = "fusf"
replicates = 8
seed = 7
"""

WIRED_SURGERY_CFG = """
[graph]
builder = "edge_list"
[graph.params.spec]
vertices = [
  {id = "a", boundary = true, stubs = 1},
  {id = "b", boundary = true, stubs = 1},
]
edges = [["a", "b"]]

[surgery]
mode = "msf"
edge = ["a", "b"]
anchor = "a"
radius = 0
labels = [[0, 0.9], [1, 0.25], [2, 0.4]]
"""


def run_cli(*args, check=True):
    proc = subprocess.run(
        CLI + list(args), capture_output=True, text=True
    )
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def write_cfg(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_usage_exit_code():
    proc = run_cli("sample-ust", "--bogus-flag", check=False)
    assert proc.returncode == 2


def test_missing_config_exit_code(tmp_path):
    proc = run_cli("sample-ust", "--out", str(tmp_path), check=False)
    assert proc.returncode == 1


def test_sample_ust_artifacts(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG)
    out = tmp_path / "out"
    run_cli("sample-ust", "--config", cfg, "--out", str(out))
    lines = (out / "forests.jsonl").read_text().splitlines()
    assert len(lines) == 8
    for i, line in enumerate(lines):
        rec = json.loads(line)
        assert rec["sample_id"] == i
        assert rec["mode"] == "fusf"
        assert len(rec["edges"]) == 15  # spanning tree of 16 vertices
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 7
    assert "wall_time_s" in manifest


def test_sample_msf_records_labels(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG.replace('mode = "fusf"', 'mode = "fmsf"'))
    out = tmp_path / "out"
    run_cli("sample-msf", "--config", cfg, "--out", str(out))
    rec = json.loads((out / "forests.jsonl").read_text().splitlines()[0])
    assert len(rec["labels"]) == 32
    assert len(rec["edges"]) == 15


def test_sampler_mode_mismatch_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG)
    proc = run_cli("sample-msf", "--config", cfg, "--out", str(tmp_path / "o"),
                   check=False)
    assert proc.returncode == 1


def test_determinism_across_jobs(tmp_path):
    big = TORUS_CFG.replace("replicates = 8", "replicates = 200")
    cfg = write_cfg(tmp_path, big)
    outs = []
    for name, jobs in (("a", "1"), ("b", "1"), ("c", "4")):
        out = tmp_path / name
        run_cli("sample-ust", "--config", cfg, "--out", str(out),
                "--jobs", jobs)
        outs.append((out / "forests.jsonl").read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_seed_flag_overrides_config(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG)
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    run_cli("sample-ust", "--config", cfg, "--out", str(out1), "--seed", "99")
    run_cli("sample-ust", "--config", cfg, "--out", str(out2))
    assert (out1 / "forests.jsonl").read_bytes() != (out2 / "forests.jsonl").read_bytes()


def test_gen_roundtrip(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG)
    out = tmp_path / "out"
    run_cli("gen", "--config", cfg, "--out", str(out))
    spec = json.loads((out / "graph.json").read_text())
    assert len(spec["vertices"]) == 16
    assert len(spec["edges"]) == 32


def test_enumerate_small_graph(tmp_path):
    cfg = write_cfg(
        tmp_path,
        """
[graph]
builder = "edge_list"
[graph.params.spec]
vertices = [{id = "a"}, {id = "b"}, {id = "c"}]
edges = [["a", "b"], ["b", "c"], ["c", "a"]]
""",
    )
    out = tmp_path / "out"
    run_cli("enumerate", "--config", cfg, "--out", str(out))
    lines = (out / "trees.jsonl").read_text().splitlines()
    assert len(lines) == 3


def test_enumerate_cap_exit_code(tmp_path):
    cfg_text = TORUS_CFG.replace("[run]", "[run]\ntree_cap = 10")
    cfg = write_cfg(tmp_path, cfg_text, name="cap.toml")
    proc = run_cli("enumerate", "--config", cfg, "--out", str(tmp_path / "o"),
                   check=False)
    assert proc.returncode == 3


def test_surgery_record(tmp_path):
    cfg = write_cfg(tmp_path, WIRED_SURGERY_CFG)
    out = tmp_path / "out"
    run_cli("surgery", "--config", cfg, "--out", str(out))
    rec = json.loads((out / "surgery.json").read_text())
    assert rec["mode"] == "msf"
    assert rec["k"] == 1
    assert rec["thresholds"] == [0.4]
    assert rec["terminal"] == 2
    assert rec["pivot"] is None
    assert rec["result_edges"] == [0]


def test_analyze_from_forests(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG)
    out = tmp_path / "out"
    run_cli("sample-ust", "--config", cfg, "--out", str(out))
    run_cli("analyze", "--config", cfg, "--out", str(out))
    lines = (out / "clusters.csv").read_text().splitlines()
    assert lines[0].startswith("# schema:")
    assert len(lines) == 2 + 8  # schema + header + one cluster per sample


def test_walk_trace(tmp_path):
    cfg = write_cfg(tmp_path, TORUS_CFG + '\n[walk]\norigin = "0,0"\n')
    out = tmp_path / "out"
    run_cli("walk", "--config", cfg, "--out", str(out))
    rec = json.loads((out / "trace.json").read_text())
    assert rec["origin"] == "0,0"
    assert len(rec["forward"]) == 17
    assert len(rec["backward"]) == 17


def test_mtp_check_exact(tmp_path):
    cfg = write_cfg(
        tmp_path,
        TORUS_CFG
        + """
[mtp]
transport = "uniform_neighbors"
mode = "exact"
""",
    )
    out = tmp_path / "out"
    run_cli("mtp-check", "--config", cfg, "--out", str(out))
    rec = json.loads((out / "report.json").read_text())
    assert rec["equal"] is True


def test_experiment_decorated(tmp_path):
    cfg = write_cfg(
        tmp_path,
        """
[experiment.decorated]
forest = "fusf"
min_gadget_sites = 9
target_clusters = 4
max_replicates = 10
seed = 5
[experiment.decorated.base]
builder = "torus"
[experiment.decorated.base.params]
dimension = 2
side = 3
""",
    )
    out = tmp_path / "out"
    run_cli("experiment", "decorated", "--config", cfg, "--out", str(out))
    rec = json.loads((out / "report.json").read_text())
    assert rec["n_clusters"] >= 4


def test_validate_ok_and_failure(tmp_path):
    good = write_cfg(tmp_path, TORUS_CFG, name="good.toml")
    assert run_cli("validate", good, check=False).returncode == 0
    bad = write_cfg(
        tmp_path,
        TORUS_CFG.replace('mode = "fusf"', 'mode = "wusf"'),
        name="bad.toml",
    )
    proc = run_cli("validate", bad, check=False)
    assert proc.returncode == 1
    assert "boundary" in proc.stderr
