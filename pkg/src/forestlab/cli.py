"""Reproducible experiment orchestration.

Configs are TOML; data artifacts are JSONL/CSV with stable key order, so a
(config, seed, code version) triple reproduces them byte for byte at any
worker count.  The manifest additionally records wall time and is the one
artifact excluded from the byte-identity contract.

Exit codes: 0 ok, 1 validation failure, 2 usage, 3 cap exceeded.
"""

import functools
import json
import sys
import time

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .analytics import TransportSpec, cluster_stats, mtp_check, write_cluster_csv
from .errors import CapExceededError, ConfigError, ForestLabError
from .forests import ForestConfig, kruskal_forest, sample_labels, wire_boundary
from .graphs import build_from_edge_list, graph_to_spec
from .models import FOREST_MODES, build_graph, make_sampler
from .oracles import enumerate_spanning_trees
from .surgery import msf_insert, msf_relabel, usf_pivot_edge, window_pivot_of
from .walks import decorated_experiment, delayed_srw, indist_experiment

CHUNK = 64


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_config(path):
    if path is None:
        raise ConfigError("--config is required")
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _graph_from_config(cfg):
    gcfg = cfg.get("graph")
    if gcfg is None:
        raise ConfigError("config has no [graph] section")
    if "file" in gcfg:
        with open(gcfg["file"]) as fh:
            return build_from_edge_list(json.load(fh))
    return build_graph(gcfg)


def _replicate_seed(master, index):
    return np.random.default_rng(np.random.SeedSequence(master, spawn_key=(index,)))


def _sample_chunk(args):
    cfg, mode, master, indices = args
    g = _graph_from_config(cfg)
    records = []
    with_labels = mode in ("fmsf", "wmsf")
    if with_labels and mode == "wmsf":
        gh = wire_boundary(g)
        star = gh.wired_star()
    for i in indices:
        rng = _replicate_seed(master, i)
        rec = {"sample_id": i, "seed": master, "mode": mode}
        if mode == "wmsf":
            labels = sample_labels(gh, rng)
            forest = kruskal_forest(gh, labels) - star
            rec["labels"] = [[e, labels[e]] for e in sorted(labels)]
        elif mode == "fmsf":
            labels = sample_labels(g, rng)
            forest = kruskal_forest(g, labels)
            rec["labels"] = [[e, labels[e]] for e in sorted(labels)]
        else:
            forest = make_sampler(g, mode)(rng).edges
        rec["edges"] = sorted(forest)
        records.append(rec)
    return records


def _run_replicates(cfg, mode, master, n, jobs):
    chunks = [
        (cfg, mode, master, list(range(lo, min(lo + CHUNK, n))))
        for lo in range(0, n, CHUNK)
    ]
    if jobs <= 1 or len(chunks) == 1:
        results = [_sample_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sample_chunk, chunks))
    return [rec for chunk in results for rec in chunk]


def _write_manifest(out, cfg, seed, started):
    manifest = {
        "config": cfg,
        "seed": seed,
        "code_version": __version__,
        "wall_time_s": round(time.time() - started, 3),
    }
    (out / "manifest.json").write_text(_dumps(manifest) + "\n")


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapExceededError as err:
            click.echo("cap exceeded: %s" % err, err=True)
            sys.exit(3)
        except (ConfigError, ForestLabError, OSError) as err:
            click.echo("error: %s" % err, err=True)
            sys.exit(1)

    return wrapper


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None)(fn)
    fn = click.option("--seed", type=int, default=None)(fn)
    fn = click.option("--out", "out_dir", type=click.Path(), default=".")(fn)
    fn = click.option("--jobs", type=int, default=1)(fn)
    return fn


def _resolve_seed(cfg, seed):
    if seed is not None:
        return int(seed)
    return int(cfg.get("run", {}).get("seed", 0))


@click.group()
def main():
    """Spanning-forest laboratory."""


@main.command()
@_common
@_handle_errors
def gen(config_path, seed, out_dir, jobs):
    """Emit the configured graph as a JSON spec file."""
    started = time.time()
    cfg = _load_config(config_path)
    g = _graph_from_config(cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "graph.json").write_text(_dumps(graph_to_spec(g)) + "\n")
    _write_manifest(out, cfg, _resolve_seed(cfg, seed), started)


def _sample_command(cfg, seed, out_dir, jobs, allowed, default_mode):
    started = time.time()
    mode = cfg.get("run", {}).get("mode", default_mode)
    if mode not in allowed:
        raise ConfigError("mode %r not valid here (allowed: %s)" % (mode, allowed))
    n = int(cfg.get("run", {}).get("replicates", 1))
    master = _resolve_seed(cfg, seed)
    records = _run_replicates(cfg, mode, master, n, jobs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "forests.jsonl", "w") as fh:
        for rec in records:
            fh.write(_dumps(rec) + "\n")
    _write_manifest(out, cfg, master, started)


@main.command("sample-ust")
@_common
@_handle_errors
def sample_ust(config_path, seed, out_dir, jobs):
    """Sample uniform spanning forests (fusf or wusf windows)."""
    cfg = _load_config(config_path)
    _sample_command(cfg, seed, out_dir, jobs, ("fusf", "wusf"), "fusf")


@main.command("sample-msf")
@_common
@_handle_errors
def sample_msf(config_path, seed, out_dir, jobs):
    """Sample minimal spanning forests (fmsf or wmsf windows)."""
    cfg = _load_config(config_path)
    _sample_command(cfg, seed, out_dir, jobs, ("fmsf", "wmsf"), "fmsf")


@main.command()
@_common
@click.option("--mode", "surgery_mode", type=click.Choice(["usf", "msf"]),
              default=None)
@click.option("--edge", "edge_spec", type=str, default=None,
              help="endpoints as u,v")
@click.option("--anchor", type=str, default=None)
@click.option("--radius", type=int, default=None)
@_handle_errors
def surgery(config_path, seed, out_dir, jobs, surgery_mode, edge_spec, anchor,
            radius):
    """Run one surgery instance and emit a SurgeryRecord JSON."""
    started = time.time()
    cfg = _load_config(config_path)
    scfg = dict(cfg.get("surgery", {}))
    if surgery_mode is not None:
        scfg["mode"] = surgery_mode
    if edge_spec is not None:
        scfg["edge"] = edge_spec.split(",")
    if anchor is not None:
        scfg["anchor"] = anchor
    if radius is not None:
        scfg["radius"] = radius
    for key in ("mode", "edge", "anchor", "radius"):
        if key not in scfg:
            raise ConfigError("surgery config missing %r" % key)
    g = _graph_from_config(cfg)
    master = _resolve_seed(cfg, seed)
    rng = _replicate_seed(master, 0)
    gh = wire_boundary(g)
    u, v = scfg["edge"]
    eid = _find_edge(gh, u, v)
    r = int(scfg["radius"])
    x = scfg["anchor"]
    if scfg["mode"] == "usf":
        from .forests import wilson_ust

        tree = wilson_ust(gh, gh.wired, rng)
        f_amb = usf_pivot_edge(tree, eid, x, r)
        f = window_pivot_of(gh, f_amb)
        result_edges = sorted((tree.edges | {eid}) - {f_amb} - gh.wired_star())
        record = {
            "mode": "usf",
            "edge": eid,
            "anchor": x,
            "radius": r,
            "pivot": f,
            "ambient_pivot": f_amb,
            "result_edges": result_edges,
        }
    else:
        if "labels" in scfg:
            labels = {int(k): float(val) for k, val in scfg["labels"]}
        else:
            labels = sample_labels(gh, rng)
        rel = msf_relabel(gh, labels, eid, x, r)
        _, forest = msf_insert(gh, rel, eid)
        record = {
            "mode": "msf",
            "edge": eid,
            "anchor": x,
            "radius": r,
            "pivot": rel.window_pivot,
            "terminal": rel.terminal,
            "k": rel.k,
            "thresholds": list(rel.thresholds),
            "pivot_sequence": list(rel.pivots),
            "result_edges": sorted(forest.edges - gh.wired_star()),
        }
    record["seed"] = master
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "surgery.json").write_text(_dumps(record) + "\n")
    _write_manifest(out, cfg, master, started)


def _find_edge(g, u, v):
    for eid in sorted(g.edges):
        if set(g.endpoints(eid)) == {u, v}:
            return eid
    raise ConfigError("no edge between %r and %r" % (u, v))


@main.command("enumerate")
@_common
@_handle_errors
def enumerate_cmd(config_path, seed, out_dir, jobs):
    """Dump all spanning trees of the configured graph as JSONL."""
    started = time.time()
    cfg = _load_config(config_path)
    g = _graph_from_config(cfg)
    cap = int(cfg.get("run", {}).get("tree_cap", 10**5))
    enum = enumerate_spanning_trees(g, cap=cap)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "trees.jsonl", "w") as fh:
        for i, tree in enumerate(sorted(sorted(t) for t in enum.trees)):
            fh.write(_dumps({"tree_id": i, "edges": tree}) + "\n")
    _write_manifest(out, cfg, _resolve_seed(cfg, seed), started)


@main.command()
@_common
@click.option("--forests", "forests_path", type=click.Path(), default=None,
              help="forests.jsonl produced by a sample command")
@_handle_errors
def analyze(config_path, seed, out_dir, jobs, forests_path):
    """Per-cluster statistics CSV for previously sampled forests."""
    started = time.time()
    cfg = _load_config(config_path)
    g = _graph_from_config(cfg)
    if forests_path is None:
        forests_path = str(Path(out_dir) / "forests.jsonl")
    rows = []
    with open(forests_path) as fh:
        for line in fh:
            rec = json.loads(line)
            omega = ForestConfig(g, frozenset(rec["edges"]), mode=rec["mode"])
            rows.append((rec["sample_id"], cluster_stats(omega, g)))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_cluster_csv(out / "clusters.csv", rows)
    _write_manifest(out, cfg, _resolve_seed(cfg, seed), started)


@main.command()
@_common
@_handle_errors
def walk(config_path, seed, out_dir, jobs):
    """Sample one forest and a two-sided delayed walk on it."""
    started = time.time()
    cfg = _load_config(config_path)
    g = _graph_from_config(cfg)
    wcfg = cfg.get("walk", {})
    mode = cfg.get("run", {}).get("mode", "fusf")
    master = _resolve_seed(cfg, seed)
    rng = _replicate_seed(master, 0)
    omega = make_sampler(g, mode)(rng)
    origin = wcfg.get("origin", g.vertex_list()[0])
    trace = delayed_srw(
        g,
        omega,
        origin,
        int(wcfg.get("steps_forward", 16)),
        int(wcfg.get("steps_backward", 16)),
        rng,
    )
    record = {
        "seed": master,
        "origin": trace.origin,
        "forward": list(trace.forward),
        "backward": list(trace.backward),
        "steps": [[eid, bool(acc)] for eid, acc in trace.steps],
        "forest_edges": sorted(omega.edges),
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.json").write_text(_dumps(record) + "\n")
    _write_manifest(out, cfg, master, started)


@main.command("mtp-check")
@_common
@_handle_errors
def mtp_check_cmd(config_path, seed, out_dir, jobs):
    """Mass transport principle check (exact or Monte Carlo)."""
    started = time.time()
    cfg = _load_config(config_path)
    g = _graph_from_config(cfg)
    mcfg = cfg.get("mtp", {})
    spec = TransportSpec(
        name=mcfg.get("transport", "zero"),
        params=dict(mcfg.get("params", {})),
        mode=mcfg.get("mode", "exact"),
    )
    master = _resolve_seed(cfg, seed)
    report = mtp_check(
        spec,
        g,
        replicates=int(mcfg.get("replicates", 1)),
        rng=_replicate_seed(master, 0),
        mark_prob=float(mcfg.get("mark_prob", 0.25)),
    )
    report = {k: (str(v) if not isinstance(v, (int, float, bool, str)) else v)
              for k, v in report.items()}
    report["seed"] = master
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(_dumps(report) + "\n")
    _write_manifest(out, cfg, master, started)


@main.group()
def experiment():
    """Indistinguishability experiments."""


def _experiment_config(cfg, seed, section):
    ecfg = dict(cfg.get("experiment", {}).get(section, {}))
    if seed is not None:
        ecfg["seed"] = int(seed)
    return ecfg


@experiment.command()
@_common
@_handle_errors
def indist(config_path, seed, out_dir, jobs):
    """Between-cluster statistic comparison with permutation tests."""
    started = time.time()
    cfg = _load_config(config_path)
    ecfg = _experiment_config(cfg, seed, "indist")
    report = indist_experiment(ecfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(_dumps(report) + "\n")
    _write_manifest(out, cfg, int(ecfg.get("seed", 0)), started)


@experiment.command()
@_common
@_handle_errors
def decorated(config_path, seed, out_dir, jobs):
    """Decorated-gadget positive control."""
    started = time.time()
    cfg = _load_config(config_path)
    ecfg = _experiment_config(cfg, seed, "decorated")
    report = decorated_experiment(ecfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(_dumps(report) + "\n")
    _write_manifest(out, cfg, int(ecfg.get("seed", 0)), started)


@main.command()
@click.argument("config_file", type=click.Path())
def validate(config_file):
    """Schema and cross-field checks without running anything."""
    diagnostics = []
    try:
        with open(config_file, "rb") as fh:
            cfg = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as err:
        click.echo("cannot read config: %s" % err, err=True)
        sys.exit(1)
    run = cfg.get("run", {})
    mode = run.get("mode")
    if mode is not None and mode not in FOREST_MODES:
        diagnostics.append("run.mode: unknown forest mode %r" % mode)
    if int(run.get("replicates", 1)) < 1:
        diagnostics.append("run.replicates: must be >= 1")
    g = None
    if "graph" in cfg:
        try:
            g = _graph_from_config(cfg)
        except (ForestLabError, KeyError, OSError) as err:
            diagnostics.append("graph: %s" % err)
    if g is not None and mode in ("wusf", "wmsf"):
        if not any(g.mark(v).boundary for v in g.vertices):
            diagnostics.append("run.mode: wired mode needs boundary marks")
    scfg = cfg.get("surgery", {})
    if "radius" in scfg and int(scfg["radius"]) < 0:
        diagnostics.append("surgery.radius: must be >= 0")
    if g is not None and "radius" in scfg:
        anchor = scfg.get("anchor")
        if anchor in g.vertices and int(scfg["radius"]) >= g.eccentricity(anchor):
            diagnostics.append("surgery.radius: not below the window radius")
    wcfg = cfg.get("walk", {})
    if g is not None and "origin" in wcfg and wcfg["origin"] not in g.vertices:
        diagnostics.append("walk.origin: vertex not in graph")
    for d in diagnostics:
        click.echo(d, err=True)
    sys.exit(1 if diagnostics else 0)


if __name__ == "__main__":
    main()
