import numpy as np
import pytest

from conftest import cycle_graph, random_connected_graph
from forestlab.analytics import components
from forestlab.errors import ConfigError
from forestlab.forests import ForestConfig, sample_labels
from forestlab.models import make_sampler
from forestlab.walks import (
    decorated_experiment,
    delayed_srw,
    indist_experiment,
    pivotal_scan,
    predicate_min_size,
    stationarity_check,
)


def test_delayed_walk_stays_on_cluster(rng):
    g = cycle_graph(6)
    omega = ForestConfig(g, frozenset({0, 1, 3, 4}))
    trace = delayed_srw(g, omega, "v0", 50, 50, rng)
    cluster = {"v0", "v1", "v2"}
    assert set(trace.forward) <= cluster
    assert set(trace.backward) <= cluster
    assert trace.position(0) == "v0"
    # every accepted step used a forest edge; every rejected one did not
    for eid, accepted in trace.steps:
        assert accepted == (eid in omega.edges)


def test_delayed_walk_deterministic(rng):
    g = cycle_graph(6)
    omega = ForestConfig(g, frozenset({0, 1, 3, 4}))
    t1 = delayed_srw(g, omega, "v0", 20, 20, np.random.default_rng(7))
    t2 = delayed_srw(g, omega, "v0", 20, 20, np.random.default_rng(7))
    assert t1 == t2


def test_stationarity_smoke(rng):
    g = cycle_graph(5)
    out = stationarity_check(
        "omega_degree", g, make_sampler(g, "fusf"), "v0", 200, rng
    )
    assert out["replicates"] == 200
    assert out["mean_diff"] < 5 * out["combined_se"] + 1e-9
    with pytest.raises(ConfigError):
        stationarity_check("nope", g, make_sampler(g, "fusf"), "v0", 5, rng)


def test_pivotal_scan_explicit_flip():
    g = cycle_graph(6)
    omega = ForestConfig(g, frozenset({0, 1, 3, 4}))
    pred = predicate_min_size(4)
    # inserting edge 2 (v2,v3) and deleting 4 (v4,v5) makes {v0..v4} size 5
    pair = pivotal_scan(g, omega, pred, 2, "v2", 0, mode="explicit", pivot=4)
    assert pair is not None
    assert pair.z in ("v2", "v3")
    assert pair.pre_types[pair.z] is False
    assert pair.post_types[pair.z] is True


def test_pivotal_scan_no_flip():
    g = cycle_graph(6)
    omega = ForestConfig(g, frozenset({0, 1, 3, 4}))
    pred = predicate_min_size(2)  # both clusters already qualify
    pair = pivotal_scan(g, omega, pred, 2, "v2", 0, mode="explicit", pivot=4)
    assert pair is None


def test_pivotal_scan_msf_mode(rng):
    from forestlab.forests import kruskal_forest
    from forestlab.graphs import wire_boundary

    for _ in range(50):
        g = random_connected_graph(rng, n_min=5, n_max=8, boundary_frac=0.4)
        gh = wire_boundary(g)
        labels = sample_labels(gh, rng)
        omega = ForestConfig(gh, kruskal_forest(gh, labels) - gh.wired_star())
        comp = {v: c for c in components(omega) for v in c}
        for e in sorted(gh.window_edges() - omega.edges):
            x, y = gh.endpoints(e)
            if comp[x] is comp[y]:
                continue
            # after the surgery x and y share a cluster containing all of
            # C_y plus x, so a floor of |C_y| + 1 is always newly met by y
            pred = predicate_min_size(len(comp[y]) + 1)
            pair = pivotal_scan(
                gh, omega, pred, e, x, 0, mode="msf", labels=labels
            )
            assert pair is not None
            assert pair.post_types[pair.z] is True
            return
    pytest.skip("no separated wired MSF instance found")


def test_indist_experiment_smoke():
    report = indist_experiment(
        {
            "model": {"builder": "torus", "params": {"dimension": 2, "side": 4}},
            "forest": "fmsf",
            "statistic": "leaf_density",
            "min_cluster_size": 2,
            "replicates": 5,
            "permutations": 50,
            "seed": 11,
        }
    )
    assert len(report["replicates"]) == 5
    summary = report["summary"]
    assert summary["n_tested"] + summary["n_insufficient"] == 5
    # a torus UST/MSF window is one spanning tree: often only one cluster
    for entry in report["replicates"]:
        assert entry["clusters"]


def test_decorated_experiment_smoke():
    report = decorated_experiment(
        {
            "base": {"builder": "torus", "params": {"dimension": 2, "side": 4}},
            "forest": "fusf",
            "min_gadget_sites": 16,
            "target_clusters": 10,
            "max_replicates": 20,
            "seed": 3,
        }
    )
    assert report["n_clusters"] >= 10
    for cluster in report["clusters"]:
        assert cluster["coin"] in ("head", "tail")
        assert sum(cluster["frequencies"]) == pytest.approx(1.0)
    assert 0.0 <= report["auc_tail_vs_head"] <= 1.0
