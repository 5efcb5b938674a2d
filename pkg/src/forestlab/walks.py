"""Delayed random walks on clusters, pivotal-pair scanning, and the
cluster-indistinguishability experiments (including the decorated-gadget
positive control)."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .analytics import auc_score, components, permutation_test
from .errors import ConfigError, SurgeryError
from .forests import UniformStream
from .graphs import build_decorated, gadget_edges
from .models import build_graph, make_sampler
from .surgery import (
    apply_surgery,
    msf_insert,
    msf_relabel,
    usf_pivot_edge,
    window_pivot_of,
)


@dataclass(frozen=True)
class WalkTrace:
    origin: str
    forward: tuple  # (W(0), W(1), ..., W(n))
    backward: tuple  # (W(0), W(-1), ..., W(-m))
    steps: tuple  # ((edge, accepted), ...) forward then backward

    def position(self, j):
        return self.forward[j] if j >= 0 else self.backward[-j]


def delayed_srw(g, omega, o, steps_forward, steps_backward, rng):
    """Two-sided delayed simple random walk: propose a uniform incident edge
    of the ambient graph, move only if it lies in the forest."""
    fwd_rng, bwd_rng = rng.spawn(2)
    log = []

    def half(n, stream):
        pos = [o]
        for _ in range(n):
            nbrs = g.incident(pos[-1])
            w, eid = nbrs[stream.index(len(nbrs))]
            accepted = eid in omega.edges
            log.append((eid, accepted))
            pos.append(w if accepted else pos[-1])
        return tuple(pos)

    forward = half(steps_forward, UniformStream(fwd_rng))
    backward = half(steps_backward, UniformStream(bwd_rng))
    return WalkTrace(o, forward, backward, tuple(log))


OBSERVABLES = {
    "omega_degree": lambda omega, v: omega.degree(v),
    "cluster_size": lambda omega, v: _cluster_size(omega, v),
    "constant_one": lambda omega, v: 1.0,
}


def _cluster_size(omega, v):
    for comp in components(omega):
        if v in comp:
            return len(comp)
    return 1


def stationarity_check(observable, g, sampler, origin, replicates, rng):
    """Compare the law of an observable at W(0) and after one delayed step,
    over independent forest replicates."""
    if observable not in OBSERVABLES:
        raise ConfigError("unknown observable %r" % (observable,))
    obs = OBSERVABLES[observable]
    at0 = np.empty(replicates)
    at1 = np.empty(replicates)
    for i in range(replicates):
        child, = rng.spawn(1)
        omega = sampler(child)
        trace = delayed_srw(g, omega, origin, 1, 0, child)
        at0[i] = obs(omega, trace.position(0))
        at1[i] = obs(omega, trace.position(1))
    se0 = float(at0.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0
    se1 = float(at1.std(ddof=1) / np.sqrt(replicates)) if replicates > 1 else 0.0
    from scipy.stats import ks_2samp

    ks = ks_2samp(at0, at1)
    return {
        "observable": observable,
        "replicates": replicates,
        "mean_w0": float(at0.mean()),
        "mean_w1": float(at1.mean()),
        "se_w0": se0,
        "se_w1": se1,
        "mean_diff": float(abs(at0.mean() - at1.mean())),
        "combined_se": float(np.hypot(se0, se1)),
        "ks_statistic": float(ks.statistic),
    }


@dataclass(frozen=True)
class TypePredicate:
    """Window-computable cluster property with a declared dependence radius."""

    name: str
    radius: Optional[int]
    evaluate: Callable  # (omega, cluster: frozenset) -> bool


def predicate_min_size(k):
    return TypePredicate(
        name="min_size_%d" % k,
        radius=None,
        evaluate=lambda omega, cluster: len(cluster) >= k,
    )


def predicate_has_boundary():
    return TypePredicate(
        name="has_boundary",
        radius=None,
        evaluate=lambda omega, cluster: any(
            omega.graph.mark(v).boundary for v in cluster
        ),
    )


def predicate_true():
    return TypePredicate("always", None, lambda omega, cluster: True)


@dataclass(frozen=True)
class PivotalPair:
    edge: int
    pivot: Optional[int]
    radius: int
    z: str  # endpoint whose type flipped
    pre_types: dict
    post_types: dict


def _cluster_containing(omega, v):
    for comp in components(omega):
        if v in comp:
            return comp
    raise ConfigError("vertex %r outside the window" % (v,))


def pivotal_scan(g, omega, pred, e, anchor, r, mode="explicit", *, pivot=None,
                 tree=None, labels=None):
    """Compute the compensating edge for the forest's mode, apply the surgery,
    and report whether the type of an endpoint of e flipped.

    mode "usf" needs `tree`, the ambient (possibly wired) spanning tree that
    omega is the window of; mode "msf" needs `labels`, an injective labelling
    of the ambient graph; mode "explicit" takes `pivot` directly.
    """
    x, y = g.endpoints(e)
    if anchor not in (x, y):
        raise SurgeryError("bad-anchor", "%r is not an endpoint of %r" % (anchor, e))
    if mode == "usf":
        g_amb = tree.graph
        f_amb = usf_pivot_edge(tree, e, anchor, r)
        f = window_pivot_of(g_amb, f_amb)
    elif mode == "msf":
        g_amb = g if labels.keys() == g.edges.keys() else None
        if g_amb is None:
            raise ConfigError("msf mode needs labels on the ambient graph g")
        rel = msf_relabel(g, labels, e, anchor, r)
        msf_insert(g, rel, e)
        f = rel.window_pivot
    elif mode == "explicit":
        f = pivot
    else:
        raise ConfigError("unknown pivotal mode %r" % (mode,))
    pre = {
        x: pred.evaluate(omega, _cluster_containing(omega, x)),
        y: pred.evaluate(omega, _cluster_containing(omega, y)),
    }
    after = apply_surgery(omega, e, f)
    post = {
        x: pred.evaluate(after, _cluster_containing(after, x)),
        y: pred.evaluate(after, _cluster_containing(after, y)),
    }
    if pre[x] != post[x]:
        z = x
    elif pre[y] != post[y]:
        z = y
    else:
        return None
    return PivotalPair(e, f, r, z, pre, post)


STATISTICS = {
    # name -> per-vertex value inside a cluster; cluster scalar is the mean
    "leaf_density": lambda omega, v: 1.0 if omega.degree(v) == 1 else 0.0,
    "mean_degree": lambda omega, v: float(omega.degree(v)),
}


def indist_experiment(config):
    """Sample forests, compare a cluster statistic between large clusters with
    permutation tests; reports evidence, no verdict."""
    g = build_graph(config["model"])
    sampler = make_sampler(g, config["forest"])
    stat_name = config.get("statistic", "leaf_density")
    if stat_name not in STATISTICS:
        raise ConfigError("unknown statistic %r" % (stat_name,))
    stat = STATISTICS[stat_name]
    floor = int(config.get("min_cluster_size", 2))
    replicates = int(config.get("replicates", 100))
    n_perm = int(config.get("permutations", 500))
    rng = np.random.default_rng(np.random.SeedSequence(int(config.get("seed", 0))))
    boundary_dist = _boundary_distances(g)
    rows = []
    pvalues = []
    insufficient = 0
    for i in range(replicates):
        child, = rng.spawn(1)
        omega = sampler(child)
        qualifying = sorted(
            (c for c in components(omega) if len(c) >= floor),
            key=len,
            reverse=True,
        )
        entry = {"replicate": i, "clusters": []}
        for c in qualifying:
            values = [stat(omega, v) for v in sorted(c)]
            entry["clusters"].append(
                {
                    "size": len(c),
                    "statistic": float(np.mean(values)),
                    "boundary_distance": min(boundary_dist.get(v, -1) for v in c),
                }
            )
        if len(qualifying) < 2:
            entry["insufficient_clusters"] = True
            insufficient += 1
        else:
            a = [stat(omega, v) for v in sorted(qualifying[0])]
            b = [stat(omega, v) for v in sorted(qualifying[1])]
            p = permutation_test(a, b, child, n_perm=n_perm)
            entry["permutation_p"] = p
            pvalues.append(p)
        rows.append(entry)
    values = [c["statistic"] for e in rows for c in e["clusters"]]
    summary = {
        "n_insufficient": insufficient,
        "n_tested": len(pvalues),
        "p_quantiles": _quantiles(pvalues),
        "statistic_quantiles": _quantiles(values),
    }
    return {"config": dict(config), "replicates": rows, "summary": summary}


def _quantiles(xs):
    if not xs:
        return None
    qs = np.quantile(np.asarray(xs, dtype=float), [0.05, 0.25, 0.5, 0.75, 0.95])
    return [float(q) for q in qs]


def _boundary_distances(g):
    from collections import deque

    dist = {}
    queue = deque()
    for v in g.vertices:
        if g.mark(v).boundary:
            dist[v] = 0
            queue.append(v)
    while queue:
        u = queue.popleft()
        for w, _ in g.incident(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


# -- decorated positive control -----------------------------------------

HEAD_LAW = (1 / 3, 1 / 3, 1 / 3)
TAIL_LAW = (1 / 2, 1 / 4, 1 / 4)
PATTERN_NAMES = ("cherry", "path_prime", "path_double_prime")


def _choose_pattern(stream, law):
    u = stream.uniform()
    if u < law[0]:
        return 0
    if u < law[0] + law[1]:
        return 1
    return 2


def decorated_experiment(config):
    """Gadget-decoration experiment: per base cluster a hidden fair coin picks
    the gadget law (head: uniform over the three patterns; tail: cherry with
    probability 1/2).  Reports per-cluster pattern frequencies and the AUC of
    separating the coin by thresholding the cherry frequency."""
    base = build_graph(config["base"])
    if base.has_roles():
        raise ConfigError("base graph is already decorated")
    decorated = build_decorated(base)
    sampler = make_sampler(base, config.get("forest", "fusf"))
    min_sites = int(config.get("min_gadget_sites", 200))
    target = int(config.get("target_clusters", 100))
    max_replicates = int(config.get("max_replicates", 10 * target))
    rng = np.random.default_rng(np.random.SeedSequence(int(config.get("seed", 0))))
    assert all(gadget_edges(decorated, v) for v in base.vertices)
    clusters = []
    replicates = 0
    while len(clusters) < target and replicates < max_replicates:
        child, = rng.spawn(1)
        stream = UniformStream(child)
        omega = sampler(child)
        for comp in components(omega):
            if len(comp) < min_sites:
                continue
            head = stream.uniform() < 0.5
            law = HEAD_LAW if head else TAIL_LAW
            counts = [0, 0, 0]
            for v in sorted(comp):
                counts[_choose_pattern(stream, law)] += 1
            n = len(comp)
            clusters.append(
                {
                    "coin": "head" if head else "tail",
                    "n_sites": n,
                    "frequencies": [c / n for c in counts],
                    "cherry_frequency": counts[0] / n,
                }
            )
        replicates += 1
    heads = [c["cherry_frequency"] for c in clusters if c["coin"] == "head"]
    tails = [c["cherry_frequency"] for c in clusters if c["coin"] == "tail"]
    auc = auc_score(tails, heads) if heads and tails else None
    # per-cluster 3-SE agreement with the configured laws
    within = 0
    for c in clusters:
        law = HEAD_LAW if c["coin"] == "head" else TAIL_LAW
        n = c["n_sites"]
        ok = all(
            abs(f - p) <= 3 * np.sqrt(p * (1 - p) / n)
            for f, p in zip(c["frequencies"], law)
        )
        within += ok
    return {
        "config": dict(config),
        "replicates_used": replicates,
        "n_clusters": len(clusters),
        "clusters": clusters,
        "auc_tail_vs_head": auc,
        "n_within_3se": within,
        "pattern_names": list(PATTERN_NAMES),
    }
