"""Cluster statistics and structural diagnostics: components, a finite-window
ends proxy, growth estimates, touching points, and a Mass Transport Principle
checker (exact on vertex-transitive windows, Monte Carlo otherwise)."""

import csv
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ForestLabError, GraphSpecError
from .forests import DisjointSets

CLUSTER_CSV_SCHEMA = "forestlab-clusters-v1"


@dataclass(frozen=True)
class ClusterStats:
    cluster_id: int
    n_vertices: int
    ends_proxy: int
    leaf_density: float
    mean_degree: float
    boundary_contacts: int


def components(omega):
    """Connected components of the forest window, singletons included,
    ordered by their smallest vertex in graph order."""
    g = omega.graph
    uf = DisjointSets(g.vertex_list())
    star = g.wired_star()
    for eid in omega.edges:
        if eid in star:
            continue
        u, v = g.endpoints(eid)
        uf.union(u, v)
    by_root = {}
    for v in g.window_vertices():
        by_root.setdefault(uf.find(v), []).append(v)
    return [frozenset(vs) for vs in by_root.values()]


def cluster_of(omega, x):
    for comp in components(omega):
        if x in comp:
            return comp
    raise GraphSpecError("vertex %r not in the window" % (x,))


def ends_proxy(omega, g, x, r):
    """Components of C_x minus the radius-r ball that reach a boundary-marked
    vertex; the finite stand-in for counting ends."""
    cluster = cluster_of(omega, x)
    ball = g.ball(x, r)
    remaining = [v for v in cluster if v not in ball]
    if not remaining:
        return 0
    uf = DisjointSets(remaining)
    keep = set(remaining)
    for eid in omega.edges:
        u, v = g.endpoints(eid)
        if u in keep and v in keep:
            uf.union(u, v)
    reaching = set()
    for v in remaining:
        if g.mark(v).boundary:
            reaching.add(uf.find(v))
    return len(reaching)


def growth_estimate(omega, x):
    """Ball sizes of x's cluster per radius, plus the least-squares slope of
    the log-sizes over radii clipped away from the window boundary."""
    g = omega.graph
    cluster = cluster_of(omega, x)
    adj = {v: [] for v in cluster}
    for eid in omega.edges:
        u, v = g.endpoints(eid)
        if u in adj and v in adj:
            adj[u].append(v)
            adj[v].append(u)
    dist = {x: 0}
    frontier = [x]
    d = 0
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d + 1
                    nxt.append(w)
        frontier = nxt
        d += 1
    cluster_radius = max(dist.values())
    sizes = [0] * (cluster_radius + 1)
    for d in dist.values():
        sizes[d] += 1
    sizes = list(np.cumsum(sizes))
    window_radius = g.eccentricity(x)
    top = min(window_radius - 1, cluster_radius)
    radii = list(range(1, top + 1))
    if len(radii) < 2:
        rate = 0.0
    else:
        rate = float(np.polyfit(radii, np.log([sizes[r] for r in radii]), 1)[0])
    return [int(s) for s in sizes], rate


def touching_points(omega, g, cluster, other):
    """Vertices of `cluster` with an ambient edge (not in the forest) into
    `other`."""
    if cluster == other:
        raise GraphSpecError("touching points need two distinct clusters")
    out = set()
    for eid, (u, v) in g.edges.items():
        if eid in omega.edges:
            continue
        if u in cluster and v in other:
            out.add(u)
        elif v in cluster and u in other:
            out.add(v)
    return frozenset(out)


def cluster_stats(omega, g, r=1):
    """One ClusterStats row per component."""
    rows = []
    for cid, comp in enumerate(components(omega)):
        degs = [omega.degree(v) for v in comp]
        leaves = sum(1 for d in degs if d == 1)
        contacts = sum(1 for v in comp if g.mark(v).boundary)
        anchor = sorted(comp)[0]
        rows.append(
            ClusterStats(
                cluster_id=cid,
                n_vertices=len(comp),
                ends_proxy=ends_proxy(omega, g, anchor, r),
                leaf_density=leaves / len(comp),
                mean_degree=sum(degs) / len(comp),
                boundary_contacts=contacts,
            )
        )
    return rows


def write_cluster_csv(path, rows_by_sample):
    """rows_by_sample: list of (sample_id, [ClusterStats])."""
    with open(path, "w", newline="") as fh:
        fh.write("# schema: %s\n" % CLUSTER_CSV_SCHEMA)
        writer = csv.writer(fh)
        writer.writerow(
            [
                "sample_id",
                "cluster_id",
                "n_vertices",
                "ends_proxy",
                "leaf_density",
                "mean_degree",
                "boundary_contacts",
            ]
        )
        for sample_id, rows in rows_by_sample:
            for s in rows:
                writer.writerow(
                    [
                        sample_id,
                        s.cluster_id,
                        s.n_vertices,
                        s.ends_proxy,
                        "%.12g" % s.leaf_density,
                        "%.12g" % s.mean_degree,
                        s.boundary_contacts,
                    ]
                )


# -- mass transport ------------------------------------------------------


@dataclass(frozen=True)
class TransportSpec:
    name: str
    params: dict
    mode: str  # "exact" | "monte-carlo"


def _transport_shift(g, params, _marks):
    """Send mass 1 to the coordinate-shifted vertex on a torus."""
    offset = params["offset"]

    def phi(x):
        coord = [int(c) for c in x.split(",")]
        side = params["side"]
        target = [(c + o) % side for c, o in zip(coord, offset)]
        return {",".join(str(c) for c in target): Fraction(1)}

    return phi


def _transport_uniform_neighbors(g, _params, _marks):
    def phi(x):
        nbrs = g.incident(x)
        share = Fraction(1, len(nbrs))
        out = {}
        for w, _ in nbrs:
            out[w] = out.get(w, Fraction(0)) + share
        return out

    return phi


def _transport_zero(_g, _params, _marks):
    return lambda x: {}


def _transport_nearest_marked(g, _params, marks):
    """Send mass 1 to the nearest marked vertex, ties split evenly."""
    marked = marks

    def phi(x):
        dist = g.distances_from(x)
        reachable = [m for m in marked if m in dist]
        if not reachable:
            return {}
        best = min(dist[m] for m in reachable)
        nearest = sorted(m for m in reachable if dist[m] == best)
        share = Fraction(1, len(nearest))
        return {m: share for m in nearest}

    return phi


TRANSPORTS = {
    "shift": _transport_shift,
    "uniform_neighbors": _transport_uniform_neighbors,
    "zero": _transport_zero,
    "nearest_marked": _transport_nearest_marked,
}


def _transport_sums(g, phi):
    """Per-vertex sent/received totals for a deterministic transport."""
    sent = {v: Fraction(0) for v in g.vertices}
    received = {v: Fraction(0) for v in g.vertices}
    for x in g.vertices:
        for y, mass in phi(x).items():
            if y not in received:
                raise ForestLabError("transport sends mass outside the window")
            sent[x] += mass
            received[y] += mass
    return sent, received


def mtp_check(spec, g, replicates=1, rng=None, mark_prob=0.25):
    """Mass transport check.  Exact mode: the per-vertex-averaged sent mass
    equals the received mass bit-exactly (Fraction arithmetic).  Monte Carlo
    mode: means and standard errors of sent/received mass at a fixed root
    over invariantly resampled marks."""
    if spec.name not in TRANSPORTS:
        raise GraphSpecError("unknown transport %r" % (spec.name,))
    factory = TRANSPORTS[spec.name]
    n = g.n_vertices()
    if spec.mode == "exact":
        phi = factory(g, spec.params, frozenset())
        sent, received = _transport_sums(g, phi)
        mean_sent = sum(sent.values()) / n
        mean_received = sum(received.values()) / n
        return {
            "mode": "exact",
            "sent_mean": mean_sent,
            "received_mean": mean_received,
            "equal": mean_sent == mean_received,
        }
    if spec.mode != "monte-carlo":
        raise GraphSpecError("unknown mtp mode %r" % (spec.mode,))
    root = g.vertex_list()[0]
    sent_samples = []
    received_samples = []
    for _ in range(replicates):
        marks = frozenset(
            v for v in g.vertices if rng.random() < mark_prob
        )
        phi = factory(g, spec.params, marks)
        sent, received = _transport_sums(g, phi)
        sent_samples.append(float(sent[root]))
        received_samples.append(float(received[root]))
    sent_arr = np.asarray(sent_samples)
    recv_arr = np.asarray(received_samples)
    return {
        "mode": "monte-carlo",
        "replicates": replicates,
        "sent_mean": float(sent_arr.mean()),
        "received_mean": float(recv_arr.mean()),
        "sent_se": float(sent_arr.std(ddof=1) / np.sqrt(replicates)),
        "received_se": float(recv_arr.std(ddof=1) / np.sqrt(replicates)),
    }


# -- small statistical helpers ------------------------------------------


def permutation_test(a, b, rng, n_perm=2000):
    """Two-sided permutation p-value for the difference of means."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    observed = abs(a.mean() - b.mean())
    pooled = np.concatenate([a, b])
    na = len(a)
    hits = 0
    for _ in range(n_perm):
        perm = rng.permutation(pooled)
        if abs(perm[:na].mean() - perm[na:].mean()) >= observed - 1e-12:
            hits += 1
    return (hits + 1) / (n_perm + 1)


def auc_score(positives, negatives):
    """Mann-Whitney AUC of a scalar score separating two groups."""
    pos = np.asarray(positives, dtype=float)
    neg = np.asarray(negatives, dtype=float)
    wins = 0.0
    for p in pos:
        wins += np.sum(p > neg) + 0.5 * np.sum(p == neg)
    return wins / (len(pos) * len(neg))
