"""Weak-insertion-tolerance surgery.

Two constructions of the compensating edge f for inserting an edge e={x,y}
between distinct clusters:

  - uniform forests: walk the tree path from x toward y and take the first
    edge of the radius-(r+1) edge sphere around x;
  - minimal forests: iterate the relabelling sequence (Z_i, f_i), pushing the
    labels of intermediate edges below the terminal threshold, so that the
    forest is unchanged but the attaining edge of e lands outside the ball.

On enumerable wired instances the distortion bound (every image tree has at
most |S(x, r+1)| preimages) is verified exactly.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import SurgeryError
from .forests import (
    DisjointSets,
    ForestConfig,
    kruskal_forest,
    minimax_connect,
    z_value,
)
from .oracles import enumerate_spanning_trees


@dataclass(frozen=True)
class SurgeryRecord:
    edge: int
    anchor: str
    radius: int
    pivot: Optional[int]  # window compensating edge, None for pure insertion
    mode: str  # "usf" | "msf"
    result: ForestConfig


@dataclass(frozen=True)
class RelabelResult:
    """Trace of the relabelling iteration."""

    pivots: tuple  # (f_1, ..., f_k); last entry may be None (no cycle)
    thresholds: tuple  # (Z_1, ..., Z_k) matching labels, last may be None
    k: int
    labels: dict  # the modified labelling lambda'
    terminal: Optional[int]  # f_k as an edge of the ambient graph
    window_pivot: Optional[int]  # f_k if it is a window edge, else None


def _components(g, edge_set):
    """Map vertex -> frozenset cluster for an acyclic edge set, window only."""
    uf = DisjointSets(g.vertex_list())
    for eid in edge_set:
        u, v = g.endpoints(eid)
        uf.union(u, v)
    clusters = {}
    for v in g.window_vertices():
        clusters.setdefault(uf.find(v), []).append(v)
    out = {}
    for members in clusters.values():
        fs = frozenset(members)
        for v in members:
            out[v] = fs
    return out


def apply_surgery(omega, e, f=None):
    """pi_e^f: insert e, delete f.  Preconditions keep the result acyclic."""
    g = omega.graph
    if e in omega.edges:
        raise SurgeryError("edge-present", "edge %r already in the forest" % e)
    if f is not None and f not in omega.edges:
        raise SurgeryError("pivot-missing", "edge %r not in the forest" % f)
    x, y = g.endpoints(e)
    comp = _components(g, omega.edges)
    if comp.get(x) is comp.get(y) and comp.get(x) is not None:
        raise SurgeryError("same-cluster", "endpoints of %r share a cluster" % e)
    edges = set(omega.edges)
    edges.add(e)
    if f is not None:
        edges.discard(f)
    return ForestConfig(g, frozenset(edges), mode=omega.mode)


def tree_path(g, tree_edges, x, y):
    """Edge ids along the unique path from x to y inside a tree edge set."""
    adj = {}
    for eid in tree_edges:
        u, v = g.endpoints(eid)
        adj.setdefault(u, []).append((v, eid))
        adj.setdefault(v, []).append((u, eid))
    prev = {x: None}
    stack = [x]
    while stack:
        u = stack.pop()
        if u == y:
            break
        for w, eid in adj.get(u, ()):
            if w not in prev:
                prev[w] = (u, eid)
                stack.append(w)
    if y not in prev:
        raise SurgeryError("no-path", "%r and %r not connected in tree" % (x, y))
    path = []
    u = y
    while prev[u] is not None:
        p, eid = prev[u]
        path.append(eid)
        u = p
    path.reverse()
    return path


def _window_edge_distance(g, dist, eid):
    """min over the edge's window endpoints of their window distance; the
    wired vertex does not carry a distance."""
    u, v = g.endpoints(eid)
    ds = [dist[w] for w in (u, v) if w in dist]
    return min(ds) if ds else None


def window_sphere_edges(g, x, k):
    """Edge sphere at index k under window distances (the wired vertex is
    transparent: it belongs to no sphere and z-edges sit at their window
    endpoint's distance)."""
    dist = _window_distances(g, x) if g.wired is not None else g.distances_from(x)
    return frozenset(
        eid for eid in g.edges if _window_edge_distance(g, dist, eid) == k
    )


def usf_pivot_edge(tree, e, x, r):
    """First sphere-(r+1) edge along the tree path from x toward the far
    endpoint of e.  Requires the endpoints to be disconnected inside the
    ball-restricted tree (the D condition).  All distances are window
    distances: the wired vertex models structure outside the window and is
    excluded from balls and spheres."""
    g = tree.graph
    u, v = g.endpoints(e)
    if x == u:
        y = v
    elif x == v:
        y = u
    else:
        raise SurgeryError("bad-anchor", "%r is not an endpoint of %r" % (x, e))
    dist = _window_distances(g, x) if g.wired is not None else g.distances_from(x)
    ball = {w for w, d in dist.items() if d <= r + 1}
    # ball-restricted tree: tree edges with both endpoints inside the ball
    uf = DisjointSets(list(ball))
    for eid in tree.edges:
        a, b = g.endpoints(eid)
        if a in ball and b in ball:
            uf.union(a, b)
    if y in ball and uf.find(x) == uf.find(y):
        raise SurgeryError(
            "d-fails", "endpoints joined inside the radius-%d ball" % (r + 1)
        )
    for eid in tree_path(g, tree.edges, x, y):
        if _window_edge_distance(g, dist, eid) == r + 1:
            return eid
    raise SurgeryError("no-sphere-edge", "tree path never meets the edge sphere")


def msf_relabel(g, labels, e, x, r, forest=None):
    """Relabelling construction of the compensating edge for minimal forests.

    g is the ambient graph (the wired completion for the wired class) and
    labels an injective labelling of all its edges.  Clusters and the ball
    live on the window.  Iterates the thresholds Z_i with previous pivots
    contracted for free, stops at the first pivot outside
    C_y union (B(x,r) cap C_x), and pushes earlier pivot labels below the
    terminal threshold.  The forest of the modified labelling equals the
    original forest; both facts are asserted.
    """
    if forest is None:
        forest = kruskal_forest(g, labels)
    window_forest = forest - g.wired_star()
    comp = _components(g, window_forest)
    u, v = g.endpoints(e)
    y = v if x == u else u if x == v else None
    if y is None:
        raise SurgeryError("bad-anchor", "%r is not an endpoint of %r" % (x, e))
    if comp[x] is comp[y]:
        raise SurgeryError("same-cluster", "endpoints share a window cluster")
    star = g.wired_star()
    wdist = {w: d for w, d in g.distances_from(x).items()}
    if g.wired is not None:
        # ball measured in the window: recompute avoiding the wired vertex
        wdist = _window_distances(g, x)

    def in_stop_set(eid):
        """f outside C_y union (B(x,r) cap C_x) terminates the iteration."""
        if eid in star:
            return True
        a, b = g.endpoints(eid)
        if a in comp[y] and b in comp[y]:
            return False
        if a in comp[x] and b in comp[x]:
            d = min(wdist.get(a, r + 1), wdist.get(b, r + 1))
            return d > r
        return True

    pivots = []
    thresholds = []
    freed = []
    while True:
        z, f = minimax_connect(g, labels, e, freed=freed)
        pivots.append(f)
        thresholds.append(z)
        if f is None or in_stop_set(f):
            break
        freed.append(f)
    k = len(pivots)
    terminal = pivots[-1]
    zk = thresholds[-1]
    new_labels = dict(labels)
    for f in freed:
        new_labels[f] = labels[f] * zk
    assert kruskal_forest(g, new_labels) == forest, "relabelling moved the forest"
    if terminal is not None:
        zres = z_value(g, new_labels, e, "wired" if g.wired else "free")
        assert zres.phi == terminal, "terminal pivot is not the attaining edge"
    window_pivot = terminal if (terminal is not None and terminal not in star) else None
    return RelabelResult(
        pivots=tuple(pivots),
        thresholds=tuple(thresholds),
        k=k,
        labels=new_labels,
        terminal=terminal,
        window_pivot=window_pivot,
    )


def _window_distances(g, x):
    """BFS distances avoiding the wired vertex."""
    from collections import deque

    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w, _ in g.incident(u):
            if w == g.wired:
                continue
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def msf_insert(g, relabeled, e):
    """Drop the label of e below the terminal threshold and return the new
    labelling and forest; asserts the predicted swap identity."""
    labels = dict(relabeled.labels)
    zres = z_value(g, labels, e, "wired" if g.wired else "free")
    if zres.z is not None:
        labels[e] = zres.z / 2.0
    else:
        labels[e] = min(labels.values()) / 2.0
    forest = kruskal_forest(g, labels)
    before = kruskal_forest(g, relabeled.labels)
    predicted = set(before) | {e}
    if zres.phi is not None:
        predicted.discard(zres.phi)
    assert forest == frozenset(predicted), "swap identity failed"
    return labels, ForestConfig(g, forest, mode="fmsf" if g.wired is None else "wmsf")


def window_pivot_of(g, f):
    """A wired-star pivot is invisible in the window: report it as None."""
    return None if (f is None or f in g.wired_star()) else f


@dataclass(frozen=True)
class DeltaReport:
    n_trees: int
    n_atoms: int  # trees where the window separates the endpoints and D holds
    n_excluded: int  # D-condition failures
    sphere_size: int
    max_preimages: int
    satisfied: bool
    vacuous: bool


def _pivot_map(gh, e, x, r, cap):
    """For each spanning tree of the wired graph with the endpoints of e in
    distinct window clusters and D holding, the image tree under insertion."""
    enum = enumerate_spanning_trees(gh, cap=cap)
    u, v = gh.endpoints(e)
    atoms = {}
    excluded = 0
    for t in enum.trees:
        comp = _components(gh, t - gh.wired_star())
        if comp[u] is comp[v]:
            continue
        tree = ForestConfig(gh, t, mode="ust")
        try:
            f = usf_pivot_edge(tree, e, x, r)
        except SurgeryError as err:
            # d-fails: the D event does not hold; no-sphere-edge: the tree
            # path dodges the sphere through the wired vertex.  Both are
            # outside the domain of the pivot construction.
            if err.code in ("d-fails", "no-sphere-edge"):
                excluded += 1
                continue
            raise
        atoms[t] = frozenset(t | {e}) - {f}
    return enum, atoms, excluded


def radon_nikodym_exact(gh, e, x, r, cap=2000):
    """Per-atom probability distortion of the insertion map on an enumerable
    wired graph.  Atoms are window configurations with the endpoints of e in
    distinct clusters; the ratio of an atom is P(atom) / P(image of atom)."""
    enum, tree_map, _ = _pivot_map(gh, e, x, r, cap)
    star = gh.wired_star()
    by_window = {}
    for t, image in tree_map.items():
        key = tuple(sorted(t - star))
        by_window.setdefault(key, []).append(image)
    return {
        key: len(images) / len(set(images)) for key, images in by_window.items()
    }


def delta_bound_check(gh, e, x, r, cap=2000):
    """Verify P(pi_e^f A) >= |S(x, r+1)|^-1 P(A) for every A inside the D
    event, by bounding preimage counts per image tree."""
    enum, tree_map, excluded = _pivot_map(gh, e, x, r, cap)
    sphere = len(window_sphere_edges(gh, x, r + 1))
    preimages = {}
    for image in tree_map.values():
        preimages[image] = preimages.get(image, 0) + 1
    max_pre = max(preimages.values(), default=0)
    vacuous = not tree_map
    return DeltaReport(
        n_trees=enum.count,
        n_atoms=len(tree_map),
        n_excluded=excluded,
        sphere_size=sphere,
        max_preimages=max_pre,
        satisfied=vacuous or max_pre <= sphere,
        vacuous=vacuous,
    )
