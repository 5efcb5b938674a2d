"""Forest samplers and the minimal-spanning-forest label calculus.

Uniform spanning trees are sampled with Wilson's algorithm (loop-erased random
walks); the minimal spanning forest of an injectively labelled graph is the
Kruskal forest, which on a finite graph coincides with deleting every edge
whose label is maximal in some cycle.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import ForestLabError, GraphSpecError
from .graphs import Graph, wire_boundary


class DisjointSets:
    """Union-find with path halving."""

    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


@dataclass(frozen=True)
class ForestConfig:
    """An acyclic edge subset of a host graph."""

    graph: Graph
    edges: frozenset
    mode: str = "forest"

    def __post_init__(self):
        uf = DisjointSets(self.graph.vertex_list())
        for eid in self.edges:
            u, v = self.graph.endpoints(eid)
            if not uf.union(u, v):
                raise ForestLabError("edge set contains a cycle")

    def degree(self, v):
        return sum(1 for _, eid in self.graph.incident(v) if eid in self.edges)

    def window_edges(self):
        return self.edges - self.graph.wired_star()


@dataclass(frozen=True)
class ZResult:
    """Min-cycle-max label of an edge and the attaining edge, if any."""

    z: Optional[float]
    phi: Optional[int]


class UniformStream:
    """Buffered uniform(0,1) draws from a numpy Generator; one stream per
    concurrent worker."""

    def __init__(self, rng, block=4096):
        self._rng = rng
        self._block = block
        self._buf = rng.random(block)
        self._i = 0

    def uniform(self):
        if self._i >= self._block:
            self._buf = self._rng.random(self._block)
            self._i = 0
        u = self._buf[self._i]
        self._i += 1
        return u

    def index(self, n):
        """Uniform int in [0, n)."""
        i = int(self.uniform() * n)
        return n - 1 if i >= n else i


def sample_labels(g, rng):
    """I.i.d. uniform(0,1) labels, one per edge, resampled until injective."""
    eids = sorted(g.edges)
    while True:
        vals = rng.random(len(eids))
        if len(set(vals.tolist())) == len(eids):
            return {e: float(x) for e, x in zip(eids, vals)}


def check_injective(labels):
    if len(set(labels.values())) != len(labels):
        raise ForestLabError("edge labels are not injective")


def wilson_ust(g, root, rng):
    """Uniform spanning tree of a connected multigraph, rooted at `root`."""
    dist = g.distances_from(root)
    if len(dist) != g.n_vertices():
        raise GraphSpecError("graph is disconnected")
    stream = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    in_tree = {root}
    next_hop = {}
    edges = set()
    for v in g.vertex_list():
        if v in in_tree:
            continue
        u = v
        while u not in in_tree:
            nbrs = g.incident(u)
            next_hop[u] = nbrs[stream.index(len(nbrs))]
            u = next_hop[u][0]
        u = v
        while u not in in_tree:
            in_tree.add(u)
            w, eid = next_hop[u]
            edges.add(eid)
            u = w
    return ForestConfig(g, frozenset(edges), mode="ust")


def fusf_window(g, rng):
    """Free uniform forest on a finite window: the UST of the window itself."""
    if g.wired is not None:
        raise GraphSpecError("fusf_window expects an unwired graph")
    root = g.vertex_list()[0]
    tree = wilson_ust(g, root, rng)
    return ForestConfig(g, tree.edges, mode="fusf")


def wusf_window(g, rng):
    """Wired uniform forest window: UST of the wired completion with the
    wired star removed."""
    gh = wire_boundary(g)
    tree = wilson_ust(gh, gh.wired, rng)
    return ForestConfig(g, tree.edges - gh.wired_star(), mode="wusf")


def kruskal_forest(g, labels):
    """Minimum-label spanning forest; equals deleting each edge whose label
    is maximal in some cycle."""
    uf = DisjointSets(g.vertex_list())
    taken = set()
    for eid in sorted(g.edges, key=labels.__getitem__):
        u, v = g.endpoints(eid)
        if uf.union(u, v):
            taken.add(eid)
    return frozenset(taken)


def free_msf(g, labels):
    check_injective(labels)
    return ForestConfig(g, kruskal_forest(g, labels), mode="fmsf")


def wired_labels(g, labels, z_labels):
    """Wired completion plus a joint injective labelling; z-edge labels are
    assigned in edge-id order."""
    gh = wire_boundary(g)
    star = sorted(gh.wired_star())
    if len(z_labels) != len(star):
        raise GraphSpecError(
            "need %d labels for wired edges, got %d" % (len(star), len(z_labels))
        )
    joint = dict(labels)
    for eid, lab in zip(star, z_labels):
        joint[eid] = float(lab)
    check_injective(joint)
    return gh, joint


def wired_msf_window(g, labels, z_labels):
    """Window of the minimal spanning forest of the wired completion; cycles
    through the wired vertex stand in for biinfinite paths."""
    gh, joint = wired_labels(g, labels, z_labels)
    forest = kruskal_forest(gh, joint)
    return ForestConfig(g, forest - gh.wired_star(), mode="wmsf")


def minimax_connect(g, labels, e, freed=(), exclude=()):
    """Connect the endpoints of e by union-find in ascending label order,
    with `freed` edges contracted at no label cost and `exclude` edges
    unavailable.  Returns (label, eid) of the connecting edge or (None, None).

    This realizes min over cycles through e of the max label on the cycle,
    with freed edges not counting toward the max.
    """
    x, y = g.endpoints(e)
    uf = DisjointSets(g.vertex_list())
    skip = set(freed) | set(exclude) | {e}
    for f in freed:
        u, v = g.endpoints(f)
        uf.union(u, v)
        if uf.find(x) == uf.find(y):
            raise ForestLabError("freed edges already connect the endpoints")
    for eid in sorted((c for c in g.edges if c not in skip), key=labels.__getitem__):
        u, v = g.endpoints(eid)
        uf.union(u, v)
        if uf.find(x) == uf.find(y):
            return labels[eid], eid
    return None, None


def z_value(g, labels, e, cycle_class="free"):
    """Z(e) = min over cycles through e of the max label on the cycle minus e,
    together with the attaining edge phi(e, lambda).

    cycle_class "free" restricts to cycles avoiding the wired vertex;
    "wired" requires a wired graph and admits cycles through it.
    """
    if cycle_class not in ("free", "wired"):
        raise GraphSpecError("unknown cycle class %r" % (cycle_class,))
    exclude = ()
    if cycle_class == "free" and g.wired is not None:
        exclude = g.wired_star()
    if cycle_class == "wired" and g.wired is None:
        raise GraphSpecError("wired cycle class requires a wired graph")
    z, phi = minimax_connect(g, labels, e, exclude=exclude)
    return ZResult(z, phi)


def predict_label_change(g, labels, e, new_label):
    """Forest after changing only the label of e, by the four-case swap rule;
    never recomputes from scratch."""
    if new_label in labels.values():
        raise ForestLabError("new label collides with an existing label")
    forest = kruskal_forest(g, labels)
    zres = z_value(g, labels, e, "wired" if g.wired is not None else "free")
    if zres.z is None:
        # bridge: always in the forest, any label
        return ForestConfig(g, forest, mode="fmsf")
    if e in forest:
        if new_label < zres.z:
            out = forest
        else:
            out = (forest - {e}) | {zres.phi}
    else:
        if new_label > zres.z:
            out = forest
        else:
            out = (forest - {zres.phi}) | {e}
    return ForestConfig(g, frozenset(out), mode="fmsf")


def threshold_subgraph(g, labels, alpha):
    """Edges with label strictly below alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise GraphSpecError("alpha must lie in [0, 1]")
    return frozenset(e for e in g.edges if labels[e] < alpha)
