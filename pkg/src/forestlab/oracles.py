"""Exact brute-force references: spanning tree enumeration and counting,
simple-cycle enumeration, the literal minimal-spanning-forest rule, and an
independent UST sampler (Aldous-Broder)."""

from dataclasses import dataclass

from .errors import CapExceededError, GraphSpecError
from .forests import DisjointSets, ForestConfig, UniformStream, check_injective

DEFAULT_TREE_CAP = 10**5
DEFAULT_CYCLE_CAP = 10**5


@dataclass(frozen=True)
class TreeEnumeration:
    trees: tuple  # tuple of frozensets of edge ids
    count: int


def count_spanning_trees(g):
    """Kirchhoff matrix-tree count, exact integer arithmetic (Bareiss)."""
    verts = g.vertex_list()
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for u, v in g.edges.values():
        i, j = idx[u], idx[v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    # any cofactor: drop the last row and column
    m = [row[: n - 1] for row in lap[: n - 1]]
    return _bareiss_det(m)


def _bareiss_det(m):
    """Fraction-free Gaussian elimination; exact determinant of an int matrix."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def enumerate_spanning_trees(g, cap=DEFAULT_TREE_CAP):
    """All spanning trees of a connected graph, each exactly once."""
    verts = g.vertex_list()
    n = len(verts)
    if len(g.distances_from(verts[0])) != n:
        raise GraphSpecError("graph is disconnected")
    total = count_spanning_trees(g)
    if total > cap:
        raise CapExceededError("%d spanning trees exceeds cap %d" % (total, cap))
    eids = sorted(g.edges)
    trees = []

    def can_connect(uf, start):
        probe = DisjointSets(verts)
        probe.parent.update(uf.parent)
        comp = len({probe.find(v) for v in verts})
        for eid in eids[start:]:
            u, v = g.endpoints(eid)
            if probe.union(u, v):
                comp -= 1
            if comp == 1:
                return True
        return comp == 1

    def rec(start, taken, uf):
        if len(taken) == n - 1:
            trees.append(frozenset(taken))
            return
        if len(eids) - start < (n - 1) - len(taken):
            return
        if not can_connect(uf, start):
            return
        for i in range(start, len(eids)):
            eid = eids[i]
            u, v = g.endpoints(eid)
            if uf.find(u) == uf.find(v):
                continue
            child = DisjointSets(verts)
            child.parent.update(uf.parent)
            child.union(u, v)
            taken.append(eid)
            rec(i + 1, taken, child)
            taken.pop()

    rec(0, [], DisjointSets(verts))
    assert len(trees) == total, "enumeration disagrees with matrix-tree count"
    return TreeEnumeration(tuple(trees), len(trees))


def enumerate_cycles_through(g, e, cycle_class="free", cap=DEFAULT_CYCLE_CAP):
    """All simple cycles containing e, as frozensets of edge ids.  The wired
    class admits cycles through the wired vertex; the free class forbids it."""
    banned = set()
    if cycle_class == "free" and g.wired is not None:
        banned = set(g.wired_star())
    elif cycle_class == "wired" and g.wired is None:
        raise GraphSpecError("wired cycle class requires a wired graph")
    x, y = g.endpoints(e)
    cycles = []
    path_edges = []
    visited = {x}

    def dfs(u):
        if len(cycles) > cap:
            raise CapExceededError("cycle enumeration exceeded cap %d" % cap)
        for w, eid in g.incident(u):
            if eid == e or eid in banned:
                continue
            if w == y:
                cycles.append(frozenset(path_edges + [eid, e]))
                continue
            if w in visited:
                continue
            visited.add(w)
            path_edges.append(eid)
            dfs(w)
            path_edges.pop()
            visited.remove(w)

    dfs(x)
    return cycles


def msf_by_definition(g, labels, cycle_class="free", cap=DEFAULT_CYCLE_CAP):
    """Literal rule: delete each edge whose label is maximal in some cycle of
    the class; keep everything else."""
    check_injective(labels)
    kept = set()
    for e in g.edges:
        deleted = False
        for cyc in enumerate_cycles_through(g, e, cycle_class, cap):
            if labels[e] == max(labels[c] for c in cyc):
                deleted = True
                break
        if not deleted:
            kept.add(e)
    return ForestConfig(g, frozenset(kept), mode="msf-oracle")


def aldous_broder_ust(g, rng, root=None):
    """Uniform spanning tree via first-entrance edges of a covering walk."""
    verts = g.vertex_list()
    if root is None:
        root = verts[0]
    if len(g.distances_from(root)) != len(verts):
        raise GraphSpecError("graph is disconnected")
    stream = rng if isinstance(rng, UniformStream) else UniformStream(rng)
    seen = {root}
    edges = set()
    u = root
    n = len(verts)
    while len(seen) < n:
        nbrs = g.incident(u)
        w, eid = nbrs[stream.index(len(nbrs))]
        if w not in seen:
            seen.add(w)
            edges.add(eid)
        u = w
    return ForestConfig(g, frozenset(edges), mode="ust")
