"""Finite graph windows: tori, tree balls, edge-list graphs, wired completions,
and the decorated gadget graph.

Graphs are immutable after construction.  Edge ids are small ints, stable under
the wired completion (the completion appends new ids after the originals), so
forest configurations and surgery records can be replayed across views.

Conventions:
  - vertex ids are strings;
  - no self-loops, parallel edges allowed;
  - the wired vertex gets the reserved id "@z";
  - edge-to-vertex distance is min over the edge's endpoints.
"""

from collections import deque
from dataclasses import dataclass

from .errors import GraphSpecError

WIRED_ID = "@z"

ROLES = ("none", "base", "prime", "double_prime")


@dataclass(frozen=True)
class VertexMark:
    boundary: bool = False
    stubs: int = 0
    role: str = "none"


class Graph:
    """Immutable finite multigraph with optional wired vertex and vertex marks.

    vertices: dict id -> VertexMark (insertion order is the canonical order)
    edges:    dict eid -> (u, v)
    wired:    id of the wired vertex, or None
    """

    def __init__(self, vertices, edges, wired=None):
        verts = {}
        for v, mark in vertices.items():
            if not isinstance(v, str):
                raise GraphSpecError("vertex ids must be strings, got %r" % (v,))
            if mark.role not in ROLES:
                raise GraphSpecError("unknown role %r" % (mark.role,))
            verts[v] = mark
        eds = {}
        for eid, (u, v) in edges.items():
            if u == v:
                raise GraphSpecError("self-loop at %r" % (u,))
            if u not in verts or v not in verts:
                raise GraphSpecError("edge %r references missing vertex" % (eid,))
            eds[eid] = (u, v)
        if wired is not None:
            if wired not in verts:
                raise GraphSpecError("wired vertex %r not in graph" % (wired,))
            if verts[wired].role != "none":
                raise GraphSpecError("wired vertex cannot carry a gadget role")
        self._vertices = verts
        self._edges = eds
        self.wired = wired
        adj = {v: [] for v in verts}
        for eid, (u, v) in eds.items():
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self._adj = {v: tuple(nbrs) for v, nbrs in adj.items()}

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return self._edges

    def vertex_list(self):
        return list(self._vertices)

    def n_vertices(self):
        return len(self._vertices)

    def n_edges(self):
        return len(self._edges)

    def endpoints(self, eid):
        return self._edges[eid]

    def incident(self, v):
        """Tuple of (neighbor, eid) pairs; parallel edges appear once each."""
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def mark(self, v):
        return self._vertices[v]

    def has_roles(self):
        return any(m.role != "none" for m in self._vertices.values())

    def window_vertices(self):
        """Vertices excluding the wired vertex."""
        if self.wired is None:
            return list(self._vertices)
        return [v for v in self._vertices if v != self.wired]

    def wired_star(self):
        """Edge ids incident to the wired vertex."""
        if self.wired is None:
            return frozenset()
        return frozenset(eid for _, eid in self._adj[self.wired])

    def window_edges(self):
        """Edge ids not incident to the wired vertex."""
        star = self.wired_star()
        return frozenset(e for e in self._edges if e not in star)

    # -- metric ----------------------------------------------------------

    def distances_from(self, x):
        """BFS distance from x to every reachable vertex."""
        if x not in self._vertices:
            raise GraphSpecError("vertex %r not in graph" % (x,))
        dist = {x: 0}
        queue = deque([x])
        while queue:
            u = queue.popleft()
            for w, _ in self._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def eccentricity(self, x):
        return max(self.distances_from(x).values())

    def edge_distance(self, x, eid, dist=None):
        """dist(x, e) = min over endpoints of e."""
        if dist is None:
            dist = self.distances_from(x)
        u, v = self._edges[eid]
        du = dist.get(u)
        dv = dist.get(v)
        if du is None and dv is None:
            return None
        if du is None:
            return dv
        if dv is None:
            return du
        return min(du, dv)

    def ball(self, x, r):
        """Vertex set of the closed ball of radius r around x."""
        dist = self.distances_from(x)
        return frozenset(v for v, d in dist.items() if d <= r)

    def sphere_edges(self, x, k):
        """Edges e with min endpoint distance from x equal to k."""
        dist = self.distances_from(x)
        out = set()
        for eid in self._edges:
            if self.edge_distance(x, eid, dist) == k:
                out.add(eid)
        return frozenset(out)


# -- builders ------------------------------------------------------------


def build_torus(dimension, side):
    """Discrete torus (Z/side)^dimension; 2*dimension-regular, vertex-transitive."""
    if dimension < 1:
        raise GraphSpecError("dimension must be positive")
    if side < 3:
        raise GraphSpecError("side must be >= 3 to avoid parallel edges")

    def name(coord):
        return ",".join(str(c) for c in coord)

    coords = [()]
    for _ in range(dimension):
        coords = [c + (i,) for c in coords for i in range(side)]
    vertices = {name(c): VertexMark() for c in coords}
    edges = {}
    eid = 0
    for c in coords:
        for axis in range(dimension):
            nb = list(c)
            nb[axis] = (nb[axis] + 1) % side
            edges[eid] = (name(c), name(tuple(nb)))
            eid += 1
    return Graph(vertices, edges)


def build_tree_ball(degree, radius):
    """Ball of the degree-regular tree rooted at "o"; leaves are boundary
    vertices with degree-1 exterior stubs each."""
    if degree < 3:
        raise GraphSpecError("degree must be >= 3")
    if radius < 1:
        raise GraphSpecError("radius must be >= 1")
    vertices = {}
    edges = {}
    eid = 0
    root = "o"
    vertices[root] = VertexMark()
    frontier = []
    for i in range(degree):
        child = "o.%d" % i
        frontier.append(child)
        edges[eid] = (root, child)
        eid += 1
    for depth in range(2, radius + 1):
        nxt = []
        for parent in frontier:
            vertices[parent] = VertexMark()
            for i in range(degree - 1):
                child = "%s.%d" % (parent, i)
                nxt.append(child)
                edges[eid] = (parent, child)
                eid += 1
        frontier = nxt
    for leaf in frontier:
        vertices[leaf] = VertexMark(boundary=True, stubs=degree - 1)
    return Graph(vertices, edges)


def build_from_edge_list(spec):
    """Build a graph from {"vertices": [{"id", "boundary", "stubs", "role"}],
    "edges": [[u, v], ...]}; the same schema the CLI emits and consumes."""
    vertices = {}
    for entry in spec.get("vertices", []):
        vid = entry["id"]
        vertices[vid] = VertexMark(
            boundary=bool(entry.get("boundary", False)),
            stubs=int(entry.get("stubs", 0)),
            role=entry.get("role", "none"),
        )
    edges = {}
    for eid, (u, v) in enumerate(spec.get("edges", [])):
        edges[eid] = (u, v)
    return Graph(vertices, edges)


def graph_to_spec(g):
    """Inverse of build_from_edge_list, modulo the wired vertex (not emitted)."""
    return {
        "vertices": [
            {
                "id": v,
                "boundary": m.boundary,
                "stubs": m.stubs,
                "role": m.role,
            }
            for v, m in g.vertices.items()
            if v != g.wired
        ],
        "edges": [list(g.endpoints(e)) for e in sorted(g.window_edges())],
    }


def wire_boundary(g):
    """Wired completion: add the vertex "@z" and, for every boundary vertex,
    one parallel edge to it per declared stub.  Base edge ids are preserved."""
    if g.wired is not None:
        raise GraphSpecError("graph is already wired")
    boundary = [v for v in g.vertices if g.mark(v).boundary]
    if not boundary:
        raise GraphSpecError("no boundary vertices to wire")
    if WIRED_ID in g.vertices:
        raise GraphSpecError("reserved vertex id %r already used" % WIRED_ID)
    vertices = dict(g.vertices)
    vertices[WIRED_ID] = VertexMark()
    edges = dict(g.edges)
    eid = max(edges, default=-1) + 1
    for v in boundary:
        stubs = max(1, g.mark(v).stubs)
        for _ in range(stubs):
            edges[eid] = (v, WIRED_ID)
            eid += 1
    return Graph(vertices, edges, wired=WIRED_ID)


def build_decorated(base):
    """Attach to each base vertex v a triangle gadget on {v, v', v''}.
    Applying to an already decorated graph is rejected."""
    if base.has_roles():
        raise GraphSpecError("graph already carries gadget roles")
    vertices = {}
    for v, m in base.vertices.items():
        vertices[v] = VertexMark(boundary=m.boundary, stubs=m.stubs, role="base")
    edges = dict(base.edges)
    eid = max(edges, default=-1) + 1
    for v in base.vertices:
        p, pp = v + "'", v + "''"
        vertices[p] = VertexMark(role="prime")
        vertices[pp] = VertexMark(role="double_prime")
        edges[eid] = (v, p)
        edges[eid + 1] = (v, pp)
        edges[eid + 2] = (p, pp)
        eid += 3
    return Graph(vertices, edges, wired=base.wired)


def gadget_edges(g, v):
    """Edge ids of the triangle gadget attached to base vertex v:
    ({v,v'}, {v,v''}, {v',v''})."""
    p, pp = v + "'", v + "''"
    out = {}
    for eid, (a, b) in g.edges.items():
        pair = {a, b}
        if pair == {v, p}:
            out["vp"] = eid
        elif pair == {v, pp}:
            out["vpp"] = eid
        elif pair == {p, pp}:
            out["ppp"] = eid
    return out["vp"], out["vpp"], out["ppp"]
