import numpy as np
import pytest

from forestlab.graphs import build_from_edge_list


def edge_list_graph(edges, boundary=(), stubs=None, roles=None):
    """Small helper: build a graph from endpoint pairs and optional marks."""
    vertices = sorted({v for pair in edges for v in pair})
    stubs = stubs or {}
    roles = roles or {}
    spec = {
        "vertices": [
            {
                "id": v,
                "boundary": v in boundary,
                "stubs": stubs.get(v, 1 if v in boundary else 0),
                "role": roles.get(v, "none"),
            }
            for v in vertices
        ],
        "edges": [list(pair) for pair in edges],
    }
    return build_from_edge_list(spec)


def triangle():
    return edge_list_graph([("a", "b"), ("b", "c"), ("c", "a")])


TRIANGLE_LABELS = {0: 0.1, 1: 0.5, 2: 0.9}  # ab, bc, ca


def path_graph(n, boundary_ends=False):
    names = ["v%d" % i for i in range(n)]
    boundary = {names[0], names[-1]} if boundary_ends else set()
    return edge_list_graph(
        [(names[i], names[i + 1]) for i in range(n - 1)], boundary=boundary
    )


def cycle_graph(n):
    names = ["v%d" % i for i in range(n)]
    return edge_list_graph(
        [(names[i], names[(i + 1) % n]) for i in range(n)]
    )


def complete_graph(n):
    names = ["v%d" % i for i in range(n)]
    return edge_list_graph(
        [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    )


def grid_graph(rows, cols, boundary_rim=False):
    def name(i, j):
        return "g%d_%d" % (i, j)

    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((name(i, j), name(i, j + 1)))
            if i + 1 < rows:
                edges.append((name(i, j), name(i + 1, j)))
    boundary = set()
    if boundary_rim:
        for i in range(rows):
            for j in range(cols):
                if i in (0, rows - 1) or j in (0, cols - 1):
                    boundary.add(name(i, j))
    return edge_list_graph(edges, boundary=boundary)


def random_connected_graph(rng, n_min=4, n_max=12, extra_max=4, boundary_frac=0.0):
    """Random connected multigraph: a random spanning tree plus a few extra
    edges (parallels allowed); optionally marks some vertices boundary."""
    n = int(rng.integers(n_min, n_max + 1))
    names = ["v%d" % i for i in range(n)]
    edges = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.append((names[j], names[i]))
    extra = int(rng.integers(0, extra_max + 1))
    for _ in range(extra):
        i, j = rng.choice(n, size=2, replace=False)
        edges.append((names[int(i)], names[int(j)]))
    boundary = set()
    if boundary_frac > 0:
        k = max(1, int(round(boundary_frac * n)))
        picks = rng.choice(n, size=k, replace=False)
        boundary = {names[int(i)] for i in picks}
    return edge_list_graph(edges, boundary=boundary)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
